#include "doctest.h"

#include <algorithm>
#include <sstream>

#include <functional>
#include <random>

#include "oracle/random_networks.hpp"
#include "tmncell/circularity.hpp"
#include "tmncell/errors.hpp"
#include "json.hpp"
#include "tmncell/glucorx.hpp"

using namespace tmncell;

namespace {

NetworkSpec cell_spec(int bins, std::uint64_t arrive_in, std::vector<std::uint64_t> departs) {
  NetworkSpec spec;
  spec.vertices.push_back({1, "stock", {"x"}, Mass{1000}});
  spec.vertices.push_back({2, "cell", {"x"}, Mass{}});
  for (int d = 1; d <= bins; ++d) spec.vertices.push_back({2 + d, "bin", {"x"}, Mass{}});
  int id = 2 + bins;
  spec.arcs.push_back({++id, 1, 2, {Mass{1000}, SampleIndex{5}, SampleIndex{arrive_in}}, {"x"}});
  for (int d = 1; d <= bins; ++d) {
    spec.arcs.push_back({++id, 2, 2 + d, {Mass{}, SampleIndex{departs[d - 1]}, SampleIndex{departs[d - 1] + 5}}, {"x"}});
  }
  return spec;
}

// Length (in arcs) of the shortest closed walk through start by exhaustive
// search over simple cycles; 0 if none.
std::size_t brute_force_cycle(const TMNetwork& net, int start, const MaterialSet& wanted) {
  auto ok = [&](const MaterialSet& have) { return std::includes(have.begin(), have.end(), wanted.begin(), wanted.end()); };
  if (!ok(net.vertex(start).materials)) return 0;
  std::size_t best = 0;
  std::vector<bool> on_path(net.vertex_count() + 1, false);
  std::function<void(int, std::size_t)> dfs = [&](int v, std::size_t len) {
    for (const auto& a : net.arcs()) {
      if (a.tail != v || !ok(a.materials) || !ok(net.vertex(a.head).materials)) continue;
      if (a.head == start) {
        if (best == 0 || len + 1 < best) best = len + 1;
      } else if (!on_path[a.head]) {
        on_path[a.head] = true;
        dfs(a.head, len + 1);
        on_path[a.head] = false;
      }
    }
  };
  on_path[start] = true;
  dfs(start, 0);
  return best;
}

void check_witness(const TMNetwork& net, int start, const MaterialSet& wanted, const std::vector<int>& w) {
  REQUIRE(w.size() >= 3);
  REQUIRE(w.size() % 2 == 1);
  CHECK(w.front() == start);
  CHECK(w.back() == start);
  for (std::size_t k = 1; k < w.size(); k += 2) {
    const auto& a = net.arc(w[k]);
    CHECK(a.tail == w[k - 1]);
    CHECK(a.head == w[k + 1]);
    CHECK(std::includes(a.materials.begin(), a.materials.end(), wanted.begin(), wanted.end()));
    const auto& v = net.vertex(w[k + 1]).materials;
    CHECK(std::includes(v.begin(), v.end(), wanted.begin(), wanted.end()));
  }
}

} // namespace

TEST_CASE("separation rate counts rows of the mass-flow matrix") {
  CHECK(separation_rate(glucorx::build_glucorx_network()) == 6);
  CHECK(separation_rate(build_network(cell_spec(1, 30, {30}))) == 3);
  CHECK(separation_rate(build_network(cell_spec(10, 30, std::vector<std::uint64_t>(10, 40)))) == 12);
}

TEST_CASE("separation time") {
  const auto st = separation_time(glucorx::build_glucorx_network(), 2);
  CHECK(st.seconds == 330.0);
  CHECK(st.samples == 330);
  CHECK_FALSE(st.negative);

  const auto pass = separation_time(build_network(cell_spec(1, 30, {30})), 2);
  CHECK(pass.seconds == 0.0);

  auto slow = glucorx::glucorx_spec();
  slow.sample_time_s = 2.0;
  CHECK(separation_time(build_network(slow), 2).seconds == 660.0);
}

TEST_CASE("separation time errors and warnings") {
  const auto net = glucorx::build_glucorx_network();
  CHECK_THROWS_AS(separation_time(net, 1), MissingSchedule);  // no in-arc
  CHECK_THROWS_AS(separation_time(net, 3), MissingSchedule);  // no out-arc
  CHECK_THROWS_AS(separation_time(net, 42), UnknownVertex);

  const auto early = separation_time(build_network(cell_spec(2, 30, {10, 20})), 2);
  CHECK(early.negative);
  CHECK(early.samples == -10);
}

TEST_CASE("GlucoRx cell is not thermodynamically circular") {
  const auto net = glucorx::build_glucorx_network();
  const auto r = is_thermodynamically_circular(net, 1, {glucorx::kMaterial});
  CHECK_FALSE(r.circular);
  CHECK(r.witness.empty());
  CHECK_FALSE(is_thermodynamically_circular(net, 1, {}).circular);
}

TEST_CASE("a return arc from a bin closes the loop") {
  auto spec = glucorx::glucorx_spec();
  spec.arcs.push_back({12, 3, 1, {Mass{31'600}, SampleIndex{370}, SampleIndex{380}}, {glucorx::kMaterial}});
  const auto net = build_network(spec);
  const auto r = is_thermodynamically_circular(net, 1, {glucorx::kMaterial});
  CHECK(r.circular);
  CHECK(r.witness == std::vector<int>{1, 7, 2, 8, 3, 12, 1});
  check_witness(net, 1, {glucorx::kMaterial}, r.witness);

  // The return arc does not carry the PCB label, so the PCB flow is not circular.
  CHECK_FALSE(is_thermodynamically_circular(net, 1, {"pcb"}).circular);
}

TEST_CASE("every possible bin return arc flips the verdict") {
  for (int bin = 3; bin <= 6; ++bin) {
    auto spec = glucorx::glucorx_spec();
    spec.arcs.push_back({12, bin, 1, {Mass{}, SampleIndex{390}, SampleIndex{395}}, {glucorx::kMaterial}});
    const auto net = build_network(spec);
    const auto r = is_thermodynamically_circular(net, 1, {glucorx::kMaterial});
    CHECK(r.circular);
    check_witness(net, 1, {glucorx::kMaterial}, r.witness);
  }
}

TEST_CASE("single vertex is not circular; unknown start throws") {
  NetworkSpec spec;
  spec.vertices = {{1, "a", {"m"}, Mass{1}}};
  const auto net = build_network(spec);
  CHECK_FALSE(is_thermodynamically_circular(net, 1, {"m"}).circular);
  CHECK_THROWS_AS(is_thermodynamically_circular(net, 2, {"m"}), UnknownVertex);
}

TEST_CASE("witness is a shortest cycle, matching exhaustive search") {
  std::mt19937_64 rng(314159);
  for (int trial = 0; trial < 300; ++trial) {
    auto spec = oracle::random_topology(rng, 6, false, 0.3);
    std::bernoulli_distribution keep(0.8);
    for (auto& v : spec.vertices) v.materials = keep(rng) ? MaterialSet{"a", "b"} : MaterialSet{"a"};
    for (auto& a : spec.arcs) a.materials = keep(rng) ? MaterialSet{"a", "b"} : MaterialSet{"b"};
    const auto net = build_network(spec);
    for (const MaterialSet& wanted : {MaterialSet{}, MaterialSet{"a"}, MaterialSet{"a", "b"}}) {
      for (const auto& v : net.vertices()) {
        const auto r = is_thermodynamically_circular(net, v.id, wanted);
        const auto expected = brute_force_cycle(net, v.id, wanted);
        CHECK(r.circular == (expected > 0));
        if (r.circular) {
          CHECK((r.witness.size() - 1) / 2 == expected);
          check_witness(net, v.id, wanted, r.witness);
        }
      }
    }
  }
}

TEST_CASE("acyclic digraphs are never circular and adding arcs never breaks circularity") {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const auto dag = build_network(oracle::random_topology(rng, 7, true, 0.5));
    for (const auto& v : dag.vertices()) CHECK_FALSE(is_thermodynamically_circular(dag, v.id, {}).circular);

    auto spec = oracle::random_topology(rng, 6, false, 0.25);
    const auto before = build_network(spec);
    const int nv = static_cast<int>(spec.vertices.size());
    std::uniform_int_distribution<int> pick(1, nv);
    const int tail = pick(rng), head = pick(rng);
    if (tail == head || before.arc_between(tail, head)) continue;
    spec.arcs.push_back({nv + static_cast<int>(spec.arcs.size()) + 1, tail, head,
                         {Mass{}, SampleIndex{0}, SampleIndex{1}}, {"m"}});
    const auto after = build_network(spec);
    for (const auto& v : before.vertices()) {
      if (is_thermodynamically_circular(before, v.id, {}).circular) {
        CHECK(is_thermodynamically_circular(after, v.id, {}).circular);
      }
    }
  }
}

TEST_CASE("r_s depends on topology only; t_s is translation invariant and linear in T") {
  std::mt19937_64 rng(1618);
  for (int trial = 0; trial < 200; ++trial) {
    auto spec = cell_spec(1 + trial % 6, 30, std::vector<std::uint64_t>(1 + trial % 6, 0));
    oracle::make_feasible(rng, spec, 80, 0);
    const auto base = build_network(spec);
    const auto shift = std::uniform_int_distribution<std::uint64_t>(1, 1000)(rng);
    auto moved = spec;
    for (auto& a : moved.arcs) {
      a.schedule.departs.value += shift;
      a.schedule.arrives.value += shift;
      a.schedule.amount = Mass{a.schedule.amount.mg() / 2 + 1};
    }
    moved.vertices[0].initial_stock = Mass{12345};
    const auto shifted = build_network(moved);
    CHECK(separation_rate(shifted) == separation_rate(base));
    CHECK(separation_time(shifted, 2).samples == separation_time(base, 2).samples);

    auto scaled = spec;
    scaled.sample_time_s = spec.sample_time_s * 3.0;
    CHECK(separation_time(build_network(scaled), 2).seconds ==
          doctest::Approx(3.0 * separation_time(base, 2).seconds));
  }
}

TEST_CASE("indicator JSON has the four flat keys") {
  const auto run = glucorx::run_glucorx();
  std::ostringstream os;
  write_indicator_json(os, run.indicators);
  const auto j = nlohmann::json::parse(os.str());
  CHECK(j.size() == 4);
  CHECK(j.at("r_s") == 6);
  CHECK(j.at("t_s_seconds").get<double>() == 330.0);
  CHECK(j.at("circular") == false);
  CHECK(j.at("witness_cycle").empty());
}
