#include "tmncell/circularity.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <ostream>

#include "json.hpp"

#include "tmncell/errors.hpp"
#include "tmncell/format.hpp"

namespace tmncell {

namespace {

bool processes(const MaterialSet& carried, const MaterialSet& wanted) {
  return std::includes(carried.begin(), carried.end(), wanted.begin(), wanted.end());
}

} // namespace

int separation_rate(const TMNetwork& net) { return static_cast<int>(net.vertex_count()); }

SeparationTime separation_time(const TMNetwork& net, int processor_vertex) {
  const auto& ins = net.in_arcs(processor_vertex);
  const auto& outs = net.out_arcs(processor_vertex);
  if (ins.empty() || outs.empty()) {
    throw MissingSchedule("vertex " + std::to_string(processor_vertex) + " needs at least one in-arc and one out-arc");
  }

  auto entered = std::numeric_limits<std::uint64_t>::max();
  for (int a : ins) entered = std::min(entered, net.arc(a).schedule.arrives.value);

  auto lag = std::numeric_limits<std::int64_t>::min();
  bool negative = false;
  for (int a : outs) {
    const auto d = static_cast<std::int64_t>(net.arc(a).schedule.departs.value) - static_cast<std::int64_t>(entered);
    negative = negative || d < 0;
    lag = std::max(lag, d);
  }
  return SeparationTime{static_cast<double>(lag) * net.sample_time(), lag, negative};
}

CircularityResult is_thermodynamically_circular(const TMNetwork& net, int start, const MaterialSet& materials) {
  if (!net.has_vertex(start)) throw UnknownVertex(start);
  CircularityResult result;
  if (!processes(net.vertex(start).materials, materials)) return result;

  auto usable = [&](int arc_id) {
    const auto& a = net.arc(arc_id);
    return processes(a.materials, materials) && processes(net.vertex(a.head).materials, materials);
  };

  // BFS from start; the first arc found that returns to start closes a
  // shortest cycle. parent_arc[v] is the arc used to reach v.
  const std::size_t nv = net.vertex_count();
  std::vector<int> parent_arc(nv, 0);
  std::vector<bool> seen(nv, false);
  std::deque<int> queue{start};
  seen[start - 1] = true;
  int closing_arc = 0;
  while (!queue.empty() && closing_arc == 0) {
    const int v = queue.front();
    queue.pop_front();
    for (int a : net.out_arcs(v)) {
      if (!usable(a)) continue;
      const int w = net.arc(a).head;
      if (w == start) {
        closing_arc = a;
        break;
      }
      if (!seen[w - 1]) {
        seen[w - 1] = true;
        parent_arc[w - 1] = a;
        queue.push_back(w);
      }
    }
  }
  if (closing_arc == 0) return result;

  std::vector<int> reversed{start, closing_arc};
  for (int v = net.arc(closing_arc).tail; v != start; v = net.arc(parent_arc[v - 1]).tail) {
    reversed.push_back(v);
    reversed.push_back(parent_arc[v - 1]);
  }
  reversed.push_back(start);
  result.circular = true;
  result.witness.assign(reversed.rbegin(), reversed.rend());
  return result;
}

IndicatorReport compute_indicators(const TMNetwork& net, int processor_vertex, int start,
                                   const MaterialSet& materials) {
  return IndicatorReport{separation_rate(net), separation_time(net, processor_vertex),
                         is_thermodynamically_circular(net, start, materials)};
}

void write_indicator_json(std::ostream& os, const IndicatorReport& report) {
  nlohmann::ordered_json j;
  j["r_s"] = report.separation_rate;
  j["t_s_seconds"] = report.separation_time.seconds;
  j["circular"] = report.circularity.circular;
  j["witness_cycle"] = report.circularity.witness;
  os << j.dump(2) << '\n';
}

void write_indicator_text(std::ostream& os, const IndicatorReport& report) {
  os << "separation rate r_s : " << report.separation_rate << '\n'
     << "separation time t_s : " << format_double(report.separation_time.seconds) << " s ("
     << report.separation_time.samples << " samples)";
  if (report.separation_time.negative) os << "  [warning: an out-arc departs before the in-arc arrives]";
  os << '\n' << "circular            : " << (report.circularity.circular ? "yes" : "no") << '\n';
  if (report.circularity.circular) {
    os << "witness             :";
    for (int id : report.circularity.witness) os << ' ' << id;
    os << '\n';
  }
}

} // namespace tmncell
