#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = TMNCELL_CLI;
const std::string kData = TMNCELL_DATA;

struct Result {
  int code = -1;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("tmncell_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Result run(const fs::path& dir, const std::string& args) {
  const auto log = dir / "stdout.txt";
  const std::string cmd = "TMNCELL_LOG=quiet '" + kCli + "' " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(log)};
}

std::size_t lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

json cell() { return json::parse(std::ifstream(kData + "/glucorx.json")); }

fs::path write_json(const fs::path& dir, const std::string& name, const json& doc) {
  const auto p = dir / name;
  std::ofstream(p) << doc.dump(2);
  return p;
}

} // namespace

TEST_CASE("simulate writes the trajectory and conservation report") {
  const auto dir = scratch("simulate");
  const auto r = run(dir, "simulate --spec " + kData + "/glucorx.json --horizon 400 --out " + dir.string());
  REQUIRE(r.code == 0);
  const auto csv = slurp(dir / "trajectory.csv");
  CHECK(lines(csv) == 402);
  const auto header = csv.substr(0, csv.find('\n'));
  CHECK(std::count(header.begin(), header.end(), ',') == 12);
  const auto report = json::parse(slurp(dir / "conservation.json"));
  CHECK(report["constant_total"] == true);
  CHECK(report["total_mg"] == 123600);

  // Byte-identical on a rerun.
  const auto again = scratch("simulate_again");
  REQUIRE(run(again, "simulate --spec " + kData + "/glucorx.json --horizon 400 --out " + again.string()).code == 0);
  CHECK(slurp(again / "trajectory.csv") == csv);
}

TEST_CASE("simulate defaults the horizon to the last arrival") {
  const auto dir = scratch("default_horizon");
  REQUIRE(run(dir, "simulate --spec " + kData + "/glucorx.json --out " + dir.string()).code == 0);
  CHECK(lines(slurp(dir / "trajectory.csv")) == 367);
}

TEST_CASE("bad specs exit 1, infeasible schedules exit 2") {
  const auto dir = scratch("errors");
  auto doc = cell();
  doc["arcs"][0].erase("arrives");
  auto r = run(dir, "simulate --spec " + write_json(dir, "missing.json", doc).string() + " --out " + dir.string());
  CHECK(r.code == 1);
  CHECK(r.out.find("arrives") != std::string::npos);

  doc = cell();
  doc["vertices"][0]["initial_stock_mg"] = 61799;
  r = run(dir, "simulate --spec " + write_json(dir, "short.json", doc).string() + " --out " + dir.string());
  CHECK(r.code == 2);

  CHECK(run(dir, "simulate --spec " + kData + "/glucorx.json --horizon 100 --out " + dir.string()).code == 1);
  CHECK(run(dir, "simulate --spec " + (dir / "nope.json").string()).code == 1);
  CHECK(run(dir, "frobnicate").code == 1);
  CHECK(run(dir, "--help").code == 0);
}

TEST_CASE("indicators") {
  const auto dir = scratch("indicators");
  auto r = run(dir, "indicators --json --spec " + kData + "/glucorx.json");
  REQUIRE(r.code == 0);
  auto report = json::parse(r.out);
  CHECK(report["r_s"] == 6);
  CHECK(report["t_s_seconds"] == 330.0);
  CHECK(report["circular"] == false);
  CHECK(report["witness_cycle"].empty());

  r = run(dir, "indicators --json --spec " + kData + "/glucorx_return_arc.json --out " + dir.string());
  REQUIRE(r.code == 0);
  report = json::parse(slurp(dir / "indicators.json"));
  CHECK(report["circular"] == true);
  CHECK(report["witness_cycle"] == json::array({1, 7, 2, 8, 3, 12, 1}));

  r = run(dir, "indicators --json --spec " + kData + "/passthrough_d1.json");
  REQUIRE(r.code == 0);
  report = json::parse(r.out);
  CHECK(report["r_s"] == 3);
  CHECK(report["t_s_seconds"] == 0.0);

  CHECK(run(dir, "indicators --spec " + kData + "/glucorx.json --processor 1").code == 2);
}

TEST_CASE("check-circularity") {
  const auto dir = scratch("circ");
  auto r = run(dir, "check-circularity --spec " + kData + "/glucorx_return_arc.json --start 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("circular, witness: 1 7 2 8 3 12 1") != std::string::npos);
  r = run(dir, "check-circularity --spec " + kData + "/glucorx_return_arc.json --start 1 --materials pcb");
  CHECK(r.out.find("not circular") != std::string::npos);
  CHECK(run(dir, "check-circularity --spec " + kData + "/glucorx.json --start 99").code == 1);
}

TEST_CASE("robot-sim") {
  const auto dir = scratch("robot");
  auto r = run(dir, "robot-sim --model " + kData + "/pendulum.json --dt 1e-3 --duration 0.5 --out " + dir.string());
  REQUIRE(r.code == 0);
  auto audit = json::parse(slurp(dir / "energy_audit.json"));
  CHECK(audit["balanced"] == true);
  CHECK(lines(slurp(dir / "robot_trajectory.csv")) == 502);

  r = run(dir, "robot-sim --model " + kData + "/two_link_arm.json --torque sine:5,1 --dt 1e-3 --duration 0.5 --out " +
                   dir.string());
  REQUIRE(r.code == 0);
  CHECK(json::parse(slurp(dir / "energy_audit.json"))["balanced"] == true);

  r = run(dir, "robot-sim --model " + kData + "/two_link_arm.json --torque gravity-comp --q0 0.7,0.2 --dt 1e-2 "
                   "--duration 0.2 --out " + dir.string());
  REQUIRE(r.code == 0);
  std::istringstream csv(slurp(dir / "robot_trajectory.csv"));
  std::string line;
  std::getline(csv, line);
  while (std::getline(csv, line)) CHECK(line.find(",0.7,0.2,") != std::string::npos);

  auto model = json::parse(std::ifstream(kData + "/two_link_arm.json"));
  model["links"][0]["inertia"]["tensor"] = json::array({1, 0, 0, 0, -1, 0, 0, 0, 1});
  CHECK(run(dir, "robot-sim --model " + write_json(dir, "bad.json", model).string()).code == 1);
  CHECK(run(dir, "robot-sim --model " + kData + "/pendulum.json --torque wobble").code == 1);
}

TEST_CASE("plot") {
  const auto dir = scratch("plot");
  REQUIRE(run(dir, "simulate --spec " + kData + "/glucorx.json --out " + dir.string()).code == 0);
  REQUIRE(run(dir, "plot --csv " + (dir / "trajectory.csv").string() + " --out " + dir.string()).code == 0);
  CHECK(fs::exists(dir / "stocks.svg"));
  CHECK(fs::exists(dir / "flows.svg"));
  std::ofstream(dir / "one.csv") << "n,t_s,stock_1\n0,0,1\n";
  CHECK(run(dir, "plot --csv " + (dir / "one.csv").string() + " --out " + dir.string()).code == 1);
}

TEST_CASE("demo") {
  const auto dir = scratch("demo");
  const auto r = run(dir, "demo glucorx --out " + dir.string());
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "glucorx_trajectory.csv"));
  const auto report = json::parse(slurp(dir / "glucorx_indicators.json"));
  CHECK(report["r_s"] == 6);
  CHECK(report["t_s_seconds"] == 330.0);
  CHECK(r.out.find("123600") != std::string::npos);
  CHECK(run(dir, "demo atlantis").code == 1);
}
