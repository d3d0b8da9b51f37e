// tmncell: command-line front end for the material-network simulator and the
// manipulator energy audit.
//
// Exit codes: 0 success, 1 input error, 2 model-feasibility error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "tmncell/circularity.hpp"
#include "tmncell/errors.hpp"
#include "tmncell/flow_dynamics.hpp"
#include "tmncell/glucorx.hpp"
#include "tmncell/plot.hpp"
#include "tmncell/robot.hpp"
#include "tmncell/spec_io.hpp"

namespace fs = std::filesystem;
using namespace tmncell;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kFeasibilityError = 2;

void setup_logging() {
  auto logger = spdlog::stderr_logger_st("tmncell");
  logger->set_pattern("%l: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("TMNCELL_LOG")) {
    const std::string level = env;
    if (level == "debug") spdlog::set_level(spdlog::level::debug);
    else if (level == "info") spdlog::set_level(spdlog::level::info);
    else if (level == "quiet") spdlog::set_level(spdlog::level::err);
    else spdlog::warn("ignoring unknown TMNCELL_LOG value '{}'", level);
  }
}

MaterialSet parse_materials(const std::string& csv) {
  MaterialSet out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(item);
  }
  return out;
}

robot::Vector parse_vector(const std::string& csv, int n, const std::string& flag) {
  robot::Vector v = robot::Vector::Zero(n);
  if (csv.empty()) return v;
  std::stringstream ss(csv);
  std::string item;
  int k = 0;
  while (std::getline(ss, item, ',')) {
    if (k >= n) throw InvalidArgument(flag + " has more than " + std::to_string(n) + " entries");
    try {
      v(k++) = std::stod(item);
    } catch (const std::exception&) {
      throw InvalidArgument(flag + ": '" + item + "' is not a number");
    }
  }
  if (k != n) throw InvalidArgument(flag + " needs " + std::to_string(n) + " entries");
  return v;
}

robot::TorqueProfile parse_torque(const std::string& text, const robot::RobotModel& model) {
  if (text == "zero") {
    return [n = model.dof()](double, const robot::JointState&) { return robot::Vector::Zero(n).eval(); };
  }
  if (text == "gravity-comp") {
    return [&model](double, const robot::JointState& s) { return robot::gravity_vector(model, s.q); };
  }
  if (text.rfind("sine:", 0) == 0) {
    const auto args = text.substr(5);
    const auto comma = args.find(',');
    double amp = 0.0, freq = 0.0;
    try {
      if (comma == std::string::npos) throw std::invalid_argument("missing comma");
      amp = std::stod(args.substr(0, comma));
      freq = std::stod(args.substr(comma + 1));
    } catch (const std::exception&) {
      throw InvalidArgument("--torque sine:<amp>,<freq> expects two numbers, got '" + text + "'");
    }
    return [n = model.dof(), amp, freq](double t, const robot::JointState&) {
      return robot::Vector::Constant(n, amp * std::sin(2.0 * std::numbers::pi * freq * t)).eval();
    };
  }
  throw InvalidArgument("unknown torque profile '" + text + "' (zero | gravity-comp | sine:<amp>,<freq>)");
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot write " + path.string());
  return os;
}

void write_conservation_json(std::ostream& os, const ConservationReport& r) {
  nlohmann::ordered_json j;
  j["constant_total"] = r.constant_total;
  j["total_mg"] = r.total.mg();
  if (r.first_violation) j["first_violation_n"] = r.first_violation->value;
  os << j.dump(2) << '\n';
}

void warn_negative(const IndicatorReport& report) {
  if (report.separation_time.negative) {
    spdlog::warn("an out-arc departs the processor before its in-arc arrives; t_s may be meaningless");
  }
}

struct Options {
  fs::path spec, model, csv, out = ".";
  std::int64_t horizon = -1;
  int processor = 2;
  int start = 1;
  std::string materials;
  bool json_only = false;
  double dt = 1e-4;
  double duration = 1.0;
  std::string torque = "zero";
  std::string q0, qd0;
  double tolerance = 1e-5;
  std::string scenario;
};

int cmd_simulate(const Options& o) {
  const TMNetwork net = build_network(load_network_spec(o.spec));
  const SampleIndex horizon =
      o.horizon < 0 ? net.last_arrival() : SampleIndex{static_cast<std::uint64_t>(o.horizon)};
  spdlog::info("simulating {} vertices, {} arcs to n = {}", net.vertex_count(), net.arc_count(), horizon.value);
  const Trajectory traj = simulate(net, horizon);
  {
    auto os = open_output(o.out / "trajectory.csv");
    write_trajectory_csv(os, traj);
  }
  if (net.closed()) {
    const auto report = conservation_check(traj);
    auto os = open_output(o.out / "conservation.json");
    write_conservation_json(os, report);
    std::cout << "conservation: " << (report.constant_total ? "constant" : "VIOLATED") << ", total "
              << report.total.mg() << " mg\n";
  }
  std::cout << "wrote " << traj.states.size() << " samples to " << (o.out / "trajectory.csv").string() << '\n';
  return kOk;
}

int cmd_indicators(const Options& o) {
  const TMNetwork net = build_network(load_network_spec(o.spec));
  const auto report = compute_indicators(net, o.processor, o.start, parse_materials(o.materials));
  warn_negative(report);
  if (!o.out.empty() && o.out != ".") {
    auto os = open_output(o.out / "indicators.json");
    write_indicator_json(os, report);
  }
  if (o.json_only) {
    write_indicator_json(std::cout, report);
  } else {
    write_indicator_text(std::cout, report);
  }
  return kOk;
}

int cmd_check_circularity(const Options& o) {
  const TMNetwork net = build_network(load_network_spec(o.spec));
  const auto result = is_thermodynamically_circular(net, o.start, parse_materials(o.materials));
  std::cout << (result.circular ? "circular" : "not circular");
  if (result.circular) {
    std::cout << ", witness:";
    for (int id : result.witness) std::cout << ' ' << id;
  }
  std::cout << '\n';
  return kOk;
}

int cmd_robot_sim(const Options& o) {
  const robot::RobotModel model = load_robot_model(o.model);
  const auto torque = parse_torque(o.torque, model);
  const robot::JointState initial{parse_vector(o.q0, model.dof(), "--q0"), parse_vector(o.qd0, model.dof(), "--qd0")};
  spdlog::info("integrating {} joints, dt = {}, duration = {}", model.dof(), o.dt, o.duration);
  const auto traj = robot::integrate(model, initial, torque, o.dt, o.duration);
  const auto audit = robot::energy_audit(model, traj, torque, o.tolerance);
  {
    auto os = open_output(o.out / "robot_trajectory.csv");
    robot::write_joint_csv(os, traj, audit);
  }
  {
    auto os = open_output(o.out / "energy_audit.json");
    nlohmann::ordered_json j;
    j["max_residual_W"] = audit.max_residual;
    j["balanced"] = audit.balanced;
    j["power_scale_W"] = audit.power_scale;
    j["tolerance_W"] = audit.tolerance;
    os << j.dump(2) << '\n';
  }
  std::cout << "energy audit: max residual " << audit.max_residual << " W, "
            << (audit.balanced ? "balanced" : "NOT balanced") << '\n';
  return kOk;
}

int cmd_demo(const Options& o) {
  if (o.scenario != "glucorx") throw InvalidArgument("unknown demo '" + o.scenario + "' (available: glucorx)");
  const auto run = glucorx::run_glucorx();
  {
    auto os = open_output(o.out / "glucorx_trajectory.csv");
    write_trajectory_csv(os, run.trajectory);
  }
  {
    auto os = open_output(o.out / "glucorx_indicators.json");
    write_indicator_json(os, run.indicators);
  }
  write_indicator_text(std::cout, run.indicators);
  std::cout << "conservation        : " << (run.conservation.constant_total ? "constant" : "VIOLATED") << ", "
            << run.conservation.total.mg() << " mg\n";
  return kOk;
}

int cmd_plot(const Options& o) {
  const auto files = plot_trajectory_csv(o.csv, o.out);
  std::cout << "wrote " << files.stocks.string() << " (" << files.stock_series << " series) and "
            << files.flows.string() << " (" << files.flow_series << " series)\n";
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Discrete-time thermodynamical material network simulator"};
  app.require_subcommand(1);
  Options o;

  auto* sim = app.add_subcommand("simulate", "Simulate a network and write its trajectory CSV");
  sim->add_option("--spec", o.spec, "Network spec JSON")->required();
  sim->add_option("--horizon", o.horizon, "Last sample index (default: last scheduled arrival)");
  sim->add_option("--out", o.out, "Output directory");

  auto* ind = app.add_subcommand("indicators", "Separation rate, separation time and circularity");
  ind->add_option("--spec", o.spec, "Network spec JSON")->required();
  ind->add_option("--processor", o.processor, "Processor vertex id for t_s");
  ind->add_option("--start", o.start, "Start vertex for the circularity check");
  ind->add_option("--materials", o.materials, "Comma-separated material labels");
  ind->add_flag("--json", o.json_only, "Print the JSON report instead of text");
  ind->add_option("--out", o.out, "Also write indicators.json into this directory");

  auto* circ = app.add_subcommand("check-circularity", "Search a closed walk through a start vertex");
  circ->add_option("--spec", o.spec, "Network spec JSON")->required();
  circ->add_option("--start", o.start, "Start vertex id")->required();
  circ->add_option("--materials", o.materials, "Comma-separated material labels");

  auto* rob = app.add_subcommand("robot-sim", "Integrate manipulator dynamics and audit the power balance");
  rob->add_option("--model", o.model, "Robot model JSON")->required();
  rob->add_option("--dt", o.dt, "Step size (s)");
  rob->add_option("--duration", o.duration, "Duration (s)");
  rob->add_option("--torque", o.torque, "zero | gravity-comp | sine:<amp>,<freq>");
  rob->add_option("--q0", o.q0, "Initial joint coordinates, comma-separated");
  rob->add_option("--qd0", o.qd0, "Initial joint velocities, comma-separated");
  rob->add_option("--tolerance", o.tolerance, "Relative tolerance of the energy audit");
  rob->add_option("--out", o.out, "Output directory");

  auto* demo = app.add_subcommand("demo", "Run a built-in scenario");
  demo->add_option("scenario", o.scenario, "Scenario name (glucorx)")->required();
  demo->add_option("--out", o.out, "Output directory");

  auto* plot = app.add_subcommand("plot", "Render stocks.svg and flows.svg from a trajectory CSV");
  plot->add_option("--csv", o.csv, "Trajectory CSV")->required();
  plot->add_option("--out", o.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*sim) return cmd_simulate(o);
    if (*ind) return cmd_indicators(o);
    if (*circ) return cmd_check_circularity(o);
    if (*rob) return cmd_robot_sim(o);
    if (*demo) return cmd_demo(o);
    if (*plot) return cmd_plot(o);
  } catch (const NegativeMass& e) {
    spdlog::error("{}", e.what());
    return kFeasibilityError;
  } catch (const MissingSchedule& e) {
    spdlog::error("{}", e.what());
    return kFeasibilityError;
  } catch (const SingularInertia& e) {
    spdlog::error("{}", e.what());
    return kFeasibilityError;
  } catch (const NonFinite& e) {
    spdlog::error("{}", e.what());
    return kFeasibilityError;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return kInputError;
  }
  return kInputError;
}
