#pragma once

#include <filesystem>
#include <string_view>

#include "json.hpp"
#include "tmncell/network.hpp"
#include "tmncell/robot.hpp"

namespace tmncell {

/// Strict network-spec schema:
///   { "sample_time_s": number, "closed": bool (optional, default true),
///     "vertices": [{id, label, materials[], initial_stock_mg}],
///     "arcs": [{id, tail, head, amount_mg, departs, arrives, materials[]}] }
/// Unknown keys, missing keys and non-integer ids/masses/indices throw
/// SpecError naming the offending field path.
NetworkSpec parse_network_spec(const nlohmann::json& doc);
NetworkSpec parse_network_spec(std::string_view text);
NetworkSpec load_network_spec(const std::filesystem::path& path);
nlohmann::ordered_json network_spec_to_json(const NetworkSpec& spec);

/// Robot model schema:
///   { "gravity": [3], "links": [{ "dh": {a, alpha, d, theta_offset, kind},
///     "inertia": {mass, com[3], tensor[9 row-major]},
///     "rotor": {inertia, gear_ratio} (optional) }] }
/// kind is "revolute" or "prismatic".
robot::RobotModel parse_robot_model(const nlohmann::json& doc);
robot::RobotModel parse_robot_model(std::string_view text);
robot::RobotModel load_robot_model(const std::filesystem::path& path);

} // namespace tmncell
