#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "tmncell/network.hpp"

namespace tmncell {

/// Dense sequence of states for n = 0..horizon.
struct Trajectory {
  TMNetwork network;
  SampleIndex horizon;
  std::vector<NetworkState> states;
};

/// Advances `state` by one sample. All impulses scheduled at state.n fire
/// together: an arc gains its amount at `departs` and loses it at `arrives`;
/// the tail stock loses it at `departs`, the head stock gains it at `arrives`.
/// Throws NegativeMass if any stock or flow would end up below zero.
NetworkState step(const TMNetwork& net, const NetworkState& state);

/// Runs from the initial all-stock state to `horizon` inclusive.
/// Requires horizon >= net.last_arrival().
Trajectory simulate(const TMNetwork& net, SampleIndex horizon);

struct ConservationReport {
  bool constant_total = false;
  Mass total;
  /// First sample whose total differs from n = 0, when constant_total is false.
  std::optional<SampleIndex> first_violation;
};

/// Checks that the summed mass-flow matrix is identical at every sample.
ConservationReport conservation_check(const Trajectory& traj);

/// `n,t_s,stock_<id>...,flow_<tail>_<head>...`, one row per sample.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

} // namespace tmncell
