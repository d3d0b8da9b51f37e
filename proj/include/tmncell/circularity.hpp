#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tmncell/network.hpp"

namespace tmncell {

/// Number of rows of the mass-flow matrix, i.e. n_v. Depends on topology only.
int separation_rate(const TMNetwork& net);

struct SeparationTime {
  double seconds = 0.0;
  std::int64_t samples = 0;
  /// Some out-arc departs before the processor's in-arc arrives.
  bool negative = false;
};

/// Latest departure from `processor_vertex` minus the arrival of its in-arc,
/// scaled by the sample time. With several in-arcs the earliest arrival is
/// used. Throws MissingSchedule if the vertex has no in-arc or no out-arc.
SeparationTime separation_time(const TMNetwork& net, int processor_vertex);

struct CircularityResult {
  bool circular = false;
  /// Closed walk start, arc, vertex, arc, ..., start. Empty when not circular.
  std::vector<int> witness;
};

/// True iff a directed closed walk through `start` exists on which every
/// vertex and arc carries every label in `materials`. The witness is the
/// shortest such walk (fewest arcs); BFS over arcs in ascending id makes
/// the choice among equally short walks deterministic.
CircularityResult is_thermodynamically_circular(const TMNetwork& net, int start, const MaterialSet& materials);

struct IndicatorReport {
  int separation_rate = 0;
  SeparationTime separation_time;
  CircularityResult circularity;
};

IndicatorReport compute_indicators(const TMNetwork& net, int processor_vertex, int start,
                                   const MaterialSet& materials);

/// Flat JSON object {r_s, t_s_seconds, circular, witness_cycle}.
void write_indicator_json(std::ostream& os, const IndicatorReport& report);
/// Human-readable multi-line summary.
void write_indicator_text(std::ostream& os, const IndicatorReport& report);

} // namespace tmncell
