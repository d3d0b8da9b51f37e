#pragma once

#include <string>
#include <vector>

#include "tmncell/circularity.hpp"
#include "tmncell/flow_dynamics.hpp"

namespace tmncell::glucorx {

/// One row of the glucose-meter part table.
struct Part {
  std::string name;
  Mass mass;       // per piece
  int count = 1;   // pieces per device
  int bin = 0;     // d = 1..4
};

const std::vector<Part>& part_table();

/// Mass of one device: the part table summed with piece counts (61 800 mg).
Mass device_mass();
/// Mass routed to bin d by summing parts with that bin index.
Mass bin_mass(int bin);

inline constexpr int kBins = 4;
inline constexpr std::uint64_t kStockRelease = 5;          // n_1
inline constexpr std::uint64_t kCellArrival = 30;          // n_{2,in}
inline constexpr std::uint64_t kBinDepartures[kBins] = {240, 300, 320, 360};
inline constexpr std::uint64_t kTransferSamples = 5;
inline constexpr std::uint64_t kHorizon = 400;
inline constexpr int kDevicesInStock = 2;
inline constexpr int kStockVertex = 1;
inline constexpr int kProcessorVertex = 2;
inline constexpr const char* kMaterial = "glucose_meter";

/// Stock -> disassembly cell -> four bins, T = 1 s.
NetworkSpec glucorx_spec();
TMNetwork build_glucorx_network();

struct Run {
  Trajectory trajectory;
  IndicatorReport indicators;
  ConservationReport conservation;
};

/// Simulates to n = 400 and computes indicators. Throws Error if mass is not
/// conserved.
Run run_glucorx();

} // namespace tmncell::glucorx
