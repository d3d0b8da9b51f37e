#include "tmncell/glucorx.hpp"

#include "tmncell/errors.hpp"

namespace tmncell::glucorx {

const std::vector<Part>& part_table() {
  static const std::vector<Part> parts = {
      {"Front case", Mass::grams_tenths(144), 1, 1},
      {"Back case", Mass::grams_tenths(172), 1, 1},
      {"PCB", Mass::grams_tenths(178), 1, 2},
      {"Screw", Mass::grams_tenths(2), 5, 3},
      {"Spring", Mass::grams_tenths(1), 1, 4},
      {"Button and clip", Mass::grams_tenths(16), 1, 4},
      {"Test strip port", Mass::grams_tenths(10), 1, 4},
      {"Screen", Mass::grams_tenths(84), 1, 4},
      {"USB port cap", Mass::grams_tenths(3), 1, 4},
  };
  return parts;
}

Mass device_mass() {
  Mass total;
  for (const auto& p : part_table()) total += p.mass * p.count;
  return total;
}

Mass bin_mass(int bin) {
  Mass total;
  for (const auto& p : part_table()) {
    if (p.bin == bin) total += p.mass * p.count;
  }
  return total;
}

NetworkSpec glucorx_spec() {
  static const char* bin_labels[kBins] = {"casing", "pcb", "screws", "other"};

  NetworkSpec spec;
  spec.sample_time_s = 1.0;
  spec.closed = true;
  spec.vertices.push_back({kStockVertex, "stock", {kMaterial}, device_mass() * kDevicesInStock});
  spec.vertices.push_back(
      {kProcessorVertex, "disassembly", {kMaterial, "casing", "pcb", "screws", "other"}, Mass{}});
  for (int d = 1; d <= kBins; ++d) {
    spec.vertices.push_back({2 + d, std::string("bin_") + bin_labels[d - 1], {kMaterial, bin_labels[d - 1]}, Mass{}});
  }

  int id = 2 + kBins;
  spec.arcs.push_back({++id, kStockVertex, kProcessorVertex,
                       {device_mass(), SampleIndex{kStockRelease}, SampleIndex{kCellArrival}},
                       {kMaterial}});
  for (int d = 1; d <= kBins; ++d) {
    const std::uint64_t out = kBinDepartures[d - 1];
    spec.arcs.push_back({++id, kProcessorVertex, 2 + d,
                         {bin_mass(d), SampleIndex{out}, SampleIndex{out + kTransferSamples}},
                         {kMaterial, bin_labels[d - 1]}});
  }
  return spec;
}

TMNetwork build_glucorx_network() { return build_network(glucorx_spec()); }

Run run_glucorx() {
  const TMNetwork net = build_glucorx_network();
  Run run{simulate(net, SampleIndex{kHorizon}), {}, {}};
  run.indicators = compute_indicators(net, kProcessorVertex, kStockVertex, {kMaterial});
  run.conservation = conservation_check(run.trajectory);
  if (!run.conservation.constant_total) throw Error("GlucoRx scenario violated mass conservation");
  return run;
}

} // namespace tmncell::glucorx
