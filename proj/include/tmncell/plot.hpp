#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tmncell {

/// Numeric CSV with a header row; columns stored column-major.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
  /// Index of the named column, or -1.
  int find(const std::string& name) const;
};

/// Throws SpecError on an empty input, ragged rows or non-numeric cells.
CsvTable read_csv(std::istream& in);

struct Series {
  std::string name;
  std::vector<double> values;
};

/// Static line chart, one polyline per series, with axes, ticks and legend.
void write_line_chart_svg(std::ostream& os, const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<double>& x, const std::vector<Series>& series);

struct PlotFiles {
  std::filesystem::path stocks;
  std::filesystem::path flows;
  std::size_t stock_series = 0;
  std::size_t flow_series = 0;
};

/// Renders stocks.svg and flows.svg from a trajectory CSV (columns stock_*
/// and flow_*, time from t_s). Needs at least two rows.
PlotFiles plot_trajectory_csv(const std::filesystem::path& csv, const std::filesystem::path& out_dir);

} // namespace tmncell
