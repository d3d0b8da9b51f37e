#include "tmncell/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tmncell/errors.hpp"

namespace tmncell {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string fixed(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.2f", v);
  return buf.data();
}

std::string tick_label(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%g", v);
  return buf.data();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round step to 1, 2 or 5 times a power of ten.
double nice_step(double span, int target_ticks) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  return (r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0) * mag;
}

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

} // namespace

int CsvTable::find(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw SpecError("CSV is empty");
  if (line.back() == '\r') line.pop_back();
  table.header = split(line);
  table.columns.resize(table.header.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw SpecError("CSV line " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                      " cells, header has " + std::to_string(table.header.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cells[c], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cells[c].size()) {
        throw SpecError("CSV line " + std::to_string(row) + ": non-numeric cell '" + cells[c] + "'");
      }
      table.columns[c].push_back(v);
    }
  }
  return table;
}

void write_line_chart_svg(std::ostream& os, const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<double>& x, const std::vector<Series>& series) {
  constexpr double width = 900, height = 500;
  constexpr double left = 90, right = 190, top = 50, bottom = 60;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  double x_min = x.empty() ? 0.0 : *std::min_element(x.begin(), x.end());
  double x_max = x.empty() ? 1.0 : *std::max_element(x.begin(), x.end());
  double y_min = 0.0, y_max = 0.0;
  for (const auto& s : series) {
    for (double v : s.values) {
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (x_max <= x_min) x_max = x_min + 1.0;
  const double y_step = nice_step(y_max - y_min, 6);
  y_min = std::floor(y_min / y_step) * y_step;
  y_max = std::max(y_min + y_step, std::ceil(y_max / y_step) * y_step);
  const double x_step = nice_step(x_max - x_min, 8);

  auto px = [&](double v) { return left + (v - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double v) { return top + plot_h - (v - y_min) / (y_max - y_min) * plot_h; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" << escape(title)
     << "</text>\n";

  os << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (double v = y_min; v <= y_max + 0.5 * y_step; v += y_step) {
    os << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(py(v)) << "\" x2=\"" << fixed(left + plot_w)
       << "\" y2=\"" << fixed(py(v)) << "\"/>\n";
  }
  os << "</g>\n";
  os << "<g stroke=\"black\" stroke-width=\"1\">\n"
     << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top + plot_h) << "\" x2=\"" << fixed(left + plot_w)
     << "\" y2=\"" << fixed(top + plot_h) << "\"/>\n"
     << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left) << "\" y2=\""
     << fixed(top + plot_h) << "\"/>\n</g>\n";

  os << "<g text-anchor=\"end\">\n";
  for (double v = y_min; v <= y_max + 0.5 * y_step; v += y_step) {
    os << "<text x=\"" << fixed(left - 6) << "\" y=\"" << fixed(py(v) + 4) << "\">" << tick_label(v) << "</text>\n";
  }
  os << "</g>\n<g text-anchor=\"middle\">\n";
  for (double v = std::ceil(x_min / x_step) * x_step; v <= x_max + 1e-9 * x_step; v += x_step) {
    os << "<text x=\"" << fixed(px(v)) << "\" y=\"" << fixed(top + plot_h + 18) << "\">" << tick_label(v)
       << "</text>\n";
  }
  os << "</g>\n";
  os << "<text x=\"" << fixed(left + plot_w / 2) << "\" y=\"" << fixed(height - 15) << "\" text-anchor=\"middle\">"
     << escape(x_label) << "</text>\n";
  os << "<text transform=\"translate(20 " << fixed(top + plot_h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* colour = kPalette[s % kPalette.size()];
    os << "<polyline class=\"series\" data-name=\"" << escape(series[s].name) << "\" fill=\"none\" stroke=\""
       << colour << "\" stroke-width=\"1.5\" points=\"";
    const std::size_t n = std::min(x.size(), series[s].values.size());
    for (std::size_t k = 0; k < n; ++k) {
      if (k) os << ' ';
      os << fixed(px(x[k])) << ',' << fixed(py(series[s].values[k]));
    }
    os << "\"/>\n";
    const double ly = top + 10 + 18.0 * static_cast<double>(s);
    os << "<line x1=\"" << fixed(left + plot_w + 15) << "\" y1=\"" << fixed(ly) << "\" x2=\""
       << fixed(left + plot_w + 35) << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << colour
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fixed(left + plot_w + 40) << "\" y=\"" << fixed(ly + 4) << "\">" << escape(series[s].name)
       << "</text>\n";
  }
  os << "</svg>\n";
}

PlotFiles plot_trajectory_csv(const std::filesystem::path& csv, const std::filesystem::path& out_dir) {
  std::ifstream in(csv);
  if (!in) throw SpecError("cannot open " + csv.string());
  const CsvTable table = read_csv(in);
  if (table.rows() < 2) throw SpecError(csv.string() + ": need at least two rows to draw a line");

  int time_col = table.find("t_s");
  if (time_col < 0) time_col = table.find("n");
  if (time_col < 0) throw SpecError(csv.string() + ": no t_s or n column");

  std::vector<Series> stocks, flows;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const auto& name = table.header[c];
    if (name.rfind("stock_", 0) == 0) stocks.push_back({"m_" + name.substr(6), table.columns[c]});
    if (name.rfind("flow_", 0) == 0) flows.push_back({"m_" + name.substr(5), table.columns[c]});
  }
  if (stocks.empty() && flows.empty()) throw SpecError(csv.string() + ": no stock_* or flow_* columns");

  std::filesystem::create_directories(out_dir);
  PlotFiles files{out_dir / "stocks.svg", out_dir / "flows.svg", stocks.size(), flows.size()};
  const auto& x = table.columns[time_col];
  {
    std::ofstream os(files.stocks);
    write_line_chart_svg(os, "Stocks vs. time", "time (s)", "mass (mg)", x, stocks);
  }
  {
    std::ofstream os(files.flows);
    write_line_chart_svg(os, "Flows vs. time", "time (s)", "mass (mg)", x, flows);
  }
  return files;
}

} // namespace tmncell
