#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace smmevo::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
};

struct Axes {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::optional<std::pair<double, double>> x_range;  // data range when unset
  std::optional<std::pair<double, double>> y_range;
  bool log_x = false;
};

/// Polyline chart with a legend. Output is a complete SVG document and is a
/// pure function of its arguments.
std::string line_chart(const Axes& axes, const std::vector<Series>& series);

/// Bars over consecutive bins; edges has counts.size() + 1 entries.
/// An optional reference curve (e.g. a theoretical density) is overlaid.
std::string bar_chart(const Axes& axes, const std::vector<double>& edges, const std::vector<double>& heights,
                      const std::optional<Series>& reference = std::nullopt, const std::string& color = "#4c72b0");

/// Histogram of raw values over [lo, hi) with equal-width bins.
std::string histogram(const Axes& axes, const std::vector<double>& values, std::size_t bins, double lo, double hi);

void write_file(const std::string& path, const std::string& document);

}  // namespace smmevo::svg
