#pragma once

#include <string>
#include <vector>

#include "sleepnet/matrix.hpp"

namespace sleepnet {

/// One polyline of a line chart.
struct Series {
  std::string label;
  Vec x;
  Vec y;
};

/// Self-contained SVG line chart (axes, ticks, legend). Plotting is a
/// convenience; the CSV files are the contract.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series);

/// Grouped bar chart; one bar group per label, one bar per series.
std::string bar_chart_svg(const std::string& title,
                          const std::vector<std::string>& group_labels,
                          const std::vector<std::pair<std::string, Vec>>& series);

}  // namespace sleepnet
