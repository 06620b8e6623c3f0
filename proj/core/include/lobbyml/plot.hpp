#pragma once

#include <string>
#include <utility>
#include <vector>

// Minimal SVG charts for report figures.
namespace lobbyml::plot {

// Horizontal bars, one per (label, value), drawn top to bottom.
std::string bar_chart_svg(const std::string& title,
                          const std::vector<std::pair<std::string, double>>& bars);

struct Series {
  std::string name;
  std::vector<double> values;
};

// Line chart over categorical x labels with values in [0, 1].
std::string line_chart_svg(const std::string& title, const std::vector<std::string>& x_labels,
                           const std::vector<Series>& series);

}  // namespace lobbyml::plot
