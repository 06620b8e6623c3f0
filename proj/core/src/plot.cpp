#include "lobbyml/plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lobbyml/csv.hpp"

namespace lobbyml::plot {
namespace {

constexpr int kWidth = 900;
constexpr int kMargin = 40;

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

}  // namespace

std::string bar_chart_svg(const std::string& title, const std::vector<std::pair<std::string, double>>& bars) {
  const int label_width = 260, bar_height = 18, gap = 4;
  const int height = kMargin * 2 + static_cast<int>(bars.size()) * (bar_height + gap);
  double max_abs = 0.0;
  for (const auto& [label, value] : bars) max_abs = std::max(max_abs, std::abs(value));
  if (max_abs == 0.0) max_abs = 1.0;
  const double scale = (kWidth - label_width - 2 * kMargin - 60) / max_abs;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height << "\">\n";
  svg << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(title)
      << "</text>\n";
  for (std::size_t i = 0; i < bars.size(); ++i) {
    int y = kMargin + static_cast<int>(i) * (bar_height + gap);
    double len = std::abs(bars[i].second) * scale;
    const char* color = bars[i].second >= 0 ? "#2b6cb0" : "#c53030";
    svg << "<text x=\"" << kMargin + label_width - 6 << "\" y=\"" << y + bar_height - 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(bars[i].first)
        << "</text>\n";
    svg << "<rect x=\"" << kMargin + label_width << "\" y=\"" << y << "\" width=\"" << num(len) << "\" height=\""
        << bar_height << "\" fill=\"" << color << "\"/>\n";
    svg << "<text x=\"" << num(kMargin + label_width + len + 4) << "\" y=\"" << y + bar_height - 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << csv::format_double(bars[i].second) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string line_chart_svg(const std::string& title, const std::vector<std::string>& x_labels,
                           const std::vector<Series>& series) {
  const int height = 420, plot_h = height - 3 * kMargin, plot_w = kWidth - 3 * kMargin;
  static const char* kColors[] = {"#2b6cb0", "#c53030", "#2f855a", "#b7791f"};
  const std::size_t n = x_labels.size();
  auto x_at = [&](std::size_t i) { return kMargin * 2 + (n > 1 ? plot_w * static_cast<double>(i) / (n - 1) : 0.0); };
  auto y_at = [&](double v) { return kMargin + plot_h * (1.0 - std::clamp(v, 0.0, 1.0)); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height << "\">\n";
  svg << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(title)
      << "</text>\n";
  svg << "<line x1=\"" << kMargin * 2 << "\" y1=\"" << kMargin + plot_h << "\" x2=\"" << kMargin * 2 + plot_w
      << "\" y2=\"" << kMargin + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kMargin * 2 << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin * 2 << "\" y2=\""
      << kMargin + plot_h << "\" stroke=\"black\"/>\n";
  for (double tick : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    svg << "<text x=\"" << kMargin * 2 - 6 << "\" y=\"" << num(y_at(tick) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(tick) << "</text>\n";
  }
  std::size_t label_every = std::max<std::size_t>(1, n / 12);
  for (std::size_t i = 0; i < n; i += label_every) {
    svg << "<text x=\"" << num(x_at(i)) << "\" y=\"" << kMargin + plot_h + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << xml_escape(x_labels[i])
        << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % 4];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < series[s].values.size() && i < n; ++i) {
      svg << num(x_at(i)) << "," << num(y_at(series[s].values[i])) << " ";
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << kMargin * 2 + plot_w - 160 << "\" y=\"" << kMargin + 16 * (s + 1) << "\" fill=\"" << color
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(series[s].name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace lobbyml::plot
