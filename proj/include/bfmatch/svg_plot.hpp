// Minimal deterministic SVG line plots for the emitted CSV tables. Output is
// a pure function of the inputs so repeated runs are byte-identical.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace bfmatch {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  int width = 960;
  int height = 600;
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

inline std::string render_svg(const PlotSpec& spec) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  constexpr int kPaletteSize = 8;
  const int ml = 90, mr = 30, mt = 50, mb = 70;  // margins
  const double pw = spec.width - ml - mr;
  const double ph = spec.height - mt - mb;

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& s : spec.series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  if (!(x_min < x_max)) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (!(y_min < y_max)) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  // 5% margin beyond the data range on every side
  const double xp = 0.05 * (x_max - x_min), yp = 0.05 * (y_max - y_min);
  x_min -= xp;
  x_max += xp;
  y_min -= yp;
  y_max += yp;

  auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
  auto py = [&](double y) { return mt + ph - (y - y_min) / (y_max - y_min) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
      << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << spec.width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"18\">" << detail::xml_escape(spec.title)
      << "</text>\n";

  // gridlines and ticks
  const int n_ticks = 6;
  for (int i = 0; i < n_ticks; ++i) {
    const double fx = x_min + (x_max - x_min) * i / (n_ticks - 1);
    const double fy = y_min + (y_max - y_min) * i / (n_ticks - 1);
    const double gx = px(fx), gy = py(fy);
    svg << "<line x1=\"" << detail::svg_num(gx) << "\" y1=\"" << mt << "\" x2=\""
        << detail::svg_num(gx) << "\" y2=\"" << mt + static_cast<int>(ph)
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << detail::svg_num(gy) << "\" x2=\""
        << ml + static_cast<int>(pw) << "\" y2=\"" << detail::svg_num(gy)
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << detail::svg_num(gx) << "\" y=\"" << mt + static_cast<int>(ph) + 22
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << detail::tick_label(fx) << "</text>\n";
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << detail::svg_num(gy + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << detail::tick_label(fy) << "</text>\n";
  }
  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << static_cast<int>(pw)
      << "\" height=\"" << static_cast<int>(ph) << "\" fill=\"none\" stroke=\"#333333\"/>\n";

  // axis labels
  svg << "<text x=\"" << ml + static_cast<int>(pw) / 2 << "\" y=\"" << spec.height - 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << detail::xml_escape(spec.x_label) << "</text>\n";
  svg << "<text x=\"24\" y=\"" << mt + static_cast<int>(ph) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
      << "transform=\"rotate(-90 24 " << mt + static_cast<int>(ph) / 2 << ")\">"
      << detail::xml_escape(spec.y_label) << "</text>\n";

  // series
  for (size_t si = 0; si < spec.series.size(); ++si) {
    const auto& s = spec.series[si];
    const char* color = kPalette[si % kPaletteSize];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (i) svg << ' ';
      svg << detail::svg_num(px(s.x[i])) << ',' << detail::svg_num(py(s.y[i]));
    }
    svg << "\"/>\n";
  }

  // legend, top-right inside the frame
  for (size_t si = 0; si < spec.series.size(); ++si) {
    const char* color = kPalette[si % kPaletteSize];
    const int ly = mt + 16 + static_cast<int>(si) * 18;
    const int lx = ml + static_cast<int>(pw) - 180;
    svg << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 26 << "\" y2=\""
        << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"1.8\"/>\n";
    svg << "<text x=\"" << lx + 32 << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << detail::xml_escape(spec.series[si].label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace bfmatch
