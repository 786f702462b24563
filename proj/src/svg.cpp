#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "redsum/harness.hpp"

namespace redsum {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::vector<double>& xs,
                      const std::vector<std::pair<std::string, std::vector<double>>>& series) {
  if (xs.empty() || series.empty()) {
    throw std::invalid_argument("write_line_chart: nothing to plot");
  }
  for (const auto& [name, ys] : series) {
    if (ys.size() != xs.size()) {
      throw std::invalid_argument("write_line_chart: series \"" + name + "\" length mismatch");
    }
  }

  double x_lo = *std::min_element(xs.begin(), xs.end());
  double x_hi = *std::max_element(xs.begin(), xs.end());
  double y_lo = HUGE_VAL, y_hi = -HUGE_VAL;
  for (const auto& [_, ys] : series) {
    for (double v : ys) {
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_hi = y_lo + 1.0;
  double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  const double width = 640, height = 400;
  const double ml = 64, mr = 150, mt = 40, mb = 48;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto px = [&](double x) { return ml + pw * (x - x_lo) / (x_hi - x_lo); };
  auto py = [&](double y) { return mt + ph * (1.0 - (y - y_lo) / (y_hi - y_lo)); };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_line_chart: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << ' ' << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << ml << "\" y=\"24\" font-size=\"15\">" << title << "</text>\n";

  // axes and ticks
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    double xv = x_lo + (x_hi - x_lo) * t / 5.0;
    double yv = y_lo + (y_hi - y_lo) * t / 5.0;
    out << "<line x1=\"" << fmt(px(xv)) << "\" y1=\"" << mt + ph << "\" x2=\"" << fmt(px(xv))
        << "\" y2=\"" << mt + ph + 4 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
    out << "<line x1=\"" << ml - 4 << "\" y1=\"" << fmt(py(yv)) << "\" x2=\"" << ml << "\" y2=\""
        << fmt(py(yv)) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(py(yv) + 4)
        << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 8
      << "\" text-anchor=\"middle\">" << x_label << "</text>\n";

  size_t color = 0;
  for (const auto& [name, ys] : series) {
    const char* stroke = kPalette[color % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < xs.size(); ++i) {
      if (i) out << ' ';
      out << fmt(px(xs[i])) << ',' << fmt(py(ys[i]));
    }
    out << "\"/>\n";
    double ly = mt + 14 + 16 * static_cast<double>(color);
    out << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
        << ml + pw + 30 << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << stroke
        << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << ml + pw + 34 << "\" y=\"" << fmt(ly) << "\">" << name << "</text>\n";
    ++color;
  }
  out << "</svg>\n";
}

}  // namespace redsum
