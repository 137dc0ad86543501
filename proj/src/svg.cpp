#include "sleepnet/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sleepnet {

namespace {

constexpr int kWidth = 640, kHeight = 420;
constexpr int kLeft = 64, kRight = 24, kTop = 40, kBottom = 56;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Scale {
  double lo = 0.0, hi = 1.0;
  int px0 = 0, px1 = 1;
  double at(double v) const { return px0 + (v - lo) / (hi - lo) * (px1 - px0); }
};

void expand(double& lo, double& hi) {
  if (hi <= lo) {
    hi = lo + 1.0;
    lo -= 1.0;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
}

void axes(std::ostringstream& svg, const Scale& xs, const Scale& ys,
          const std::string& title, const std::string& x_label,
          const std::string& y_label) {
  svg << "<rect width='" << kWidth << "' height='" << kHeight << "' fill='white'/>\n";
  svg << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' font-size='15' "
         "font-family='sans-serif'>" << title << "</text>\n";
  svg << "<line x1='" << kLeft << "' y1='" << kHeight - kBottom << "' x2='"
      << kWidth - kRight << "' y2='" << kHeight - kBottom << "' stroke='black'/>\n";
  svg << "<line x1='" << kLeft << "' y1='" << kTop << "' x2='" << kLeft << "' y2='"
      << kHeight - kBottom << "' stroke='black'/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fy = ys.lo + (ys.hi - ys.lo) * i / 4.0;
    const double py = ys.at(fy);
    svg << "<line x1='" << kLeft - 4 << "' y1='" << py << "' x2='" << kLeft << "' y2='"
        << py << "' stroke='black'/>\n";
    svg << "<text x='" << kLeft - 8 << "' y='" << py + 4
        << "' text-anchor='end' font-size='11' font-family='sans-serif'>" << fmt(fy)
        << "</text>\n";
    const double fx = xs.lo + (xs.hi - xs.lo) * i / 4.0;
    const double px = xs.at(fx);
    svg << "<line x1='" << px << "' y1='" << kHeight - kBottom << "' x2='" << px
        << "' y2='" << kHeight - kBottom + 4 << "' stroke='black'/>\n";
    svg << "<text x='" << px << "' y='" << kHeight - kBottom + 18
        << "' text-anchor='middle' font-size='11' font-family='sans-serif'>" << fmt(fx)
        << "</text>\n";
  }
  svg << "<text x='" << (kLeft + kWidth - kRight) / 2 << "' y='" << kHeight - 16
      << "' text-anchor='middle' font-size='12' font-family='sans-serif'>" << x_label
      << "</text>\n";
  svg << "<text x='16' y='" << (kTop + kHeight - kBottom) / 2
      << "' text-anchor='middle' font-size='12' font-family='sans-serif' "
         "transform='rotate(-90 16 "
      << (kTop + kHeight - kBottom) / 2 << ")'>" << y_label << "</text>\n";
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<Series>& series) {
  double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  bool first = true;
  for (const Series& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        xlo = xhi = s.x[i];
        ylo = yhi = s.y[i];
        first = false;
      }
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  expand(xlo, xhi);
  expand(ylo, yhi);
  const Scale xs{xlo, xhi, kLeft, kWidth - kRight};
  const Scale ys{ylo, yhi, kHeight - kBottom, kTop};

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
      << kHeight << "'>\n";
  axes(svg, xs, ys, title, x_label, y_label);
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % std::size(kPalette)];
    svg << "<polyline fill='none' stroke='" << color << "' stroke-width='2' points='";
    for (std::size_t i = 0; i < series[si].x.size(); ++i)
      svg << xs.at(series[si].x[i]) << ',' << ys.at(series[si].y[i]) << ' ';
    svg << "'/>\n";
    for (std::size_t i = 0; i < series[si].x.size(); ++i)
      svg << "<circle cx='" << xs.at(series[si].x[i]) << "' cy='"
          << ys.at(series[si].y[i]) << "' r='3' fill='" << color << "'/>\n";
    svg << "<text x='" << kWidth - kRight - 8 << "' y='" << kTop + 16 * (si + 1)
        << "' text-anchor='end' font-size='12' font-family='sans-serif' fill='" << color
        << "'>" << series[si].label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string bar_chart_svg(const std::string& title,
                          const std::vector<std::string>& group_labels,
                          const std::vector<std::pair<std::string, Vec>>& series) {
  double yhi = 0.0;
  for (const auto& [label, vals] : series)
    for (double v : vals) yhi = std::max(yhi, v);
  if (yhi <= 0.0) yhi = 1.0;
  yhi *= 1.05;
  const Scale ys{0.0, yhi, kHeight - kBottom, kTop};

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
      << kHeight << "'>\n";
  const Scale xs{0.0, static_cast<double>(group_labels.size()), kLeft, kWidth - kRight};
  axes(svg, xs, ys, title, "", "");

  const double group_w = (kWidth - kLeft - kRight) / double(group_labels.size());
  const double bar_w = group_w / (series.size() + 1);
  for (std::size_t g = 0; g < group_labels.size(); ++g) {
    for (std::size_t si = 0; si < series.size(); ++si) {
      if (g >= series[si].second.size()) continue;
      const double v = series[si].second[g];
      const double x = kLeft + g * group_w + (si + 0.5) * bar_w;
      svg << "<rect x='" << x << "' y='" << ys.at(v) << "' width='" << bar_w * 0.9
          << "' height='" << (kHeight - kBottom) - ys.at(v) << "' fill='"
          << kPalette[si % std::size(kPalette)] << "'/>\n";
    }
    svg << "<text x='" << kLeft + (g + 0.5) * group_w << "' y='" << kHeight - kBottom + 18
        << "' text-anchor='middle' font-size='11' font-family='sans-serif'>"
        << group_labels[g] << "</text>\n";
  }
  for (std::size_t si = 0; si < series.size(); ++si)
    svg << "<text x='" << kWidth - kRight - 8 << "' y='" << kTop + 16 * (si + 1)
        << "' text-anchor='end' font-size='12' font-family='sans-serif' fill='"
        << kPalette[si % std::size(kPalette)] << "'>" << series[si].first << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace sleepnet
