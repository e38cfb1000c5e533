#include "ffpage/app/svg.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

namespace ffpage::app {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMargin = 56.0;
constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                              "#9467bd", "#ff7f0e", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<PageCurve>& curves, const std::string& title) {
  double y_max = 0.05;
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.points.size(); ++i) y_max = std::max(y_max, c.density(i));
  }
  y_max *= 1.1;
  const double plot_w = kWidth - 2.0 * kMargin;
  const double plot_h = kHeight - 2.0 * kMargin;
  auto px = [&](double f) { return kMargin + f * plot_w; };
  auto py = [&](double d) { return kHeight - kMargin - d / y_max * plot_h; };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
                    "\" height=\"" + num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\">" + escape(title) + "</text>\n";
  svg += "<path d=\"M" + num(px(0)) + " " + num(py(0)) + " H" + num(px(1)) + " M" + num(px(0)) +
         " " + num(py(0)) + " V" + num(py(y_max)) + "\" stroke=\"black\" fill=\"none\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double f = t / 4.0;
    svg += "<text x=\"" + num(px(f)) + "\" y=\"" + num(py(0) + 18) + "\" text-anchor=\"middle\">" +
           num(f) + "</text>\n";
    const double d = y_max * t / 4.0;
    svg += "<text x=\"" + num(kMargin - 6) + "\" y=\"" + num(py(d) + 4) + "\" text-anchor=\"end\">" +
           num(d) + "</text>\n";
  }
  svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight - 12) +
         "\" text-anchor=\"middle\">f = N_A / N</text>\n";
  svg += "<text x=\"16\" y=\"" + num(kHeight / 2) + "\" transform=\"rotate(-90 16 " + num(kHeight / 2) +
         ")\" text-anchor=\"middle\">S / N (bits)</text>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& curve = curves[c];
    const char* color = kColors[c % kColors.size()];
    std::string pts;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      pts += num(px(curve.fraction(i))) + "," + num(py(curve.density(i))) + " ";
    }
    svg += "<polyline points=\"" + pts + "\" stroke=\"" + color + "\" fill=\"none\" stroke-width=\"1.5\"/>\n";
    const double ly = kMargin + 16.0 * static_cast<double>(c);
    svg += "<text x=\"" + num(kMargin + 10) + "\" y=\"" + num(ly) + "\" fill=\"" + color + "\">" +
           escape(std::string(to_string(curve.source)) + " (" + curve.model + ")") + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace ffpage::app
