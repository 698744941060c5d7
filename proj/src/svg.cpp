#include "sarinf/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

namespace sarinf::svg {

namespace {

constexpr const char* kPalette[] = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!std::isfinite(lo)) { lo = 0.0; hi = 1.0; }
    if (hi - lo < 1e-12) { lo -= 0.5; hi += 0.5; }
    const double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
};

}  // namespace

std::string scatter(const PlotSpec& spec, const std::vector<Series>& series) {
  Range xr, yr;
  for (const auto& s : series)
    for (const auto& p : s.points) {
      xr.add(p.x);
      yr.add(p.y - std::max(p.err, 0.0));
      yr.add(p.y + std::max(p.err, 0.0));
    }
  if (!spec.x_categories.empty()) {
    xr.add(0.5);
    xr.add(static_cast<double>(spec.x_categories.size()) + 0.5);
  }
  xr.pad();
  yr.pad();

  const double left = 70.0, right = 140.0, top = 40.0, bottom = 60.0;
  const double plot_w = spec.width - left - right;
  const double plot_h = spec.height - top - bottom;
  auto sx = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto sy = [&](double y) { return top + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      spec.width, spec.height, spec.width, spec.height);
  out += fmt::format("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
  out += fmt::format("<text x=\"{:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     left + plot_w / 2, escape(spec.title));
  out += fmt::format(
      "<rect class=\"frame\" x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" "
      "fill=\"none\" stroke=\"black\"/>\n",
      left, top, plot_w, plot_h);

  for (int t = 0; t <= 4; ++t) {
    const double v = yr.lo + (yr.hi - yr.lo) * t / 4.0;
    out += fmt::format(
        "<text class=\"tick\" x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.3g}</text>\n",
        left - 6, sy(v) + 4, v);
  }
  if (spec.x_categories.empty()) {
    for (int t = 0; t <= 4; ++t) {
      const double v = xr.lo + (xr.hi - xr.lo) * t / 4.0;
      out += fmt::format(
          "<text class=\"tick\" x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.3g}</text>\n",
          sx(v), top + plot_h + 16, v);
    }
  } else {
    for (std::size_t c = 0; c < spec.x_categories.size(); ++c)
      out += fmt::format(
          "<text class=\"tick\" x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
          sx(static_cast<double>(c + 1)), top + plot_h + 16, escape(spec.x_categories[c]));
  }
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
                     left + plot_w / 2, spec.height - 18, escape(spec.x_label));
  out += fmt::format(
      "<text x=\"18\" y=\"{:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1f})\">{}</text>\n",
      top + plot_h / 2, top + plot_h / 2, escape(spec.y_label));

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    out += fmt::format("<g class=\"series\" data-name=\"{}\">\n", escape(series[k].name));
    for (const auto& p : series[k].points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
      if (p.err >= 0.0)
        out += fmt::format(
            "<line class=\"errorbar\" x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" "
            "stroke=\"{3}\"/>\n",
            sx(p.x), sy(p.y - p.err), sy(p.y + p.err), color);
      out += fmt::format(
          "<circle class=\"point\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3.5\" fill=\"{}\"/>\n", sx(p.x),
          sy(p.y), color);
    }
    out += "</g>\n";
    const double ly = top + 10 + 18 * static_cast<double>(k);
    out += fmt::format(
        "<circle class=\"legend\" cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"4\" fill=\"{}\"/>"
        "<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n",
        left + plot_w + 16, ly, color, left + plot_w + 26, ly + 4, escape(series[k].name));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace sarinf::svg
