// Copyright 2026 The lorentz-bg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lorentz_bg/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "lorentz_bg/errors.hpp"

namespace lorentz_bg::harness {
namespace {

constexpr double kWidth = 720.0, kHeight = 440.0;
constexpr double kLeft = 70.0, kRight = 180.0, kTop = 40.0, kBottom = 50.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
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

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Range {
  double lo, hi;
  double span() const { return hi - lo; }
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : 0.1 * std::fabs(lo);
    return {lo - pad, hi + pad};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace

std::string render_svg(const ResultTable& rows, const PlotOptions& options) {
  if (rows.empty()) throw InvalidParameter("nothing to plot");
  std::string axis = options.x_axis;
  if (axis.empty()) {
    const bool one_eps = std::all_of(rows.begin(), rows.end(), [&](const ResultRow& r) { return r.eps == rows[0].eps; });
    axis = one_eps ? "t" : "eps";
  }
  if (axis != "eps" && axis != "t") throw InvalidParameter("x axis must be eps or t");
  const bool log_x = options.log_x;

  auto xval = [&](const ResultRow& r) {
    const double x = axis == "eps" ? r.eps : r.t;
    return log_x ? std::log10(x) : x;
  };

  std::map<std::string, std::vector<const ResultRow*>> series;
  std::vector<std::string> order;
  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (const ResultRow& r : rows) {
    const double x = xval(r);
    if (!std::isfinite(x)) continue;
    if (!series.count(r.observable)) order.push_back(r.observable);
    series[r.observable].push_back(&r);
    xlo = std::min(xlo, x);
    xhi = std::max(xhi, x);
    ylo = std::min(ylo, r.estimate - r.std_error);
    yhi = std::max(yhi, r.estimate + r.std_error);
  }
  if (order.empty()) throw InvalidParameter("no finite abscissae to plot");
  const Range xr = padded(xlo, xhi), yr = padded(ylo, yhi);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / xr.span() * pw; };
  auto py = [&](double y) { return kTop + (yr.hi - y) / yr.span() * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
           escape(options.title) + "</text>\n";
  }
  svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double x = xr.lo + xr.span() * k / 4.0;
    const double y = yr.lo + yr.span() * k / 4.0;
    const std::string xs = num(px(x)), ys = num(py(y));
    svg += "<line x1=\"" + xs + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + xs + "\" y2=\"" + num(kTop + ph + 5) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + xs + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
           label(log_x ? std::pow(10.0, x) : x) + "</text>\n";
    svg += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + ys + "\" x2=\"" + num(kLeft) + "\" y2=\"" + ys +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(py(y) + 4) + "\" text-anchor=\"end\">" + label(y) +
           "</text>\n";
  }
  svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) + "\" text-anchor=\"middle\">" + axis +
         (log_x ? " (log scale)" : "") + "</text>\n";

  for (std::size_t s = 0; s < order.size(); ++s) {
    auto points = series[order[s]];
    std::stable_sort(points.begin(), points.end(),
                     [&](const ResultRow* a, const ResultRow* b) { return xval(*a) < xval(*b); });
    const std::string color = kPalette[s % std::size(kPalette)];
    std::string path;
    for (const ResultRow* r : points) {
      const double x = px(xval(*r));
      path += (path.empty() ? "" : " ") + num(x) + "," + num(py(r->estimate));
      svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(py(r->estimate - r->std_error)) + "\" x2=\"" + num(x) +
             "\" y2=\"" + num(py(r->estimate + r->std_error)) + "\" stroke=\"" + color + "\"/>\n";
      svg += "<circle cx=\"" + num(x) + "\" cy=\"" + num(py(r->estimate)) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    svg += "<polyline points=\"" + path + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    const double ly = kTop + 14.0 + 18.0 * static_cast<double>(s);
    svg += "<line x1=\"" + num(kWidth - kRight + 12) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
           num(kWidth - kRight + 32) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(kWidth - kRight + 38) + "\" y=\"" + num(ly) + "\">" + escape(order[s]) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace lorentz_bg::harness
