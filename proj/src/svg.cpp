// Copyright 2026 The qfilter Authors
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

#include "qfilter/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qfilter {

namespace {

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

/// Largest "nice" step (1, 2 or 5 times a power of ten) not above `raw`.
double nice_step(double raw) {
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  if (frac >= 5.0) return 5.0 * mag;
  if (frac >= 2.0) return 2.0 * mag;
  return mag;
}

std::vector<double> ticks(const Range& r, int target) {
  const double step = nice_step((r.hi - r.lo) / target);
  std::vector<double> out;
  double t = std::ceil(r.lo / step - 1e-9) * step;
  for (; t <= r.hi + 1e-9 * (r.hi - r.lo); t += step) {
    out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return out;
}

std::string tick_label(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string fmt_px(double v) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << v;
  return os.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_line_plot(const PlotSpec& spec) {
  if (spec.series.empty()) {
    throw std::invalid_argument("render_line_plot: no series");
  }
  Range xr{1e300, -1e300};
  Range yr{1e300, -1e300};
  for (const PlotSeries& s : spec.series) {
    if (s.x.empty() || s.x.size() != s.y.size() ||
        (!s.band.empty() && s.band.size() != s.y.size())) {
      throw std::invalid_argument("render_line_plot: ragged series '" +
                                  s.label + "'");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double half = s.band.empty() ? 0.0 : std::abs(s.band[i]);
      xr.lo = std::min(xr.lo, s.x[i]);
      xr.hi = std::max(xr.hi, s.x[i]);
      yr.lo = std::min(yr.lo, s.y[i] - half);
      yr.hi = std::max(yr.hi, s.y[i] + half);
    }
  }
  if (xr.hi <= xr.lo) xr.hi = xr.lo + 1.0;
  if (yr.hi <= yr.lo) {
    yr.lo -= 0.5;
    yr.hi += 0.5;
  }
  const double ypad = 0.05 * (yr.hi - yr.lo);
  yr.lo -= ypad;
  yr.hi += ypad;

  const double ml = 62, mr = 16, mt = 34, mb = 46;
  const double pw = spec.width - ml - mr;
  const double ph = spec.height - mt - mb;
  auto px = [&](double x) { return ml + pw * (x - xr.lo) / (xr.hi - xr.lo); };
  auto py = [&](double y) {
    return mt + ph * (1.0 - (y - yr.lo) / (yr.hi - yr.lo));
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
     << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width
     << ' ' << spec.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << spec.width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"14\">"
     << escape(spec.title) << "</text>\n";

  // Grid lines and tick labels.
  os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (double t : ticks(xr, 6)) {
    const double x = px(t);
    os << "<line x1=\"" << fmt_px(x) << "\" y1=\"" << fmt_px(mt) << "\" x2=\""
       << fmt_px(x) << "\" y2=\"" << fmt_px(mt + ph)
       << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << fmt_px(x) << "\" y=\"" << fmt_px(mt + ph + 16)
       << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  for (double t : ticks(yr, 5)) {
    const double y = py(t);
    os << "<line x1=\"" << fmt_px(ml) << "\" y1=\"" << fmt_px(y) << "\" x2=\""
       << fmt_px(ml + pw) << "\" y2=\"" << fmt_px(y)
       << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << fmt_px(ml - 6) << "\" y=\"" << fmt_px(y + 4)
       << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  }
  os << "</g>\n";

  // Error bands first so every line draws on top.
  for (const PlotSeries& s : spec.series) {
    if (s.band.empty()) continue;
    os << "<polygon fill=\"" << s.color << "\" fill-opacity=\"0.18\" "
          "stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      os << fmt_px(px(s.x[i])) << ',' << fmt_px(py(s.y[i] + s.band[i])) << ' ';
    }
    for (std::size_t i = s.x.size(); i-- > 0;) {
      os << fmt_px(px(s.x[i])) << ',' << fmt_px(py(s.y[i] - s.band[i])) << ' ';
    }
    os << "\"/>\n";
  }
  for (const PlotSeries& s : spec.series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      os << fmt_px(px(s.x[i])) << ',' << fmt_px(py(s.y[i])) << ' ';
    }
    os << "\"/>\n";
  }

  // Axes over the grid.
  os << "<rect x=\"" << fmt_px(ml) << "\" y=\"" << fmt_px(mt) << "\" width=\""
     << fmt_px(pw) << "\" height=\"" << fmt_px(ph)
     << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << spec.height - 10
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"12\">"
     << escape(spec.x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << mt + ph / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        "transform=\"rotate(-90 16 "
     << mt + ph / 2 << ")\">" << escape(spec.y_label) << "</text>\n";

  // Legend, top right inside the plot box.
  const double lx = ml + pw - 150, ly0 = mt + 10;
  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t i = 0; i < spec.series.size(); ++i) {
    const double ly = ly0 + 16.0 * static_cast<double>(i);
    os << "<line x1=\"" << fmt_px(lx) << "\" y1=\"" << fmt_px(ly) << "\" x2=\""
       << fmt_px(lx + 22) << "\" y2=\"" << fmt_px(ly) << "\" stroke=\""
       << spec.series[i].color << "\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << fmt_px(lx + 28) << "\" y=\"" << fmt_px(ly + 4)
       << "\">" << escape(spec.series[i].label) << "</text>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace qfilter
