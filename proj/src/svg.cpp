// SPDX-License-Identifier: Apache-2.0
//
// Copyright (c) 2026 The imgadd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "imgadd/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace imgadd::svg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-9 ? 0.0 : v);
  return buf;
}

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

}  // namespace

std::string line_plot(const std::vector<Series>& series, const PlotOptions& opts) {
  const double left = 70, right = 20, top = 40, bottom = 55;
  const double pw = opts.width - left - right;
  const double ph = opts.height - top - bottom;
  auto sx = [&](double x) { return left + (x - opts.x_min) / (opts.x_max - opts.x_min) * pw; };
  auto sy = [&](double y) {
    y = std::clamp(y, opts.y_min, opts.y_max);
    return top + (opts.y_max - y) / (opts.y_max - opts.y_min) * ph;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
      << opts.height << "\" viewBox=\"0 0 " << opts.width << ' ' << opts.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";

  // grid and ticks
  for (double x = std::ceil(opts.x_min / opts.x_tick) * opts.x_tick; x <= opts.x_max + 1e-9;
       x += opts.x_tick) {
    out << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << num(top) << "\" x2=\"" << num(sx(x))
        << "\" y2=\"" << num(top + ph) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(top + ph + 18)
        << "\" text-anchor=\"middle\">" << tick_label(x) << "</text>\n";
  }
  for (double y = std::ceil(opts.y_min / opts.y_tick) * opts.y_tick; y <= opts.y_max + 1e-9;
       y += opts.y_tick) {
    out << "<line x1=\"" << num(left) << "\" y1=\"" << num(sy(y)) << "\" x2=\"" << num(left + pw)
        << "\" y2=\"" << num(sy(y)) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << num(left - 8) << "\" y=\"" << num(sy(y) + 4)
        << "\" text-anchor=\"end\">" << tick_label(y) << "</text>\n";
  }
  out << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  out << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(opts.height - 12)
      << "\" text-anchor=\"middle\">" << escape(opts.x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << num(top + ph / 2) << ")\">" << escape(opts.y_label) << "</text>\n";
  if (!opts.title.empty()) {
    out << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(opts.title) << "</text>\n";
  }

  for (const Series& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << " points=\"";
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out << ' ';
      out << num(sx(s.x[i])) << ',' << num(sy(s.y[i]));
    }
    out << "\"/>\n";
  }

  // legend
  double ly = top + 16;
  for (const Series& s : series) {
    const double lx = left + pw - 150;
    out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 30)
        << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << "/>\n<text x=\"" << num(lx + 36) << "\" y=\"" << num(ly) << "\">" << escape(s.label)
        << "</text>\n";
    ly += 18;
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace imgadd::svg
