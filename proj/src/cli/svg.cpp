// Copyright 2026 The BanditLab Authors.
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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <locale>
#include <map>
#include <sstream>

#include "banditlab/cli.hpp"
#include "banditlab/errors.hpp"

namespace banditlab::cli {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 190.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fixed2(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string tick_label(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
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

// "Nice" upper bound: 1, 2 or 5 times a power of ten.
double nice_ceiling(double v) {
  if (!(v > 0.0)) return 1.0;
  const double p = std::pow(10.0, std::floor(std::log10(v)));
  for (const double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * p >= v) return m * p;
  }
  return 10.0 * p;
}

}  // namespace

std::string render_regret_svg(const std::vector<AggregateRow>& rows,
                              const std::string& title) {
  if (rows.empty()) throw ContractViolation("render_regret_svg: no data");

  std::vector<std::string> order;
  std::map<std::string, std::vector<const AggregateRow*>> series;
  std::uint64_t t_min = rows.front().t;
  std::uint64_t t_max = rows.front().t;
  double y_max = 0.0;
  for (const auto& row : rows) {
    if (!series.contains(row.policy)) order.push_back(row.policy);
    series[row.policy].push_back(&row);
    t_min = std::min(t_min, row.t);
    t_max = std::max(t_max, row.t);
    y_max = std::max(y_max, row.mean_regret + 2.0 * row.std_error);
  }
  t_min = std::max<std::uint64_t>(t_min, 1);
  if (t_max <= t_min) t_max = t_min * 10;
  y_max = nice_ceiling(y_max);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double lx0 = std::log10(static_cast<double>(t_min));
  const double lx1 = std::log10(static_cast<double>(t_max));
  auto px = [&](std::uint64_t t) {
    const double lt = std::log10(static_cast<double>(std::max<std::uint64_t>(t, 1)));
    return kLeft + (lt - lx0) / (lx1 - lx0) * plot_w;
  };
  auto py = [&](double y) {
    const double c = std::clamp(y, 0.0, y_max);
    return kTop + (1.0 - c / y_max) * plot_h;
  };

  std::ostringstream svg;
  svg.imbue(std::locale::classic());
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fixed2(kLeft + plot_w / 2) << "\" y=\"28\" "
      << "text-anchor=\"middle\" font-size=\"15\">" << escape(title) << "</text>\n";

  // Axes and ticks.
  svg << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
      << kLeft + plot_w << "\" y2=\"" << kTop + plot_h << "\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + plot_h << "\"/>\n";
  svg << "</g>\n<g class=\"ticks\">\n";
  for (int e = static_cast<int>(std::ceil(lx0 - 1e-9));
       e <= static_cast<int>(std::floor(lx1 + 1e-9)); ++e) {
    const double x = kLeft + (e - lx0) / (lx1 - lx0) * plot_w;
    svg << "<line x1=\"" << fixed2(x) << "\" y1=\"" << kTop + plot_h << "\" x2=\""
        << fixed2(x) << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fixed2(x) << "\" y=\"" << kTop + plot_h + 20
        << "\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  for (int k = 0; k <= 5; ++k) {
    const double v = y_max * k / 5.0;
    const double y = py(v);
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fixed2(y) << "\" x2=\""
        << kLeft << "\" y2=\"" << fixed2(y) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << fixed2(y + 4)
        << "\" text-anchor=\"end\">" << tick_label(v) << "</text>\n";
  }
  svg << "</g>\n";
  svg << "<text x=\"" << fixed2(kLeft + plot_w / 2) << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\">t (log scale)</text>\n";
  svg << "<text x=\"20\" y=\"" << fixed2(kTop + plot_h / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << fixed2(kTop + plot_h / 2) << ")\">mean regret</text>\n";

  // Bands first so curves stay on top.
  for (std::size_t s = 0; s < order.size(); ++s) {
    const auto& pts = series[order[s]];
    const char* color = kPalette[s % std::size(kPalette)];
    svg << "<polygon class=\"band\" fill=\"" << color
        << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
    for (const auto* p : pts) {
      svg << fixed2(px(p->t)) << ',' << fixed2(py(p->mean_regret + 2.0 * p->std_error)) << ' ';
    }
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
      svg << fixed2(px((*it)->t)) << ','
          << fixed2(py((*it)->mean_regret - 2.0 * (*it)->std_error)) << ' ';
    }
    svg << "\"/>\n";
  }
  for (std::size_t s = 0; s < order.size(); ++s) {
    const auto& pts = series[order[s]];
    const char* color = kPalette[s % std::size(kPalette)];
    svg << "<polyline class=\"curve\" data-policy=\"" << escape(order[s])
        << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) svg << ' ';
      svg << fixed2(px(pts[i]->t)) << ',' << fixed2(py(pts[i]->mean_regret));
    }
    svg << "\"/>\n";
  }

  svg << "<g class=\"legend\">\n";
  for (std::size_t s = 0; s < order.size(); ++s) {
    const double y = kTop + 10 + 22.0 * s;
    const double x = kLeft + plot_w + 20;
    svg << "<rect x=\"" << x << "\" y=\"" << fixed2(y - 9) << "\" width=\"18\" height=\"10\" fill=\""
        << kPalette[s % std::size(kPalette)] << "\"/>\n";
    svg << "<text x=\"" << x + 26 << "\" y=\"" << fixed2(y) << "\">" << escape(order[s])
        << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace banditlab::cli
