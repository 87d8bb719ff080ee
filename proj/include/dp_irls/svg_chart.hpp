// Copyright 2026 The dp_irls Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Standalone SVG line chart of mean test log-likelihood against N (log
// scale), one polyline per mechanism with standard-error bars.

#ifndef DP_IRLS_SVG_CHART_HPP_
#define DP_IRLS_SVG_CHART_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "dp_irls/csv.hpp"
#include "dp_irls/experiment.hpp"

namespace dp_irls {

struct ChartLayout {
  double width = 720.0;
  double height = 480.0;
  double margin_left = 80.0;
  double margin_right = 170.0;
  double margin_top = 40.0;
  double margin_bottom = 60.0;
  // Fraction of the data span added above and below (and left/right in
  // log N) so points never sit on the frame.
  double padding = 0.06;
};

// Data-space extents of the plotted area.
struct ChartRange {
  double log_n_min = 0.0;
  double log_n_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
};

inline ChartRange ComputeChartRange(const std::vector<SummaryRow>& summary,
                                    double padding) {
  double lo_x = INFINITY, hi_x = -INFINITY, lo_y = INFINITY, hi_y = -INFINITY;
  for (const SummaryRow& row : summary) {
    const double lx = std::log10(static_cast<double>(row.num_points));
    lo_x = std::min(lo_x, lx);
    hi_x = std::max(hi_x, lx);
    lo_y = std::min(lo_y, row.mean_loglik - row.std_error);
    hi_y = std::max(hi_y, row.mean_loglik + row.std_error);
  }
  double span_x = hi_x - lo_x;
  if (span_x <= 0.0) span_x = 1.0;
  double span_y = hi_y - lo_y;
  if (span_y <= 0.0) span_y = std::max(1.0, std::abs(hi_y));
  return ChartRange{lo_x - padding * span_x, hi_x + padding * span_x,
                    lo_y - padding * span_y, hi_y + padding * span_y};
}

namespace internal {

inline std::string XmlEscape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                           "#9467bd", "#ff7f0e", "#8c564b",
                                           "#e377c2", "#7f7f7f"};

}  // namespace internal

inline absl::StatusOr<std::string> RenderSvgChart(
    const std::vector<SummaryRow>& summary, const ChartLayout& layout = {}) {
  if (summary.empty()) {
    return absl::InvalidArgumentError("cannot chart an empty summary");
  }
  const ChartRange range = ComputeChartRange(summary, layout.padding);
  const double plot_w = layout.width - layout.margin_left - layout.margin_right;
  const double plot_h = layout.height - layout.margin_top - layout.margin_bottom;
  auto px = [&](double n) {
    return layout.margin_left + (std::log10(n) - range.log_n_min) /
                                    (range.log_n_max - range.log_n_min) * plot_w;
  };
  auto py = [&](double y) {
    return layout.margin_top +
           (range.y_max - y) / (range.y_max - range.y_min) * plot_h;
  };

  std::vector<std::string> order;
  std::map<std::string, std::vector<const SummaryRow*>> series;
  for (const SummaryRow& row : summary) {
    auto [it, inserted] = series.try_emplace(row.mechanism);
    if (inserted) order.push_back(row.mechanism);
    it->second.push_back(&row);
  }
  for (auto& [name, rows] : series) {
    std::sort(rows.begin(), rows.end(), [](const SummaryRow* a, const SummaryRow* b) {
      return a->num_points < b->num_points;
    });
  }

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += absl::StrFormat(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
      "viewBox=\"0 0 %g %g\" font-family=\"sans-serif\" font-size=\"12\">\n",
      layout.width, layout.height, layout.width, layout.height);
  svg += absl::StrFormat(
      "<rect x=\"0\" y=\"0\" width=\"%g\" height=\"%g\" fill=\"white\"/>\n",
      layout.width, layout.height);
  svg += absl::StrFormat(
      "<rect class=\"frame\" x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" "
      "fill=\"none\" stroke=\"black\"/>\n",
      layout.margin_left, layout.margin_top, plot_w, plot_h);

  // Ticks: decades and 2x/5x within the N range, five evenly spaced y ticks.
  std::vector<double> x_ticks;
  for (int e = static_cast<int>(std::floor(range.log_n_min));
       e <= static_cast<int>(std::ceil(range.log_n_max)); ++e) {
    for (double m : {1.0, 2.0, 5.0}) {
      const double n = m * std::pow(10.0, e);
      const double ln = std::log10(n);
      if (ln >= range.log_n_min && ln <= range.log_n_max) x_ticks.push_back(n);
    }
  }
  const double bottom = layout.margin_top + plot_h;
  for (double n : x_ticks) {
    svg += absl::StrFormat(
        "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
        "stroke=\"black\"/>\n",
        px(n), bottom, px(n), bottom + 5);
    svg += absl::StrFormat(
        "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%g</text>\n", px(n),
        bottom + 18, n);
  }
  for (int i = 0; i <= 4; ++i) {
    const double y = range.y_min + (range.y_max - range.y_min) * i / 4.0;
    svg += absl::StrFormat(
        "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
        "stroke=\"black\"/>\n",
        layout.margin_left - 5, py(y), layout.margin_left, py(y));
    svg += absl::StrFormat(
        "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%.3g</text>\n",
        layout.margin_left - 8, py(y) + 4, y);
  }
  svg += absl::StrFormat(
      "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">N (log scale)"
      "</text>\n",
      layout.margin_left + plot_w / 2, layout.height - 15);
  svg += absl::StrFormat(
      "<text transform=\"translate(18 %.2f) rotate(-90)\" "
      "text-anchor=\"middle\">log-likelihood per test point</text>\n",
      layout.margin_top + plot_h / 2);

  for (size_t s = 0; s < order.size(); ++s) {
    const std::string& name = order[s];
    const char* color = internal::kPalette[s % std::size(internal::kPalette)];
    const std::vector<const SummaryRow*>& rows = series[name];
    std::string points;
    for (const SummaryRow* row : rows) {
      if (!points.empty()) points += ' ';
      points += absl::StrFormat("%.2f,%.2f", px(row->num_points),
                                py(row->mean_loglik));
    }
    svg += absl::StrFormat(
        "<g class=\"series\" data-mechanism=\"%s\">\n",
        internal::XmlEscape(name));
    svg += absl::StrFormat(
        "<polyline points=\"%s\" fill=\"none\" stroke=\"%s\" "
        "stroke-width=\"2\"/>\n",
        points, color);
    for (const SummaryRow* row : rows) {
      const double x = px(row->num_points);
      svg += absl::StrFormat(
          "<line class=\"errorbar\" x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" "
          "y2=\"%.2f\" stroke=\"%s\"/>\n",
          x, py(row->mean_loglik - row->std_error), x,
          py(row->mean_loglik + row->std_error), color);
      svg += absl::StrFormat(
          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n", x,
          py(row->mean_loglik), color);
    }
    svg += "</g>\n";
    const double legend_x = layout.margin_left + plot_w + 15;
    const double legend_y = layout.margin_top + 10 + 20.0 * s;
    svg += absl::StrFormat(
        "<line class=\"legend\" x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" "
        "y2=\"%.2f\" stroke=\"%s\" stroke-width=\"2\"/>\n",
        legend_x, legend_y, legend_x + 20, legend_y, color);
    svg += absl::StrFormat("<text x=\"%.2f\" y=\"%.2f\">%s</text>\n",
                           legend_x + 26, legend_y + 4,
                           internal::XmlEscape(name));
  }
  svg += "</svg>\n";
  return svg;
}

inline absl::Status WriteSvgChart(const std::vector<SummaryRow>& summary,
                                  const std::string& path) {
  absl::StatusOr<std::string> svg = RenderSvgChart(summary);
  if (!svg.ok()) return svg.status();
  return WriteFile(path, *svg);
}

}  // namespace dp_irls

#endif  // DP_IRLS_SVG_CHART_HPP_
