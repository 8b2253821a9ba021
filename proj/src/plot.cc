//
// Copyright 2026 The ldpfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "ldpfl/plot.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "absl/strings/str_cat.h"
#include "ldpfl/io.h"

namespace ldpfl {
namespace {

constexpr std::array<const char*, 8> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

constexpr double kLeft = 80.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string Fixed(double value, int precision = 2) {
  std::array<char, 64> buffer;
  const auto [end, ec] =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                    std::chars_format::fixed, precision);
  return std::string(buffer.data(), end);
}

std::string Label(double value) {
  std::array<char, 32> buffer;
  const auto [end, ec] = std::to_chars(buffer.data(),
                                       buffer.data() + buffer.size(), value,
                                       std::chars_format::general, 4);
  return std::string(buffer.data(), end);
}

std::string Escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void Add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool empty() const { return !(lo <= hi); }
};

std::vector<double> LinearTicks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  double step = magnitude;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * magnitude;
    if (span / step <= 6.0) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step;
       t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

}  // namespace

std::string RenderSvg(const PlotSpec& spec) {
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!spec.log_y || y > 0.0);
  };
  Range xr;
  Range yr;
  for (const PlotSeries& s : spec.series) {
    for (const auto& [x, y] : s.points) {
      if (!usable(x, y)) continue;
      xr.Add(x);
      yr.Add(spec.log_y ? std::log10(y) : y);
    }
  }
  for (const PlotLine& cap : spec.caps) {
    if (usable(0.0, cap.y)) yr.Add(spec.log_y ? std::log10(cap.y) : cap.y);
  }
  if (xr.empty()) xr = {0.0, 1.0};
  if (yr.empty()) yr = {0.0, 1.0};
  if (xr.hi == xr.lo) xr = {xr.lo - 0.5, xr.hi + 0.5};
  if (yr.hi == yr.lo) yr = {yr.lo - 0.5, yr.hi + 0.5};
  if (spec.log_y) {
    yr = {std::floor(yr.lo), std::ceil(yr.hi)};
  } else {
    const double pad = 0.05 * (yr.hi - yr.lo);
    yr = {yr.lo - pad, yr.hi + pad};
  }

  const double w = spec.width;
  const double h = spec.height;
  const double plot_w = w - kLeft - kRight;
  const double plot_h = h - kTop - kBottom;
  auto px = [&](double x) {
    return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w;
  };
  auto py = [&](double y) {
    const double v = spec.log_y ? std::log10(y) : y;
    return kTop + (yr.hi - v) / (yr.hi - yr.lo) * plot_h;
  };

  std::string svg = absl::StrCat(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"", spec.width,
      "\" height=\"", spec.height, "\" viewBox=\"0 0 ", spec.width, " ",
      spec.height, "\" font-family=\"sans-serif\" font-size=\"12\">\n");
  absl::StrAppend(&svg, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
  absl::StrAppend(&svg, "<text x=\"", Fixed(kLeft + plot_w / 2), "\" y=\"22\" ",
                  "text-anchor=\"middle\" font-size=\"15\">",
                  Escape(spec.title), "</text>\n");
  absl::StrAppend(&svg, "<rect x=\"", Fixed(kLeft), "\" y=\"", Fixed(kTop),
                  "\" width=\"", Fixed(plot_w), "\" height=\"", Fixed(plot_h),
                  "\" fill=\"none\" stroke=\"black\"/>\n");

  for (double t : LinearTicks(xr.lo, xr.hi)) {
    const std::string x = Fixed(px(t));
    absl::StrAppend(&svg, "<line x1=\"", x, "\" y1=\"", Fixed(kTop + plot_h),
                    "\" x2=\"", x, "\" y2=\"", Fixed(kTop + plot_h + 5),
                    "\" stroke=\"black\"/>\n");
    absl::StrAppend(&svg, "<text x=\"", x, "\" y=\"",
                    Fixed(kTop + plot_h + 19), "\" text-anchor=\"middle\">",
                    Label(t), "</text>\n");
  }
  std::vector<double> yticks;
  if (spec.log_y) {
    for (double e = yr.lo; e <= yr.hi; e += 1.0) yticks.push_back(e);
  } else {
    yticks = LinearTicks(yr.lo, yr.hi);
  }
  for (double t : yticks) {
    const double value = spec.log_y ? std::pow(10.0, t) : t;
    const std::string y = Fixed(py(value));
    absl::StrAppend(&svg, "<line x1=\"", Fixed(kLeft - 5), "\" y1=\"", y,
                    "\" x2=\"", Fixed(kLeft), "\" y2=\"", y,
                    "\" stroke=\"black\"/>\n");
    absl::StrAppend(&svg, "<text x=\"", Fixed(kLeft - 8), "\" y=\"", y,
                    "\" text-anchor=\"end\" dominant-baseline=\"middle\">",
                    spec.log_y ? absl::StrCat("1e", Fixed(t, 0)) : Label(t),
                    "</text>\n");
  }
  absl::StrAppend(&svg, "<text x=\"", Fixed(kLeft + plot_w / 2), "\" y=\"",
                  Fixed(h - 15), "\" text-anchor=\"middle\">",
                  Escape(spec.x_label), "</text>\n");
  absl::StrAppend(&svg, "<text transform=\"translate(18,",
                  Fixed(kTop + plot_h / 2),
                  ") rotate(-90)\" text-anchor=\"middle\">",
                  Escape(spec.y_label), "</text>\n");

  double legend_y = kTop + 10;
  auto legend = [&](const std::string& label, const char* color,
                    bool dashed) {
    const double lx = kLeft + plot_w + 12;
    absl::StrAppend(&svg, "<line x1=\"", Fixed(lx), "\" y1=\"",
                    Fixed(legend_y), "\" x2=\"", Fixed(lx + 24), "\" y2=\"",
                    Fixed(legend_y), "\" stroke=\"", color,
                    "\" stroke-width=\"2\"",
                    dashed ? " stroke-dasharray=\"6,4\"" : "", "/>\n");
    absl::StrAppend(&svg, "<text x=\"", Fixed(lx + 30), "\" y=\"",
                    Fixed(legend_y), "\" dominant-baseline=\"middle\">",
                    Escape(label), "</text>\n");
    legend_y += 18;
  };

  for (size_t i = 0; i < spec.series.size(); ++i) {
    const PlotSeries& s = spec.series[i];
    const char* color = kPalette[i % kPalette.size()];
    std::string points;
    for (const auto& [x, y] : s.points) {
      if (!usable(x, y)) continue;
      absl::StrAppend(&points, points.empty() ? "" : " ", Fixed(px(x)), ",",
                      Fixed(py(y)));
    }
    if (!points.empty()) {
      absl::StrAppend(&svg, "<polyline fill=\"none\" stroke=\"", color,
                      "\" stroke-width=\"2\"",
                      s.dashed ? " stroke-dasharray=\"6,4\"" : "",
                      " points=\"", points, "\"/>\n");
    }
    legend(s.label, color, s.dashed);
  }
  for (const PlotLine& cap : spec.caps) {
    if (!usable(0.0, cap.y)) continue;
    const std::string y = Fixed(py(cap.y));
    absl::StrAppend(&svg, "<line x1=\"", Fixed(kLeft), "\" y1=\"", y,
                    "\" x2=\"", Fixed(kLeft + plot_w), "\" y2=\"", y,
                    "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n");
    legend(cap.label, "black", true);
  }
  absl::StrAppend(&svg, "</svg>\n");
  return svg;
}

SweepPlots RenderSweepPlots(std::span<const TradeoffPoint> rows,
                            const SweepConfig& config) {
  std::map<std::pair<Method, int64_t>, std::vector<const TradeoffPoint*>>
      grouped;
  std::vector<int64_t> rounds;
  for (const TradeoffPoint& row : rows) {
    grouped[{row.method, row.rounds}].push_back(&row);
    if (std::find(rounds.begin(), rounds.end(), row.rounds) == rounds.end()) {
      rounds.push_back(row.rounds);
    }
  }
  std::sort(rounds.begin(), rounds.end());

  auto build = [&](std::string title, std::string y_label, bool log_y,
                   const std::function<double(const TradeoffPoint&)>& value) {
    PlotSpec spec;
    spec.title = std::move(title);
    spec.x_label = "epsilon";
    spec.y_label = std::move(y_label);
    spec.log_y = log_y;
    for (const auto& [key, points] : grouped) {
      PlotSeries series{absl::StrCat(std::string(MethodName(key.first)),
                                     " T=", key.second),
                        {},
                        key.second != rounds.front()};
      for (const TradeoffPoint* p : points) {
        if (!p->error.empty()) continue;
        series.points.emplace_back(p->epsilon, value(*p));
      }
      std::sort(series.points.begin(), series.points.end());
      spec.series.push_back(std::move(series));
    }
    return spec;
  };

  PlotSpec noise = build("Noise variance bound", "sigma_k^2", true,
                         [](const TradeoffPoint& p) { return p.sigma_k_sq; });
  PlotSpec utility =
      build("Utility lower bound", "utility", true,
            [](const TradeoffPoint& p) { return p.utility_lb; });
  PlotSpec rate = build("Transmission rate upper bound", "bits per vector",
                        false,
                        [](const TradeoffPoint& p) { return p.rate_ub_bits; });

  const int64_t first_rounds = rounds.empty() ? 1 : rounds.front();
  const ValidityCaps base =
      ComputeValidityCaps(config.q, first_rounds, config.reg, config.users);
  noise.caps.push_back({"validity cap", base.sigma_sq_cap});
  for (int64_t t : rounds) {
    const ValidityCaps caps =
        ComputeValidityCaps(config.q, t, config.reg, config.users);
    utility.caps.push_back({absl::StrCat("cap T=", t), caps.utility_cap});
  }
  rate.caps.push_back({"validity cap", base.rate_cap_bits});
  return SweepPlots{RenderSvg(noise), RenderSvg(utility), RenderSvg(rate)};
}

}  // namespace ldpfl
