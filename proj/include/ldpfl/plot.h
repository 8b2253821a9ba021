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

#ifndef LDPFL_PLOT_H_
#define LDPFL_PLOT_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldpfl/tradeoff.h"

// Minimal SVG line charts: polylines, optional log-scale y axis, and dashed
// horizontal reference lines.
namespace ldpfl {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

struct PlotLine {
  std::string label;
  double y = 0.0;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<PlotSeries> series;
  std::vector<PlotLine> caps;
  int width = 760;
  int height = 500;
};

// Non-finite points (and nonpositive ones on a log axis) are skipped.
std::string RenderSvg(const PlotSpec& spec);

struct SweepPlots {
  std::string noise;
  std::string utility;
  std::string rate;
};

// The three panels of the study: sigma_k^2, utility bound and rate bound
// against epsilon, one series per (method, T), with validity caps dashed.
// `config` supplies q, K and the loss regularity used for the caps.
SweepPlots RenderSweepPlots(std::span<const TradeoffPoint> rows,
                            const SweepConfig& config);

}  // namespace ldpfl

#endif  // LDPFL_PLOT_H_
