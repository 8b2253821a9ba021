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

#include "ldpfl/privacy_core.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace ldpfl {
namespace {

constexpr double kSingleRoundRelativeTolerance = 1e-12;
constexpr double kSingleRoundMaxEpsilon = 1e4;

double StandardGaussianCdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// delta(eps) of the Gaussian mechanism with half-distance `a` = s/(2n) and
// slope `b` = n/s.
double GaussianDelta(double eps, double a, double b) {
  const double upper = StandardGaussianCdf(a - eps * b);
  const double tail = StandardGaussianCdf(-a - eps * b);
  if (tail <= 0.0) return upper;
  return upper - std::exp(eps + std::log(tail));
}

}  // namespace

absl::Status ValidateBudget(const PrivacyBudget& budget) {
  if (!(budget.epsilon > 0.0) || !std::isfinite(budget.epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive and finite, got ",
                     budget.epsilon));
  }
  if (!(budget.delta > 0.0 && budget.delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", budget.delta));
  }
  return absl::OkStatus();
}

absl::Status ValidateMechanism(const MechanismParams& params) {
  if (!(params.q > 0.0 && params.q < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("q must lie in (0, 1), got ", params.q));
  }
  if (!(params.sigma > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma must be positive, got ", params.sigma));
  }
  if (!(params.clip > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("clip must be positive, got ", params.clip));
  }
  if (params.rounds < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("rounds must be at least 1, got ", params.rounds));
  }
  return absl::OkStatus();
}

absl::StatusOr<RdpCost> RdpCostSubsampledGaussian(double q, double sigma,
                                                  double alpha) {
  if (!(sigma >= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma must be at least 1, got ", sigma));
  }
  if (!(q > 0.0) || !(q * 16.0 * sigma < 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "q must lie in (0, 1/(16 sigma)), got q=", q, " sigma=", sigma));
  }
  if (!IsRdpOrder(alpha)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must exceed 1, got ", alpha));
  }
  const double gamma =
      2.0 * q * q * (alpha + 1.0) / ((1.0 - q) * sigma * sigma);
  return RdpCost{.alpha = alpha, .gamma = gamma};
}

RdpCost ComposeRdp(const RdpCost& cost, int64_t rounds) {
  return RdpCost{.alpha = cost.alpha,
                 .gamma = static_cast<double>(rounds) * cost.gamma};
}

absl::StatusOr<double> RdpToDp(const RdpCost& cost, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  if (!IsRdpOrder(cost.alpha)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must exceed 1, got ", cost.alpha));
  }
  return cost.gamma + std::log(1.0 / delta) / (cost.alpha - 1.0);
}

double OptimalAlpha(const PrivacyBudget& budget) {
  return 2.0 * std::log(1.0 / budget.delta) / budget.epsilon;
}

ValidityReport CheckValidity(const MechanismParams& params,
                             const PrivacyBudget& budget) {
  ValidityReport report;
  report.q_ok = params.q > 0.0 && params.q * 16.0 * params.sigma < 1.0;
  report.sigma_ok = params.sigma >= 1.0;

  // The inner log must be positive for the condition to make sense at all.
  const double inner_log = std::log(1.0 / (params.q * params.sigma));
  if (inner_log > 0.0 && budget.delta > 0.0 && budget.delta < 1.0) {
    const double threshold =
        2.0 * std::log(1.0 / budget.delta) *
        std::max(budget.delta,
                 1.0 / (params.sigma * params.sigma * inner_log));
    report.epsilon_ok = budget.epsilon > threshold;
  }
  report.overall = report.q_ok && report.sigma_ok && report.epsilon_ok;
  return report;
}

absl::StatusOr<double> GaussianDpSingleRound(double sensitivity,
                                             double sigma_abs, double delta) {
  if (!(sensitivity >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sensitivity must be nonnegative, got ", sensitivity));
  }
  if (!(sigma_abs > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("noise standard deviation must be positive, got ",
                     sigma_abs));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  if (sensitivity == 0.0) return 0.0;

  const double a = sensitivity / (2.0 * sigma_abs);
  const double b = sigma_abs / sensitivity;
  if (GaussianDelta(0.0, a, b) <= delta) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  while (GaussianDelta(hi, a, b) > delta) {
    lo = hi;
    hi *= 2.0;
    if (hi > kSingleRoundMaxEpsilon) {
      return absl::InternalError(
          "failed to bracket epsilon for the Gaussian mechanism");
    }
  }
  for (int iter = 0; iter < 400; ++iter) {
    if (hi - lo <= kSingleRoundRelativeTolerance * hi) return hi;
    const double mid = 0.5 * (lo + hi);
    if (GaussianDelta(mid, a, b) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return absl::InternalError(
      "bisection for the Gaussian mechanism epsilon did not converge");
}

}  // namespace ldpfl
