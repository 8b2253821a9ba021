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

#include "ldpfl/rdp_oracle.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "absl/strings/str_cat.h"
#include "ldpfl/privacy_core.h"

namespace ldpfl {
namespace {

constexpr double kTolerance = 1e-13;
constexpr unsigned kMaxDepth = 30;

// mu0(z) * ((mu(z)/mu0(z))^power - 1). The likelihood ratio is
// 1 + q (exp(r) - 1) with r = (4z - 4) / (2 sigma^2); large powers are
// evaluated in log space so the Gaussian factor absorbs the growth.
double CenteredMoment(double z, double q, double sigma, double power) {
  const double log_mu0 = -0.5 * (z / sigma) * (z / sigma) -
                         std::log(sigma * std::sqrt(2.0 * std::numbers::pi));
  const double mu0 = std::exp(log_mu0);
  const double r = (4.0 * z - 4.0) / (2.0 * sigma * sigma);
  const double log_ratio = std::log1p(q * std::expm1(r));
  const double t = power * log_ratio;
  if (t < 1.0) return mu0 * std::expm1(t);
  return std::exp(log_mu0 + t) - mu0;
}

double Integrate(double q, double sigma, double power, double alpha) {
  const double peak = 2.0 * (alpha + 1.0);
  std::array<double, 8> cuts = {
      -40.0 * sigma, -10.0 * sigma, 0.0,   2.0, 10.0 * sigma,
      peak,          peak + 10.0 * sigma, peak + 40.0 * sigma};
  auto f = [&](double z) { return CenteredMoment(z, q, sigma, power); };
  double total = 0.0;
  std::sort(cuts.begin(), cuts.end());
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, cuts[i], cuts[i + 1], kMaxDepth, kTolerance);
  }
  return total;
}

}  // namespace

absl::StatusOr<LogMomentParts> SubsampledGaussianLogMoment(double q,
                                                           double sigma,
                                                           double alpha) {
  if (!(q > 0.0 && q < 1.0) || !(sigma > 0.0) || !(alpha >= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "log-moment needs q in (0,1), sigma > 0, alpha >= 1; got q=", q,
        " sigma=", sigma, " alpha=", alpha));
  }
  // E_{mu0}[(mu0/mu)^alpha] - 1 and E_{mu0}[(mu/mu0)^(alpha+1)] - 1, the
  // latter being E_{mu}[(mu/mu0)^alpha] - 1.
  const double base = Integrate(q, sigma, -alpha, alpha);
  const double mixture = Integrate(q, sigma, alpha + 1.0, alpha);
  if (!std::isfinite(base) || !std::isfinite(mixture)) {
    return absl::InternalError("log-moment integral did not converge");
  }
  return LogMomentParts{std::log1p(base), std::log1p(mixture)};
}

absl::StatusOr<double> RdpOracleRatio(double q, double sigma, double alpha) {
  absl::StatusOr<RdpCost> cost = RdpCostSubsampledGaussian(q, sigma, alpha);
  if (!cost.ok()) return cost.status();
  absl::StatusOr<LogMomentParts> moment =
      SubsampledGaussianLogMoment(q, sigma, alpha);
  if (!moment.ok()) return moment.status();
  return moment->value() / (alpha * cost->gamma);
}

}  // namespace ldpfl
