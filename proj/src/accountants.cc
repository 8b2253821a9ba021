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

#include "ldpfl/accountants.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace ldpfl {
namespace {

constexpr double kAc1RelativeTolerance = 1e-12;
constexpr int kAlphaGridSize = 4096;
// Smallest alpha - 1 on the forward accountant's grid.
constexpr double kAlphaGridFloor = 1e-4;

absl::Status ValidateRequest(const CalibrationRequest& req) {
  if (absl::Status s = ValidateBudget(req.budget); !s.ok()) return s;
  if (!(req.q > 0.0 && req.q < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("q must lie in (0, 1), got ", req.q));
  }
  if (req.rounds < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("rounds must be at least 1, got ", req.rounds));
  }
  return absl::OkStatus();
}

// 4q^2 / (1 - q): sensitivity 2C combined with sampling probability q.
double SamplingFactor(double q) { return 4.0 * q * q / (1.0 - q); }

CalibrationResult Finish(const CalibrationRequest& req, double sigma_sq) {
  const MechanismParams params{.q = req.q,
                               .sigma = std::sqrt(sigma_sq),
                               .clip = 1.0,
                               .rounds = req.rounds};
  return CalibrationResult{.sigma_sq = sigma_sq,
                           .validity = CheckValidity(params, req.budget),
                           .method = req.method};
}

double Ac1Epsilon(double eps0, int64_t rounds, double delta_tilde) {
  const double t = static_cast<double>(rounds);
  return std::sqrt(2.0 * t * std::log(1.0 / delta_tilde)) * eps0 +
         t * eps0 * std::expm1(eps0);
}

}  // namespace

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kProposed:
      return "proposed";
    case Method::kMa:
      return "ma";
    case Method::kAc1:
      return "ac1";
    case Method::kAc2:
      return "ac2";
  }
  return "unknown";
}

absl::StatusOr<Method> ParseMethod(std::string_view name) {
  const std::string lower = absl::AsciiStrToLower(std::string(name));
  for (Method m : kAllMethods) {
    if (lower == MethodName(m)) return m;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown method '", std::string(name),
      "'; expected proposed, ma, ac1 or ac2"));
}

absl::StatusOr<CalibrationResult> NoiseProposed(const CalibrationRequest& req) {
  if (absl::Status s = ValidateRequest(req); !s.ok()) return s;
  const double eps = req.budget.epsilon;
  const double log_inv_delta = std::log(1.0 / req.budget.delta);
  const double bracket =
      2.0 / (eps * eps) * log_inv_delta + 1.0 / eps -
      2.0 / (eps * eps) *
          (std::log(2.0 * log_inv_delta) + 1.0 - std::log(eps));
  if (!(bracket > 0.0)) {
    return absl::OutOfRangeError(absl::StrCat(
        "closed-form noise bound is vacuous: bracket = ", bracket,
        " at epsilon=", eps, " delta=", req.budget.delta));
  }
  const double sigma_sq =
      SamplingFactor(req.q) * static_cast<double>(req.rounds) * bracket;
  return Finish(req, sigma_sq);
}

absl::StatusOr<CalibrationResult> NoiseMa(const CalibrationRequest& req) {
  if (absl::Status s = ValidateRequest(req); !s.ok()) return s;
  const double eps = req.budget.epsilon;
  const double sigma_sq =
      SamplingFactor(req.q) * static_cast<double>(req.rounds) *
      (2.0 / (eps * eps) * std::log(1.0 / req.budget.delta) + 1.0 / eps);
  return Finish(req, sigma_sq);
}

absl::StatusOr<Ac1PerRound> SolveAc1PerRound(const PrivacyBudget& budget,
                                             int64_t rounds,
                                             double delta_tilde) {
  if (absl::Status s = ValidateBudget(budget); !s.ok()) return s;
  if (rounds < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("rounds must be at least 1, got ", rounds));
  }
  if (!(delta_tilde > 0.0 && delta_tilde < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta-tilde must lie in (0, 1), got ", delta_tilde));
  }
  if (!(budget.delta > delta_tilde)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "infeasible budget: delta=", budget.delta,
        " must exceed delta-tilde=", delta_tilde));
  }

  // The composed epsilon is strictly increasing in eps0, zero at 0 and at
  // least sqrt(2T ln(1/dt)) eps0 >= eps0 beyond it, so [0, epsilon] brackets.
  double lo = 0.0;
  double hi = budget.epsilon;
  if (!(Ac1Epsilon(hi, rounds, delta_tilde) >= budget.epsilon)) {
    return absl::InternalError("advanced composition root is not bracketed");
  }
  bool converged = false;
  for (int iter = 0; iter < 400; ++iter) {
    if (hi - lo <= kAc1RelativeTolerance * hi) {
      converged = true;
      break;
    }
    const double mid = 0.5 * (lo + hi);
    if (Ac1Epsilon(mid, rounds, delta_tilde) < budget.epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!converged) {
    return absl::InternalError(
        "bisection for the per-round epsilon did not converge");
  }
  return Ac1PerRound{
      .epsilon0 = 0.5 * (lo + hi),
      .delta0 = (budget.delta - delta_tilde) / static_cast<double>(rounds)};
}

PrivacyBudget ComposeAc1(const Ac1PerRound& per_round, int64_t rounds,
                         double delta_tilde) {
  return PrivacyBudget{
      .epsilon = Ac1Epsilon(per_round.epsilon0, rounds, delta_tilde),
      .delta = static_cast<double>(rounds) * per_round.delta0 + delta_tilde};
}

absl::StatusOr<CalibrationResult> NoiseAc1(const CalibrationRequest& req) {
  if (absl::Status s = ValidateRequest(req); !s.ok()) return s;
  absl::StatusOr<Ac1PerRound> per_round =
      SolveAc1PerRound(req.budget, req.rounds, req.ac1_delta_tilde);
  if (!per_round.ok()) return per_round.status();
  const double eps0 = per_round->epsilon0;
  const double sigma_sq = SamplingFactor(req.q) * 2.0 / (eps0 * eps0) *
                          std::log(4.0 / (5.0 * per_round->delta0));
  return Finish(req, sigma_sq);
}

absl::StatusOr<CalibrationResult> NoiseAc2(const CalibrationRequest& req) {
  if (absl::Status s = ValidateRequest(req); !s.ok()) return s;
  const double eps = req.budget.epsilon;
  const double sigma_sq =
      SamplingFactor(req.q) * 8.0 * static_cast<double>(req.rounds) *
      std::log(std::numbers::e + eps / req.budget.delta) / (eps * eps);
  return Finish(req, sigma_sq);
}

absl::StatusOr<CalibrationResult> Calibrate(const CalibrationRequest& req) {
  switch (req.method) {
    case Method::kProposed:
      return NoiseProposed(req);
    case Method::kMa:
      return NoiseMa(req);
    case Method::kAc1:
      return NoiseAc1(req);
    case Method::kAc2:
      return NoiseAc2(req);
  }
  return absl::InvalidArgumentError("unknown calibration method");
}

absl::StatusOr<double> EpsilonFromNoise(const MechanismParams& params,
                                        double delta) {
  if (params.rounds < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("rounds must be nonnegative, got ", params.rounds));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  const double alpha_max = params.sigma * params.sigma *
                           std::log(1.0 / (params.q * params.sigma));
  if (!(alpha_max > 1.0 + kAlphaGridFloor)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "empty alpha grid: upper limit sigma^2 ln(1/(q sigma)) = ", alpha_max));
  }

  const double log_lo = std::log(kAlphaGridFloor);
  const double log_hi = std::log(alpha_max - 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kAlphaGridSize; ++i) {
    // The last grid point is exactly alpha_max.
    const double alpha =
        i + 1 == kAlphaGridSize
            ? alpha_max
            : 1.0 + std::exp(log_lo + (log_hi - log_lo) * i /
                                          (kAlphaGridSize - 1));
    absl::StatusOr<RdpCost> cost =
        RdpCostSubsampledGaussian(params.q, params.sigma, alpha);
    if (!cost.ok()) return cost.status();
    absl::StatusOr<double> eps = RdpToDp(ComposeRdp(*cost, params.rounds), delta);
    if (!eps.ok()) return eps.status();
    best = std::min(best, *eps);
  }
  return best;
}

}  // namespace ldpfl
