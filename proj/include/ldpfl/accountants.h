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

#ifndef LDPFL_ACCOUNTANTS_H_
#define LDPFL_ACCOUNTANTS_H_

#include <array>
#include <cstdint>
#include <functional>
#include <string_view>

#include "absl/status/statusor.h"
#include "ldpfl/privacy_core.h"

// Noise-variance calibrators. Each returns the smallest noise multiplier
// squared sigma_k^2 that meets a per-user (epsilon, delta) target after T
// rounds of Poisson-subsampled Gaussian releases with sensitivity 2C.
//
// Error codes:
//   InvalidArgument    - malformed request (budget, q, rounds, delta-tilde).
//   FailedPrecondition - AC1 budget infeasible (delta <= delta-tilde).
//   OutOfRange         - the proposed closed form is vacuous (bracket <= 0).
//   Internal           - a numeric solve failed.
namespace ldpfl {

enum class Method { kProposed, kMa, kAc1, kAc2 };

inline constexpr std::array<Method, 4> kAllMethods = {
    Method::kProposed, Method::kMa, Method::kAc1, Method::kAc2};

inline constexpr double kDefaultAc1DeltaTilde = 1e-5;

std::string_view MethodName(Method method);
absl::StatusOr<Method> ParseMethod(std::string_view name);

struct CalibrationRequest {
  PrivacyBudget budget;
  double q = 0.0;
  int64_t rounds = 1;
  Method method = Method::kProposed;
  double ac1_delta_tilde = kDefaultAc1DeltaTilde;
};

struct CalibrationResult {
  double sigma_sq = 0.0;
  ValidityReport validity;
  Method method = Method::kProposed;
};

using Calibrator =
    std::function<absl::StatusOr<CalibrationResult>(const CalibrationRequest&)>;

// 4q^2T/(1-q) [2 ln(1/d)/e^2 + 1/e - 2/e^2 (ln(2 ln(1/d)) + 1 - ln e)],
// remainder dropped.
absl::StatusOr<CalibrationResult> NoiseProposed(const CalibrationRequest& req);

// 4q^2T/(1-q) (2 ln(1/d)/e^2 + 1/e), remainder dropped.
absl::StatusOr<CalibrationResult> NoiseMa(const CalibrationRequest& req);

// Advanced composition. The per-round (eps0, delta0) is solved from
//   e = sqrt(2T ln(1/dt)) eps0 + T eps0 (exp(eps0) - 1),  d = T delta0 + dt
// and fed to the single-release Gaussian bound
//   4q^2/(1-q) * 2/eps0^2 * ln(4/(5 delta0)).
absl::StatusOr<CalibrationResult> NoiseAc1(const CalibrationRequest& req);

// 4q^2/(1-q) * 8T ln(e + e_k/d_k) / e_k^2.
absl::StatusOr<CalibrationResult> NoiseAc2(const CalibrationRequest& req);

// Dispatches on req.method.
absl::StatusOr<CalibrationResult> Calibrate(const CalibrationRequest& req);

struct Ac1PerRound {
  double epsilon0 = 0.0;
  double delta0 = 0.0;
};

// Inverts the advanced-composition relations by bisection on [0, epsilon].
absl::StatusOr<Ac1PerRound> SolveAc1PerRound(const PrivacyBudget& budget,
                                             int64_t rounds,
                                             double delta_tilde);

// Forward advanced composition of a per-round guarantee over `rounds` rounds.
PrivacyBudget ComposeAc1(const Ac1PerRound& per_round, int64_t rounds,
                         double delta_tilde);

// Forward accountant: smallest epsilon over a logarithmic alpha grid in
// (1, sigma^2 ln(1/(q sigma))] of the composed leading-order RDP cost.
// `params.rounds` may be zero (no composition cost).
absl::StatusOr<double> EpsilonFromNoise(const MechanismParams& params,
                                        double delta);

}  // namespace ldpfl

#endif  // LDPFL_ACCOUNTANTS_H_
