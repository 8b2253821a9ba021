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

#ifndef LDPFL_PRIVACY_CORE_H_
#define LDPFL_PRIVACY_CORE_H_

#include <cstdint>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

// Renyi-DP primitives for the Poisson-subsampled Gaussian mechanism applied to
// clipped gradients (sensitivity 2C). All logarithms are natural.
namespace ldpfl {

// Target (epsilon, delta) for one user.
struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;
};

// One user's Gaussian mechanism. The per-dimension noise standard deviation is
// clip * sigma.
struct MechanismParams {
  double q = 0.0;
  double sigma = 0.0;
  double clip = 1.0;
  int64_t rounds = 1;
};

// (alpha, gamma)-RDP.
struct RdpCost {
  double alpha = 2.0;
  double gamma = 0.0;
};

struct ValidityReport {
  bool q_ok = false;        // q < 1 / (16 sigma)
  bool sigma_ok = false;    // sigma >= 1
  bool epsilon_ok = false;  // epsilon > 2 ln(1/delta) max(delta, 1/(sigma^2 ln(1/(q sigma))))
  bool overall = false;
};

absl::Status ValidateBudget(const PrivacyBudget& budget);
absl::Status ValidateMechanism(const MechanismParams& params);

// Leading-order RDP cost of one round:
//   gamma = 2 q^2 (alpha + 1) / ((1 - q) sigma^2).
// Only defined inside q < 1/(16 sigma), sigma >= 1, alpha > 1; anything else
// is an InvalidArgument error.
absl::StatusOr<RdpCost> RdpCostSubsampledGaussian(double q, double sigma,
                                                  double alpha);

// Linear composition over `rounds` rounds. Zero rounds yields zero cost.
RdpCost ComposeRdp(const RdpCost& cost, int64_t rounds);

// Classic conversion: epsilon = gamma + ln(1/delta) / (alpha - 1).
absl::StatusOr<double> RdpToDp(const RdpCost& cost, double delta);

// alpha = 2 ln(1/delta) / epsilon. Not clamped: callers check IsRdpOrder.
double OptimalAlpha(const PrivacyBudget& budget);

inline bool IsRdpOrder(double alpha) { return alpha > 1.0; }

// Evaluates each validity flag independently. The epsilon condition is checked
// against the sigma already present in `params`.
ValidityReport CheckValidity(const MechanismParams& params,
                             const PrivacyBudget& budget);

// Smallest epsilon for which a single Gaussian release with the given L2
// sensitivity and absolute noise standard deviation is (epsilon, delta)-DP,
// from the exact tail characterization
//   delta(eps) = Phi(s/(2n) - eps n/s) - e^eps Phi(-s/(2n) - eps n/s).
absl::StatusOr<double> GaussianDpSingleRound(double sensitivity,
                                             double sigma_abs, double delta);

}  // namespace ldpfl

#endif  // LDPFL_PRIVACY_CORE_H_
