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

#ifndef LDPFL_TRADEOFF_H_
#define LDPFL_TRADEOFF_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ldpfl/accountants.h"
#include "ldpfl/privacy_core.h"

namespace ldpfl {

struct UserSpec {
  int64_t dataset_size = 1;
  double q = 0.0;
  double sigma = 0.0;
  PrivacyBudget budget;
};

// Regularity of the training loss: mu-smooth, lambda-strongly convex, gradient
// norms bounded by grad_bound, clipped at clip, in dim dimensions.
struct LossRegularity {
  double mu = 1.0;
  double lambda = 1.0;
  double grad_bound = 1.0;
  double clip = 1.0;
  int64_t dim = 1;
};

absl::Status ValidateRegularity(const LossRegularity& reg);

// sigma^2 = sum_k (|D_k| q_k sigma_k)^2 / (sum_k |D_k| q_k)^2.
absl::StatusOr<double> AggregateSigmaSq(std::span<const UserSpec> users);

// lambda^2 T / (mu G^2) * min{1/2, 1/(1 + d sigma^2)}.
double UtilityLowerBound(int64_t rounds, const LossRegularity& reg,
                         double sigma_agg_sq);

// d log2(2 pi e C^2 sigma_k / sqrt(d)) bits per transmitted gradient. May be
// negative: differential entropy is signed.
double RateUpperBound(const LossRegularity& reg, double sigma_k);

struct ValidityCaps {
  double sigma_sq_cap = 0.0;  // 1/(16 q)^2
  double utility_cap = 0.0;   // utility bound at sigma_agg^2 = cap / K
  double rate_cap_bits = 0.0; // rate bound at sigma_k = 1/(16 q)
};

ValidityCaps ComputeValidityCaps(double q, int64_t rounds,
                                 const LossRegularity& reg, int64_t users);

struct TradeoffPoint {
  Method method = Method::kProposed;
  int64_t rounds = 0;
  double epsilon = 0.0;
  double sigma_k_sq = 0.0;
  double sigma_agg_sq = 0.0;
  double utility_lb = 0.0;
  double rate_ub_bits = 0.0;
  ValidityReport validity;
  // Empty on success; the calibration error otherwise (numbers are then NaN).
  std::string error;
};

struct SweepConfig {
  std::vector<Method> methods;
  std::vector<double> epsilons;
  std::vector<int64_t> rounds;
  double delta = 1e-4;
  double q = 1e-3;
  int64_t users = 100;
  LossRegularity reg;
  double ac1_delta_tilde = kDefaultAc1DeltaTilde;
};

// The evaluation grid: K=100 homogeneous users, delta=1e-4, q=1e-3, d=1e4,
// mu=lambda=C=1, G=5, T in {7e4, 7e5}, epsilon in {0.10, 0.15, ..., 1.00}.
SweepConfig DefaultStudy();

// Rows in (method, T, epsilon) order following the order of the config lists.
// Per-point calibration failures are recorded in the row.
absl::StatusOr<std::vector<TradeoffPoint>> Sweep(
    const SweepConfig& config, const Calibrator& calibrator = Calibrate);

// Externally reported values at epsilon=0.3, T=7e4 for the default study.
// These are informational; they are not reproducible from the closed forms.
struct ReferenceValue {
  Method method;
  double utility;
  double rate_bits;
};

inline constexpr double kReferenceEpsilon = 0.3;
inline constexpr int64_t kReferenceRounds = 70000;
inline constexpr ReferenceValue kReferenceValues[] = {
    {Method::kProposed, 25.83, 5.81e3},
    {Method::kMa, 10.79, 6.44e3},
    {Method::kAc1, 0.22, 9.26e3},
    {Method::kAc2, 1.40, 7.91e3},
};

struct ReferenceComparison {
  Method method;
  double reference_utility;
  double reference_rate_bits;
  std::optional<double> computed_utility;
  std::optional<double> computed_rate_bits;
};

// Pairs each reference value with the matching sweep row, if present.
std::vector<ReferenceComparison> CompareWithReference(
    std::span<const TradeoffPoint> rows);

// True when the computed values rank the methods the same way the reference
// values do (utility descending, rate ascending).
bool ReferenceOrderingReproduced(
    std::span<const ReferenceComparison> comparisons);

}  // namespace ldpfl

#endif  // LDPFL_TRADEOFF_H_
