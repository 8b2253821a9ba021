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

#include "ldpfl/tradeoff.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "absl/strings/str_cat.h"

namespace ldpfl {

absl::Status ValidateRegularity(const LossRegularity& reg) {
  if (!(reg.lambda > 0.0 && reg.lambda <= reg.mu)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "need 0 < lambda <= mu, got lambda=", reg.lambda, " mu=", reg.mu));
  }
  if (!(reg.clip > 0.0 && reg.clip <= reg.grad_bound)) {
    return absl::InvalidArgumentError(
        absl::StrCat("need 0 < clip <= grad_bound, got clip=", reg.clip,
                     " grad_bound=", reg.grad_bound));
  }
  if (reg.dim < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("dim must be at least 1, got ", reg.dim));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> AggregateSigmaSq(std::span<const UserSpec> users) {
  if (users.empty()) {
    return absl::InvalidArgumentError("user list is empty");
  }
  double numerator = 0.0;
  double denominator = 0.0;
  for (const UserSpec& user : users) {
    if (user.dataset_size < 1 || !(user.q > 0.0 && user.q < 1.0) ||
        !(user.sigma >= 0.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "invalid user: dataset_size=", user.dataset_size, " q=", user.q,
          " sigma=", user.sigma));
    }
    const double expected_batch =
        static_cast<double>(user.dataset_size) * user.q;
    numerator += (expected_batch * user.sigma) * (expected_batch * user.sigma);
    denominator += expected_batch;
  }
  return numerator / (denominator * denominator);
}

double UtilityLowerBound(int64_t rounds, const LossRegularity& reg,
                         double sigma_agg_sq) {
  const double scale = reg.lambda * reg.lambda * static_cast<double>(rounds) /
                       (reg.mu * reg.grad_bound * reg.grad_bound);
  const double noise_term =
      1.0 / (1.0 + static_cast<double>(reg.dim) * sigma_agg_sq);
  return scale * std::min(0.5, noise_term);
}

double RateUpperBound(const LossRegularity& reg, double sigma_k) {
  const double d = static_cast<double>(reg.dim);
  return d * std::log2(2.0 * std::numbers::pi * std::numbers::e * reg.clip *
                       reg.clip * sigma_k / std::sqrt(d));
}

ValidityCaps ComputeValidityCaps(double q, int64_t rounds,
                                 const LossRegularity& reg, int64_t users) {
  const double sigma_cap = 1.0 / (16.0 * q);
  ValidityCaps caps;
  caps.sigma_sq_cap = sigma_cap * sigma_cap;
  caps.utility_cap = UtilityLowerBound(
      rounds, reg, caps.sigma_sq_cap / static_cast<double>(users));
  caps.rate_cap_bits = RateUpperBound(reg, sigma_cap);
  return caps;
}

SweepConfig DefaultStudy() {
  SweepConfig config;
  config.methods.assign(kAllMethods.begin(), kAllMethods.end());
  for (int i = 0; i <= 18; ++i) {
    config.epsilons.push_back((10.0 + 5.0 * i) / 100.0);
  }
  config.rounds = {70000, 700000};
  config.delta = 1e-4;
  config.q = 1e-3;
  config.users = 100;
  config.reg = LossRegularity{
      .mu = 1.0, .lambda = 1.0, .grad_bound = 5.0, .clip = 1.0, .dim = 10000};
  return config;
}

absl::StatusOr<std::vector<TradeoffPoint>> Sweep(const SweepConfig& config,
                                                 const Calibrator& calibrator) {
  if (config.methods.empty() || config.epsilons.empty() ||
      config.rounds.empty()) {
    return absl::InvalidArgumentError(
        "sweep grid is empty: need at least one method, epsilon and T");
  }
  if (config.users < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("users must be at least 1, got ", config.users));
  }
  if (absl::Status s = ValidateRegularity(config.reg); !s.ok()) return s;

  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  std::vector<TradeoffPoint> rows;
  rows.reserve(config.methods.size() * config.rounds.size() *
               config.epsilons.size());
  for (Method method : config.methods) {
    for (int64_t rounds : config.rounds) {
      for (double epsilon : config.epsilons) {
        TradeoffPoint row;
        row.method = method;
        row.rounds = rounds;
        row.epsilon = epsilon;
        const CalibrationRequest req{
            .budget = {.epsilon = epsilon, .delta = config.delta},
            .q = config.q,
            .rounds = rounds,
            .method = method,
            .ac1_delta_tilde = config.ac1_delta_tilde};
        absl::StatusOr<CalibrationResult> result = calibrator(req);
        if (!result.ok()) {
          row.sigma_k_sq = row.sigma_agg_sq = row.utility_lb =
              row.rate_ub_bits = kNaN;
          row.error = std::string(result.status().message());
        } else {
          row.sigma_k_sq = result->sigma_sq;
          row.sigma_agg_sq =
              result->sigma_sq / static_cast<double>(config.users);
          row.utility_lb = UtilityLowerBound(rounds, config.reg,
                                             row.sigma_agg_sq);
          row.rate_ub_bits =
              RateUpperBound(config.reg, std::sqrt(result->sigma_sq));
          row.validity = result->validity;
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::vector<ReferenceComparison> CompareWithReference(
    std::span<const TradeoffPoint> rows) {
  std::vector<ReferenceComparison> out;
  for (const ReferenceValue& ref : kReferenceValues) {
    ReferenceComparison cmp{.method = ref.method,
                            .reference_utility = ref.utility,
                            .reference_rate_bits = ref.rate_bits,
                            .computed_utility = std::nullopt,
                            .computed_rate_bits = std::nullopt};
    for (const TradeoffPoint& row : rows) {
      if (row.method == ref.method && row.rounds == kReferenceRounds &&
          std::abs(row.epsilon - kReferenceEpsilon) < 1e-12 &&
          row.error.empty()) {
        cmp.computed_utility = row.utility_lb;
        cmp.computed_rate_bits = row.rate_ub_bits;
        break;
      }
    }
    out.push_back(cmp);
  }
  return out;
}

bool ReferenceOrderingReproduced(
    std::span<const ReferenceComparison> comparisons) {
  for (const ReferenceComparison& a : comparisons) {
    if (!a.computed_utility || !a.computed_rate_bits) return false;
    for (const ReferenceComparison& b : comparisons) {
      if (a.reference_utility > b.reference_utility &&
          !(*a.computed_utility > *b.computed_utility)) {
        return false;
      }
      if (a.reference_rate_bits < b.reference_rate_bits &&
          !(*a.computed_rate_bits < *b.computed_rate_bits)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace ldpfl
