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

#ifndef LDPFL_CHECKS_H_
#define LDPFL_CHECKS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ldpfl/accountants.h"
#include "ldpfl/fedsgd_sim.h"

// End-to-end checks of the calibrators, bounds and simulator. Each returns a
// pass/fail verdict with a one-line summary and optional diagnostic lines.
namespace ldpfl {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string summary;
  std::vector<std::string> details;
};

// sigma^2 cap at q = 1e-3 equals 3906.25.
CheckResult CheckValidityCapExact();

// Utility caps at T in {7e4, 7e5} for the default study equal 0.00717 and
// 0.0717 within 1%.
CheckResult CheckUtilityCaps();

// On the default study grid, rows where all methods are valid satisfy
// Proposed <= MA <= AC2 <= AC1 in sigma^2, the reverse in utility and the same
// order in rate.
CheckResult CheckAccountantOrdering(const Calibrator& calibrator = Calibrate);

// Solving and recomposing the AC1 per-round budget recovers (epsilon, delta)
// to relative error 1e-9 on the default study grid.
CheckResult CheckAc1Inversion();

// Integrated log-moment of the subsampled Gaussian versus alpha * gamma for
// alpha in 2..8, sigma in {1, 2, 4}, q in {1e-2, 1e-3, 1e-4} with q < 1/(16
// sigma): within a factor of 2 at q = 1e-3, and |ratio - 1| non-increasing as
// q decreases.
CheckResult CheckRdpOracle();

struct SimBoundOptions {
  int64_t users = 5;
  int64_t dim = 10;
  int64_t per_user_data = 200;
  double q = 0.1;
  double clip = 1.0;
  int64_t rounds = 5000;
  int64_t repetitions = 100;
  std::vector<double> sigmas = {0.0, 1.0};
  // Scale of the synthetic data for the pilot run; points lie within
  // pilot_grad_bound of the origin.
  double pilot_grad_bound = 2.0;
  double pilot_margin = 1.5;
  uint64_t seed = 20260417;
  int threads = 0;
};

// G from a noiseless pilot: pilot_margin times its realized max gradient norm.
absl::StatusOr<double> PilotGradBound(const SimConfig& cfg,
                                      const QuadraticProblem& problem,
                                      double margin);

// For each sigma: per-run empirical utility (1 / final loss gap) meets the
// utility bound in at least 95% of runs, and the mean MSE satisfies
// max{2, 1 + d sigma_agg^2} 2 G^2 / (lambda^2 t) + 3 stderr for every t.
CheckResult CheckSimulationBound(const SimBoundOptions& options = {});

// The weighted user-gradient average equals the pooled-sample gradient to
// relative error 1e-10 on 100 random instances with clipping inactive.
CheckResult CheckAggregationIdentity(uint64_t seed = 7);

// Per-dimension variance of sum_k (|J_k| / |J|) Z_k over 1e5 draws is within
// 5% of C^2 sigma_agg^2.
CheckResult CheckNoiseAggregation(uint64_t seed = 11);

// The default sweep reproduces the reference cross-method ordering at
// epsilon = 0.3, T = 7e4.
CheckResult CheckReferenceOrdering();

}  // namespace ldpfl

#endif  // LDPFL_CHECKS_H_
