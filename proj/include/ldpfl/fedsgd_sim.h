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

#ifndef LDPFL_FEDSGD_SIM_H_
#define LDPFL_FEDSGD_SIM_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

// Seeded simulator of noisy federated SGD on a synthetic strongly convex
// problem. Each round every user Poisson-samples its data, computes the mean
// loss gradient, clips it to norm C, adds N(0, C^2 sigma_k^2 I) noise, and the
// server applies
//   w <- w - eta_t * sum_k (|J_k| / |J|) g_k,   eta_t = G / (C lambda t).
//
// Loss: l(w, x) = 1/2 sum_i h_i (w_i - x_i)^2 with curvature h spaced linearly
// from lambda to mu across dimensions, so the pooled loss is mu-smooth and
// lambda-strongly convex and its minimizer is the pooled data mean.
namespace ldpfl {

using Rng = std::mt19937_64;

// Random streams are keyed by (root seed, repetition, user, round) through a
// SplitMix64 hash that seeds the engine. Data generation uses repetition
// kDataStream.
inline constexpr uint64_t kDataStream = ~uint64_t{0};
Rng MakeStream(uint64_t root_seed, uint64_t repetition, uint64_t user,
               uint64_t round);

struct SimConfig {
  int64_t users = 1;
  int64_t dim = 1;
  // Per-user vectors; each must hold exactly `users` entries.
  std::vector<int64_t> per_user_data;
  std::vector<double> q;
  std::vector<double> sigma;
  double clip = 1.0;
  int64_t rounds = 1;
  double lambda = 1.0;
  double mu = 1.0;
  double grad_bound = 1.0;
  uint64_t seed = 0;
  int64_t repetitions = 1;
  // Fail the run when a realized gradient norm exceeds grad_bound.
  bool enforce_grad_bound = true;
  // Worker threads for repetitions; 0 picks hardware concurrency.
  int threads = 1;
};

// Homogeneous users sharing |D|, q and sigma.
SimConfig HomogeneousConfig(int64_t users, int64_t dim, int64_t per_user_data,
                            double q, double sigma);

// Errors name the offending field.
absl::Status ValidateSimConfig(const SimConfig& cfg);

// Row-major points, each within `radius` of `center`.
struct Dataset {
  int64_t dim = 0;
  std::vector<double> points;
  std::vector<double> center;
  double radius = 0.0;

  int64_t size() const {
    return dim == 0 ? 0 : static_cast<int64_t>(points.size()) / dim;
  }
  std::span<const double> Row(int64_t i) const {
    return std::span<const double>(points).subspan(i * dim, dim);
  }
};

struct QuadraticProblem {
  int64_t dim = 0;
  std::vector<Dataset> users;
  std::vector<double> curvature;
  // Mean of all points across users.
  std::vector<double> optimum;

  // Average loss over the pooled dataset.
  double PooledLoss(std::span<const double> w) const;
  // PooledLoss(w) - PooledLoss(optimum), via the exact identity
  // 1/2 sum_i h_i (w_i - w*_i)^2.
  double LossGap(std::span<const double> w) const;
};

// Points uniform in a ball of radius G/2 centred at (G/2) e_1, so that
// |x| <= G for every point and the initial iterate w = 0 sees gradients of
// norm about G/2.
absl::StatusOr<QuadraticProblem> MakeQuadraticProblem(const SimConfig& cfg,
                                                      uint64_t seed);

// Builds a problem from explicit data; `curvature` must have `dim` entries.
QuadraticProblem MakeProblemFromData(std::vector<Dataset> users,
                                     std::vector<double> curvature);

// Mean loss gradient over the listed points: h * (w - mean_J x). `sample`
// must be nonempty.
void LocalGradient(std::span<const double> w, const Dataset& data,
                   std::span<const uint32_t> sample,
                   std::span<const double> curvature, std::span<double> out);

// Scales g to norm at most `clip`; returns the norm before clipping.
double ClipGradient(std::span<double> g, double clip);

// Each index in [0, size) kept independently with probability q.
std::vector<uint32_t> PoissonSample(int64_t size, double q, Rng& rng);

// Adds N(0, (clip sigma)^2) to every coordinate. sigma = 0 draws nothing.
void Perturb(std::span<double> g, double clip, double sigma, Rng& rng);

struct SimState {
  std::vector<double> w;
  double max_grad_norm = 0.0;
  int64_t grad_bound_violations = 0;
  // Reused buffers.
  std::vector<double> grad;
  std::vector<double> sum;
};

// Applies round t >= 1 of repetition `repetition` to `state`. Users with an
// empty sample contribute nothing; if all are empty, w is unchanged.
void RunRound(SimState& state, const QuadraticProblem& problem,
              const SimConfig& cfg, int64_t t, uint64_t repetition);

struct SimResult {
  // Index t-1 holds the statistic at w^(t), t = 1..T+1 (w^(1) = 0).
  std::vector<double> mean_loss_gap;
  std::vector<double> stderr_loss_gap;
  std::vector<double> mean_mse;
  std::vector<double> stderr_mse;
  // [repetition][t-1]
  std::vector<std::vector<double>> loss_gap_by_repetition;
  std::vector<std::vector<double>> mse_by_repetition;
  // 1 / mean final loss gap.
  double empirical_utility = 0.0;
  double realized_grad_norm_max = 0.0;
  int64_t grad_bound_violations = 0;
};

// Deterministic in (cfg, problem): repetitions own their streams and results
// are gathered by repetition index.
absl::StatusOr<SimResult> RunSimulation(const SimConfig& cfg,
                                        const QuadraticProblem& problem);
// Generates the problem from cfg.seed first.
absl::StatusOr<SimResult> RunSimulation(const SimConfig& cfg);

}  // namespace ldpfl

#endif  // LDPFL_FEDSGD_SIM_H_
