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

#include "ldpfl/fedsgd_sim.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "absl/strings/str_cat.h"
#include "ldpfl/kernels.h"

namespace ldpfl {
namespace {

absl::Status FieldError(absl::string_view field, absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat(field, ": ", what));
}

std::vector<double> LinearCurvature(int64_t dim, double lambda, double mu) {
  std::vector<double> h(dim);
  for (int64_t i = 0; i < dim; ++i) {
    h[i] = dim == 1 ? lambda
                    : lambda + (mu - lambda) * static_cast<double>(i) /
                                   static_cast<double>(dim - 1);
  }
  return h;
}

std::vector<double> PooledMean(const std::vector<Dataset>& users,
                               int64_t dim) {
  std::vector<double> mean(dim, 0.0);
  int64_t total = 0;
  for (const Dataset& data : users) {
    for (int64_t r = 0; r < data.size(); ++r) {
      kernels::Axpy(1.0, data.Row(r), mean);
    }
    total += data.size();
  }
  if (total > 0) kernels::Scale(1.0 / static_cast<double>(total), mean);
  return mean;
}

struct Moments {
  double mean = 0.0;
  double stderr = 0.0;
};

Moments MeanAndStderr(const std::vector<std::vector<double>>& by_rep,
                      size_t index) {
  const size_t n = by_rep.size();
  double sum = 0.0;
  for (const auto& rep : by_rep) sum += rep[index];
  const double mean = sum / static_cast<double>(n);
  if (n < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const auto& rep : by_rep) {
    const double d = rep[index] - mean;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

struct RepetitionTrace {
  std::vector<double> loss_gap;
  std::vector<double> mse;
  double max_grad_norm = 0.0;
  int64_t violations = 0;
};

RepetitionTrace RunRepetition(const SimConfig& cfg,
                              const QuadraticProblem& problem,
                              uint64_t repetition) {
  RepetitionTrace trace;
  trace.loss_gap.reserve(cfg.rounds + 1);
  trace.mse.reserve(cfg.rounds + 1);
  SimState state;
  state.w.assign(problem.dim, 0.0);
  const std::vector<double> unit(problem.dim, 1.0);
  auto record = [&] {
    trace.loss_gap.push_back(problem.LossGap(state.w));
    trace.mse.push_back(
        kernels::WeightedSquaredDistance(unit, state.w, problem.optimum));
  };
  record();
  for (int64_t t = 1; t <= cfg.rounds; ++t) {
    RunRound(state, problem, cfg, t, repetition);
    record();
  }
  trace.max_grad_norm = state.max_grad_norm;
  trace.violations = state.grad_bound_violations;
  return trace;
}

}  // namespace

Rng MakeStream(uint64_t root_seed, uint64_t repetition, uint64_t user,
               uint64_t round) {
  // SplitMix64 finalizer chained over the key components.
  auto mix = [](uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  uint64_t key = mix(root_seed);
  key = mix(key ^ repetition);
  key = mix(key ^ user);
  key = mix(key ^ round);
  return Rng(key);
}

SimConfig HomogeneousConfig(int64_t users, int64_t dim, int64_t per_user_data,
                            double q, double sigma) {
  SimConfig cfg;
  cfg.users = users;
  cfg.dim = dim;
  cfg.per_user_data.assign(users, per_user_data);
  cfg.q.assign(users, q);
  cfg.sigma.assign(users, sigma);
  return cfg;
}

absl::Status ValidateSimConfig(const SimConfig& cfg) {
  if (cfg.users < 1) return FieldError("users", "must be at least 1");
  if (cfg.dim < 1) return FieldError("dim", "must be at least 1");
  const size_t k = static_cast<size_t>(cfg.users);
  if (cfg.per_user_data.size() != k) {
    return FieldError("per_user_data", "needs one entry per user");
  }
  if (cfg.q.size() != k) return FieldError("q", "needs one entry per user");
  if (cfg.sigma.size() != k) {
    return FieldError("sigma", "needs one entry per user");
  }
  for (size_t i = 0; i < k; ++i) {
    if (cfg.per_user_data[i] < 1 ||
        cfg.per_user_data[i] > std::numeric_limits<uint32_t>::max()) {
      return FieldError("per_user_data", "entries must be in [1, 2^32)");
    }
    if (!(cfg.q[i] > 0.0 && cfg.q[i] < 1.0)) {
      return FieldError("q", "entries must lie in (0, 1)");
    }
    if (!(cfg.sigma[i] >= 0.0) || !std::isfinite(cfg.sigma[i])) {
      return FieldError("sigma", "entries must be finite and nonnegative");
    }
  }
  if (!(cfg.clip > 0.0)) return FieldError("clip", "must be positive");
  if (!(cfg.grad_bound >= cfg.clip)) {
    return FieldError("grad_bound", "must be at least clip");
  }
  if (cfg.rounds < 1) return FieldError("rounds", "must be at least 1");
  if (!(cfg.lambda > 0.0)) return FieldError("lambda", "must be positive");
  if (!(cfg.mu >= cfg.lambda)) {
    return FieldError("mu", "must be at least lambda");
  }
  if (cfg.repetitions < 1) {
    return FieldError("repetitions", "must be at least 1");
  }
  if (cfg.threads < 0) return FieldError("threads", "must be nonnegative");
  return absl::OkStatus();
}

double QuadraticProblem::PooledLoss(std::span<const double> w) const {
  double total = 0.0;
  int64_t count = 0;
  for (const Dataset& data : users) {
    for (int64_t r = 0; r < data.size(); ++r) {
      total += 0.5 * kernels::WeightedSquaredDistance(curvature, w, data.Row(r));
    }
    count += data.size();
  }
  return total / static_cast<double>(count);
}

double QuadraticProblem::LossGap(std::span<const double> w) const {
  return 0.5 * kernels::WeightedSquaredDistance(curvature, w, optimum);
}

QuadraticProblem MakeProblemFromData(std::vector<Dataset> users,
                                     std::vector<double> curvature) {
  QuadraticProblem problem;
  problem.dim = static_cast<int64_t>(curvature.size());
  problem.users = std::move(users);
  problem.curvature = std::move(curvature);
  problem.optimum = PooledMean(problem.users, problem.dim);
  return problem;
}

absl::StatusOr<QuadraticProblem> MakeQuadraticProblem(const SimConfig& cfg,
                                                      uint64_t seed) {
  if (absl::Status s = ValidateSimConfig(cfg); !s.ok()) return s;
  const double radius = 0.5 * cfg.grad_bound;
  std::vector<double> center(cfg.dim, 0.0);
  center[0] = radius;

  std::vector<Dataset> users;
  users.reserve(cfg.users);
  std::vector<double> direction(cfg.dim);
  for (int64_t k = 0; k < cfg.users; ++k) {
    Rng rng = MakeStream(seed, kDataStream, k, 0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    Dataset data{.dim = cfg.dim, .points = {}, .center = center,
                 .radius = radius};
    data.points.reserve(cfg.per_user_data[k] * cfg.dim);
    for (int64_t n = 0; n < cfg.per_user_data[k]; ++n) {
      double norm_sq = 0.0;
      do {
        for (double& v : direction) v = normal(rng);
        norm_sq = kernels::SquaredNorm(direction);
      } while (norm_sq == 0.0);
      const double r = radius * std::pow(uniform(rng),
                                         1.0 / static_cast<double>(cfg.dim));
      const double s = r / std::sqrt(norm_sq);
      for (int64_t i = 0; i < cfg.dim; ++i) {
        data.points.push_back(center[i] + s * direction[i]);
      }
    }
    users.push_back(std::move(data));
  }
  return MakeProblemFromData(std::move(users),
                             LinearCurvature(cfg.dim, cfg.lambda, cfg.mu));
}

void LocalGradient(std::span<const double> w, const Dataset& data,
                   std::span<const uint32_t> sample,
                   std::span<const double> curvature, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  kernels::AccumulateRows(data.points, static_cast<size_t>(data.dim), sample,
                          out);
  kernels::Scale(1.0 / static_cast<double>(sample.size()), out);
  kernels::HadamardDifference(curvature, w, out, out);
}

double ClipGradient(std::span<double> g, double clip) {
  const double norm = std::sqrt(kernels::SquaredNorm(g));
  if (norm > clip) kernels::Scale(clip / norm, g);
  return norm;
}

std::vector<uint32_t> PoissonSample(int64_t size, double q, Rng& rng) {
  // Gaps between kept indices are geometric, which matches independent
  // Bernoulli(q) inclusion while drawing once per kept index.
  std::geometric_distribution<int64_t> gap(q);
  std::vector<uint32_t> out;
  out.reserve(static_cast<size_t>(q * static_cast<double>(size) * 1.5) + 4);
  for (int64_t i = gap(rng); i < size; i += gap(rng) + 1) {
    out.push_back(static_cast<uint32_t>(i));
  }
  return out;
}

void Perturb(std::span<double> g, double clip, double sigma, Rng& rng) {
  if (sigma == 0.0) return;
  std::normal_distribution<double> noise(0.0, clip * sigma);
  for (double& v : g) v += noise(rng);
}

void RunRound(SimState& state, const QuadraticProblem& problem,
              const SimConfig& cfg, int64_t t, uint64_t repetition) {
  const size_t dim = static_cast<size_t>(problem.dim);
  state.grad.resize(dim);
  state.sum.assign(dim, 0.0);
  int64_t pooled = 0;
  for (int64_t k = 0; k < cfg.users; ++k) {
    Rng rng = MakeStream(cfg.seed, repetition, static_cast<uint64_t>(k),
                         static_cast<uint64_t>(t));
    const Dataset& data = problem.users[k];
    const std::vector<uint32_t> sample =
        PoissonSample(data.size(), cfg.q[k], rng);
    if (sample.empty()) continue;
    LocalGradient(state.w, data, sample, problem.curvature, state.grad);
    const double norm = ClipGradient(state.grad, cfg.clip);
    state.max_grad_norm = std::max(state.max_grad_norm, norm);
    if (norm > cfg.grad_bound) ++state.grad_bound_violations;
    Perturb(state.grad, cfg.clip, cfg.sigma[k], rng);
    kernels::Axpy(static_cast<double>(sample.size()), state.grad, state.sum);
    pooled += static_cast<int64_t>(sample.size());
  }
  if (pooled == 0) return;
  const double eta =
      cfg.grad_bound / (cfg.clip * cfg.lambda * static_cast<double>(t));
  kernels::Axpy(-eta / static_cast<double>(pooled), state.sum, state.w);
}

absl::StatusOr<SimResult> RunSimulation(const SimConfig& cfg,
                                        const QuadraticProblem& problem) {
  if (absl::Status s = ValidateSimConfig(cfg); !s.ok()) return s;
  if (problem.dim != cfg.dim ||
      static_cast<int64_t>(problem.users.size()) != cfg.users) {
    return absl::InvalidArgumentError(
        "problem shape does not match the configuration");
  }

  const int64_t reps = cfg.repetitions;
  std::vector<RepetitionTrace> traces(reps);
  int workers = cfg.threads == 0
                    ? static_cast<int>(std::thread::hardware_concurrency())
                    : cfg.threads;
  workers = std::clamp<int>(workers, 1, static_cast<int>(reps));
  if (workers == 1) {
    for (int64_t r = 0; r < reps; ++r) {
      traces[r] = RunRepetition(cfg, problem, static_cast<uint64_t>(r));
    }
  } else {
    std::vector<std::jthread> pool;
    for (int id = 0; id < workers; ++id) {
      pool.emplace_back([&, id] {
        for (int64_t r = id; r < reps; r += workers) {
          traces[r] = RunRepetition(cfg, problem, static_cast<uint64_t>(r));
        }
      });
    }
  }

  SimResult result;
  for (RepetitionTrace& trace : traces) {
    result.realized_grad_norm_max =
        std::max(result.realized_grad_norm_max, trace.max_grad_norm);
    result.grad_bound_violations += trace.violations;
    result.loss_gap_by_repetition.push_back(std::move(trace.loss_gap));
    result.mse_by_repetition.push_back(std::move(trace.mse));
  }
  if (cfg.enforce_grad_bound && result.grad_bound_violations > 0) {
    return absl::FailedPreconditionError(absl::StrCat(
        "grad_bound: realized gradient norm ", result.realized_grad_norm_max,
        " exceeds the configured bound ", cfg.grad_bound, " (",
        result.grad_bound_violations, " violations)"));
  }

  const size_t points = static_cast<size_t>(cfg.rounds) + 1;
  for (size_t i = 0; i < points; ++i) {
    const Moments gap = MeanAndStderr(result.loss_gap_by_repetition, i);
    const Moments mse = MeanAndStderr(result.mse_by_repetition, i);
    result.mean_loss_gap.push_back(gap.mean);
    result.stderr_loss_gap.push_back(gap.stderr);
    result.mean_mse.push_back(mse.mean);
    result.stderr_mse.push_back(mse.stderr);
  }
  result.empirical_utility = 1.0 / result.mean_loss_gap.back();
  return result;
}

absl::StatusOr<SimResult> RunSimulation(const SimConfig& cfg) {
  absl::StatusOr<QuadraticProblem> problem = MakeQuadraticProblem(cfg, cfg.seed);
  if (!problem.ok()) return problem.status();
  return RunSimulation(cfg, *problem);
}

}  // namespace ldpfl
