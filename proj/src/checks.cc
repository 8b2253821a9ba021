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

#include "ldpfl/checks.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "ldpfl/kernels.h"
#include "ldpfl/rdp_oracle.h"
#include "ldpfl/tradeoff.h"

namespace ldpfl {
namespace {

double RelativeError(double value, double expected) {
  return std::abs(value - expected) / std::abs(expected);
}

CheckResult Fail(std::string name, std::string summary) {
  return CheckResult{std::move(name), false, std::move(summary), {}};
}

// Sweep rows keyed by (T, epsilon), then by method.
using Groups = std::map<std::pair<int64_t, double>,
                        std::map<Method, const TradeoffPoint*>>;

Groups GroupRows(const std::vector<TradeoffPoint>& rows) {
  Groups groups;
  for (const TradeoffPoint& row : rows) {
    groups[{row.rounds, row.epsilon}][row.method] = &row;
  }
  return groups;
}

constexpr Method kOrder[] = {Method::kProposed, Method::kMa, Method::kAc2,
                             Method::kAc1};

}  // namespace

CheckResult CheckValidityCapExact() {
  const ValidityCaps caps = ComputeValidityCaps(1e-3, 70000, {}, 1);
  const double error = std::abs(caps.sigma_sq_cap - 3906.25);
  return CheckResult{
      "validity cap", error <= 1e-9,
      absl::StrFormat("sigma^2 cap at q=1e-3 is %.17g (expected 3906.25, "
                      "abs error %.3g)",
                      caps.sigma_sq_cap, error),
      {}};
}

CheckResult CheckUtilityCaps() {
  const SweepConfig study = DefaultStudy();
  const std::pair<int64_t, double> expected[] = {{70000, 0.00717},
                                                 {700000, 0.0717}};
  CheckResult result{"utility caps", true, "", {}};
  std::string summary;
  for (const auto& [rounds, target] : expected) {
    const ValidityCaps caps =
        ComputeValidityCaps(study.q, rounds, study.reg, study.users);
    const double error = RelativeError(caps.utility_cap, target);
    const bool ok = error <= 0.01;
    result.passed = result.passed && ok;
    absl::StrAppendFormat(&summary, "%sT=%d: %.6g vs %.6g (rel %.2e)",
                          summary.empty() ? "" : "; ", rounds,
                          caps.utility_cap, target, error);
  }
  result.summary = std::move(summary);
  return result;
}

CheckResult CheckAccountantOrdering(const Calibrator& calibrator) {
  const std::string name = "accountant ordering";
  absl::StatusOr<std::vector<TradeoffPoint>> rows =
      Sweep(DefaultStudy(), calibrator);
  if (!rows.ok()) return Fail(name, std::string(rows.status().message()));

  int compared = 0;
  int violations = 0;
  CheckResult result{name, false, "", {}};
  for (const auto& [key, by_method] : GroupRows(*rows)) {
    bool all_valid = by_method.size() == std::size(kOrder);
    for (const auto& [method, row] : by_method) {
      all_valid = all_valid && row->error.empty() && row->validity.overall;
    }
    if (!all_valid) continue;
    ++compared;
    for (size_t i = 0; i + 1 < std::size(kOrder); ++i) {
      const TradeoffPoint& lo = *by_method.at(kOrder[i]);
      const TradeoffPoint& hi = *by_method.at(kOrder[i + 1]);
      const bool ok = lo.sigma_k_sq <= hi.sigma_k_sq &&
                      lo.utility_lb >= hi.utility_lb &&
                      lo.rate_ub_bits <= hi.rate_ub_bits;
      if (!ok) {
        ++violations;
        result.details.push_back(absl::StrFormat(
            "T=%d eps=%.2f: %s (sigma^2 %.6g, U %.6g, R %.6g) vs %s "
            "(sigma^2 %.6g, U %.6g, R %.6g)",
            key.first, key.second, std::string(MethodName(lo.method)), lo.sigma_k_sq,
            lo.utility_lb, lo.rate_ub_bits, std::string(MethodName(hi.method)),
            hi.sigma_k_sq, hi.utility_lb, hi.rate_ub_bits));
      }
    }
  }
  result.passed = compared > 0 && violations == 0;
  result.summary = absl::StrFormat(
      "%d grid points with all four methods valid, %d ordering violations",
      compared, violations);
  return result;
}

CheckResult CheckAc1Inversion() {
  const SweepConfig study = DefaultStudy();
  double worst = 0.0;
  int points = 0;
  CheckResult result{"ac1 inversion", false, "", {}};
  for (int64_t rounds : study.rounds) {
    for (double epsilon : study.epsilons) {
      const PrivacyBudget budget{epsilon, study.delta};
      absl::StatusOr<Ac1PerRound> per_round =
          SolveAc1PerRound(budget, rounds, study.ac1_delta_tilde);
      if (!per_round.ok()) {
        return Fail(result.name,
                    absl::StrCat("solve failed at eps=", epsilon, " T=",
                                 rounds, ": ", per_round.status().message()));
      }
      const PrivacyBudget back =
          ComposeAc1(*per_round, rounds, study.ac1_delta_tilde);
      const double error = std::max(RelativeError(back.epsilon, epsilon),
                                    RelativeError(back.delta, study.delta));
      worst = std::max(worst, error);
      ++points;
    }
  }
  result.passed = worst <= 1e-9;
  result.summary = absl::StrFormat(
      "%d grid points, worst relative recomposition error %.3g", points, worst);
  return result;
}

CheckResult CheckRdpOracle() {
  const double qs[] = {1e-2, 1e-3, 1e-4};
  CheckResult result{"rdp oracle", true, "", {}};
  int cells = 0;
  int factor_failures = 0;
  int monotone_failures = 0;
  for (double sigma : {1.0, 2.0, 4.0}) {
    for (int alpha = 2; alpha <= 8; ++alpha) {
      std::vector<std::pair<double, double>> ratios;
      for (double q : qs) {
        if (!(q * 16.0 * sigma < 1.0)) continue;
        absl::StatusOr<double> ratio = RdpOracleRatio(q, sigma, alpha);
        if (!ratio.ok()) {
          return Fail(result.name, absl::StrCat("sigma=", sigma, " alpha=",
                                                alpha, " q=", q, ": ",
                                                ratio.status().message()));
        }
        ratios.emplace_back(q, *ratio);
      }
      ++cells;
      bool factor_ok = true;
      bool monotone_ok = true;
      std::string line = absl::StrFormat("sigma=%g alpha=%d ratios", sigma,
                                         alpha);
      for (size_t i = 0; i < ratios.size(); ++i) {
        const auto [q, ratio] = ratios[i];
        absl::StrAppendFormat(&line, " q=%g:%.6g", q, ratio);
        if (q == 1e-3 && !(ratio >= 0.5 && ratio <= 2.0)) factor_ok = false;
        if (i > 0 &&
            std::abs(ratio - 1.0) > std::abs(ratios[i - 1].second - 1.0)) {
          monotone_ok = false;
        }
      }
      if (!factor_ok) ++factor_failures;
      if (!monotone_ok) ++monotone_failures;
      if (!factor_ok || !monotone_ok) {
        absl::StrAppend(&line, factor_ok ? "" : " [outside factor 2]",
                        monotone_ok ? "" : " [not monotone toward 1]");
        result.details.push_back(std::move(line));
      }
    }
  }
  result.passed = factor_failures == 0 && monotone_failures == 0;
  result.summary = absl::StrFormat(
      "%d (sigma, alpha) cells: %d outside factor 2 at q=1e-3, %d not "
      "monotone toward 1",
      cells, factor_failures, monotone_failures);
  return result;
}

absl::StatusOr<double> PilotGradBound(const SimConfig& cfg,
                                      const QuadraticProblem& problem,
                                      double margin) {
  SimConfig pilot = cfg;
  std::fill(pilot.sigma.begin(), pilot.sigma.end(), 0.0);
  pilot.repetitions = 1;
  pilot.enforce_grad_bound = false;
  absl::StatusOr<SimResult> run = RunSimulation(pilot, problem);
  if (!run.ok()) return run.status();
  return margin * run->realized_grad_norm_max;
}

CheckResult CheckSimulationBound(const SimBoundOptions& options) {
  const std::string name = "simulation vs utility bound";
  SimConfig base = HomogeneousConfig(options.users, options.dim,
                                     options.per_user_data, options.q, 0.0);
  base.clip = options.clip;
  base.rounds = options.rounds;
  base.grad_bound = options.pilot_grad_bound;
  base.seed = options.seed;
  base.threads = options.threads;
  absl::StatusOr<QuadraticProblem> problem =
      MakeQuadraticProblem(base, options.seed);
  if (!problem.ok()) return Fail(name, std::string(problem.status().message()));
  absl::StatusOr<double> grad_bound =
      PilotGradBound(base, *problem, options.pilot_margin);
  if (!grad_bound.ok()) {
    return Fail(name, std::string(grad_bound.status().message()));
  }

  CheckResult result{name, true, "", {}};
  std::string summary = absl::StrFormat("G=%.6g", *grad_bound);
  for (double sigma : options.sigmas) {
    SimConfig cfg = base;
    std::fill(cfg.sigma.begin(), cfg.sigma.end(), sigma);
    cfg.grad_bound = std::max(*grad_bound, cfg.clip);
    cfg.repetitions = options.repetitions;
    cfg.enforce_grad_bound = false;
    absl::StatusOr<SimResult> run = RunSimulation(cfg, *problem);
    if (!run.ok()) return Fail(name, std::string(run.status().message()));

    std::vector<UserSpec> users(cfg.users);
    for (int64_t k = 0; k < cfg.users; ++k) {
      users[k] = UserSpec{cfg.per_user_data[k], cfg.q[k], cfg.sigma[k], {}};
    }
    const double sigma_agg_sq = AggregateSigmaSq(users).value_or(0.0);
    const LossRegularity reg{cfg.mu, cfg.lambda, cfg.grad_bound, cfg.clip,
                             cfg.dim};
    const double bound = UtilityLowerBound(cfg.rounds, reg, sigma_agg_sq);

    int64_t meets = 0;
    for (const std::vector<double>& gaps : run->loss_gap_by_repetition) {
      if (1.0 / gaps.back() >= bound) ++meets;
    }
    const double fraction =
        static_cast<double>(meets) / static_cast<double>(cfg.repetitions);

    const double a1 =
        2.0 * std::max(2.0, 1.0 + static_cast<double>(cfg.dim) * sigma_agg_sq);
    const double scale =
        cfg.grad_bound * cfg.grad_bound / (cfg.lambda * cfg.lambda);
    int64_t mse_violations = 0;
    double tightest = -INFINITY;
    for (size_t i = 0; i < run->mean_mse.size(); ++i) {
      const double t = static_cast<double>(i + 1);
      const double limit = a1 * scale / t + 3.0 * run->stderr_mse[i];
      tightest = std::max(tightest, run->mean_mse[i] / limit);
      if (run->mean_mse[i] > limit) ++mse_violations;
    }

    const bool ok = fraction >= 0.95 && mse_violations == 0;
    result.passed = result.passed && ok;
    absl::StrAppendFormat(
        &summary, "; sigma=%g: %.0f%% runs >= bound %.6g, mse violations %d",
        sigma, 100.0 * fraction, bound, mse_violations);
    result.details.push_back(absl::StrFormat(
        "sigma=%g sigma_agg^2=%.6g bound=%.6g mean_utility=%.6g "
        "runs_meeting=%d/%d mse_max_ratio=%.4g grad_norm_max=%.6g "
        "grad_bound_violations=%d",
        sigma, sigma_agg_sq, bound, run->empirical_utility, meets,
        cfg.repetitions, tightest, run->realized_grad_norm_max,
        run->grad_bound_violations));
  }
  result.summary = std::move(summary);
  return result;
}

CheckResult CheckAggregationIdentity(uint64_t seed) {
  constexpr int kInstances = 100;
  double worst = 0.0;
  int redrawn = 0;
  for (int instance = 0, attempt = 0; instance < kInstances; ++attempt) {
    Rng rng = MakeStream(seed, static_cast<uint64_t>(instance),
                         static_cast<uint64_t>(attempt), 0);
    std::uniform_int_distribution<int64_t> users_dist(1, 8);
    std::uniform_int_distribution<int64_t> dim_dist(1, 24);
    std::uniform_int_distribution<int64_t> size_dist(5, 60);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> q_dist(0.05, 0.9);
    const int64_t users = users_dist(rng);
    const int64_t dim = dim_dist(rng);

    std::vector<double> curvature(dim);
    for (double& h : curvature) h = 0.5 + std::abs(unit(rng)) * 3.0;
    std::vector<double> w(dim);
    for (double& v : w) v = 3.0 * unit(rng);

    std::vector<double> weighted(dim, 0.0);
    std::vector<double> pooled_rows;
    std::vector<double> grad(dim);
    int64_t total = 0;
    std::vector<std::pair<Dataset, std::vector<uint32_t>>> parts;
    for (int64_t k = 0; k < users; ++k) {
      Dataset data{.dim = dim, .points = {}, .center = {}, .radius = 0.0};
      const int64_t size = size_dist(rng);
      for (int64_t n = 0; n < size * dim; ++n) {
        data.points.push_back(5.0 * unit(rng));
      }
      std::vector<uint32_t> sample = PoissonSample(size, q_dist(rng), rng);
      for (uint32_t i : sample) {
        const auto row = data.Row(i);
        pooled_rows.insert(pooled_rows.end(), row.begin(), row.end());
      }
      total += static_cast<int64_t>(sample.size());
      parts.emplace_back(std::move(data), std::move(sample));
    }
    // Without any sampled point there is no pooled gradient to compare.
    if (total == 0) {
      ++redrawn;
      continue;
    }
    for (const auto& [data, sample] : parts) {
      if (sample.empty()) continue;
      LocalGradient(w, data, sample, curvature, grad);
      kernels::Axpy(static_cast<double>(sample.size()) /
                        static_cast<double>(total),
                    grad, weighted);
    }
    Dataset pooled{.dim = dim, .points = pooled_rows, .center = {},
                   .radius = 0.0};
    std::vector<uint32_t> all(total);
    for (int64_t i = 0; i < total; ++i) all[i] = static_cast<uint32_t>(i);
    std::vector<double> reference(dim);
    LocalGradient(w, pooled, all, curvature, reference);

    std::vector<double> diff = weighted;
    kernels::Axpy(-1.0, reference, diff);
    const double norm = std::sqrt(kernels::SquaredNorm(reference));
    const double error = std::sqrt(kernels::SquaredNorm(diff)) /
                         std::max(norm, std::numeric_limits<double>::min());
    worst = std::max(worst, error);
    ++instance;
    attempt = -1;
  }
  return CheckResult{
      "aggregation identity", worst <= 1e-10,
      absl::StrFormat("%d instances (%d redrawn with no samples), worst "
                      "relative error %.3g",
                      kInstances, redrawn, worst),
      {}};
}

CheckResult CheckNoiseAggregation(uint64_t seed) {
  constexpr int64_t kDraws = 100000;
  constexpr int64_t kUsers = 5;
  constexpr int64_t kDataSize = 200;
  constexpr int64_t kDim = 10;
  constexpr double kQ = 0.5;
  constexpr double kSigma = 1.5;
  constexpr double kClip = 1.0;

  const std::vector<UserSpec> users(kUsers,
                                    UserSpec{kDataSize, kQ, kSigma, {}});
  const double expected = kClip * kClip * AggregateSigmaSq(users).value();

  std::vector<double> sum(kDim, 0.0);
  std::vector<double> sum_sq(kDim, 0.0);
  std::vector<double> z(kDim);
  std::vector<double> aggregate(kDim);
  int64_t used = 0;
  for (int64_t draw = 0; draw < kDraws; ++draw) {
    std::fill(aggregate.begin(), aggregate.end(), 0.0);
    int64_t total = 0;
    std::vector<std::pair<int64_t, std::vector<double>>> noise;
    for (int64_t k = 0; k < kUsers; ++k) {
      Rng rng = MakeStream(seed, static_cast<uint64_t>(draw),
                           static_cast<uint64_t>(k), 0);
      const int64_t count =
          static_cast<int64_t>(PoissonSample(kDataSize, kQ, rng).size());
      std::fill(z.begin(), z.end(), 0.0);
      Perturb(z, kClip, kSigma, rng);
      total += count;
      noise.emplace_back(count, z);
    }
    if (total == 0) continue;
    for (const auto& [count, zk] : noise) {
      kernels::Axpy(static_cast<double>(count) / static_cast<double>(total),
                    zk, aggregate);
    }
    for (int64_t i = 0; i < kDim; ++i) {
      sum[i] += aggregate[i];
      sum_sq[i] += aggregate[i] * aggregate[i];
    }
    ++used;
  }
  double worst = 0.0;
  for (int64_t i = 0; i < kDim; ++i) {
    const double n = static_cast<double>(used);
    const double mean = sum[i] / n;
    const double variance = (sum_sq[i] - n * mean * mean) / (n - 1.0);
    worst = std::max(worst, RelativeError(variance, expected));
  }
  return CheckResult{
      "noise aggregation", worst <= 0.05,
      absl::StrFormat("%d draws, C^2 sigma_agg^2 = %.6g, worst per-dimension "
                      "relative deviation %.3g",
                      used, expected, worst),
      {}};
}

CheckResult CheckReferenceOrdering() {
  const std::string name = "reference ordering";
  absl::StatusOr<std::vector<TradeoffPoint>> rows = Sweep(DefaultStudy());
  if (!rows.ok()) return Fail(name, std::string(rows.status().message()));
  const std::vector<ReferenceComparison> comparisons =
      CompareWithReference(*rows);
  CheckResult result{name, ReferenceOrderingReproduced(comparisons), "", {}};
  for (const ReferenceComparison& c : comparisons) {
    result.details.push_back(absl::StrFormat(
        "%s: utility reference %.6g computed %s; rate reference %.6g "
        "computed %s",
        std::string(MethodName(c.method)), c.reference_utility,
        c.computed_utility ? absl::StrFormat("%.6g", *c.computed_utility)
                           : "n/a",
        c.reference_rate_bits,
        c.computed_rate_bits ? absl::StrFormat("%.6g", *c.computed_rate_bits)
                             : "n/a"));
  }
  result.summary = result.passed
                       ? "computed values reproduce the reference ordering"
                       : "computed values do not reproduce the reference "
                         "ordering";
  return result;
}

}  // namespace ldpfl
