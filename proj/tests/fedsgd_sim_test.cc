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

#include <cmath>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace ldpfl {
namespace {

using ::testing::HasSubstr;

SimConfig SmallConfig(double sigma) {
  SimConfig cfg = HomogeneousConfig(3, 5, 100, 0.2, sigma);
  cfg.rounds = 400;
  cfg.grad_bound = 2.0;
  cfg.seed = 99;
  cfg.repetitions = 6;
  cfg.enforce_grad_bound = false;
  return cfg;
}

double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

TEST(MakeStreamTest, SameKeySameStreamDifferentKeysDiffer) {
  EXPECT_EQ(MakeStream(1, 2, 3, 4)(), MakeStream(1, 2, 3, 4)());
  const uint64_t base = MakeStream(1, 2, 3, 4)();
  EXPECT_NE(MakeStream(0, 2, 3, 4)(), base);
  EXPECT_NE(MakeStream(1, 0, 3, 4)(), base);
  EXPECT_NE(MakeStream(1, 2, 0, 4)(), base);
  EXPECT_NE(MakeStream(1, 2, 3, 0)(), base);
  EXPECT_NE(MakeStream(1, 2, 4, 3)(), base);
}

TEST(MakeQuadraticProblemTest, PointsLieInsideTheBall) {
  SimConfig cfg = SmallConfig(0.0);
  cfg.grad_bound = 3.0;
  absl::StatusOr<QuadraticProblem> problem = MakeQuadraticProblem(cfg, 5);
  ASSERT_TRUE(problem.ok());
  ASSERT_EQ(problem->users.size(), 3u);
  for (const Dataset& data : problem->users) {
    ASSERT_EQ(data.size(), 100);
    EXPECT_DOUBLE_EQ(data.radius, 1.5);
    for (int64_t r = 0; r < data.size(); ++r) {
      std::vector<double> diff(data.Row(r).begin(), data.Row(r).end());
      diff[0] -= 1.5;
      EXPECT_LE(Norm(diff), 1.5 + 1e-12);
      EXPECT_LE(Norm(data.Row(r)), 3.0 + 1e-12);
    }
  }
}

TEST(MakeQuadraticProblemTest, DeterministicInSeed) {
  const SimConfig cfg = SmallConfig(0.0);
  EXPECT_EQ(MakeQuadraticProblem(cfg, 5)->users[1].points,
            MakeQuadraticProblem(cfg, 5)->users[1].points);
  EXPECT_NE(MakeQuadraticProblem(cfg, 5)->users[1].points,
            MakeQuadraticProblem(cfg, 6)->users[1].points);
}

TEST(QuadraticProblemTest, OptimumIsPooledMeanAndStationary) {
  SimConfig cfg = SmallConfig(0.0);
  cfg.mu = 3.0;
  const QuadraticProblem problem = *MakeQuadraticProblem(cfg, 1);
  std::vector<double> mean(cfg.dim, 0.0);
  for (const Dataset& data : problem.users) {
    for (int64_t r = 0; r < data.size(); ++r) {
      for (int64_t i = 0; i < cfg.dim; ++i) mean[i] += data.Row(r)[i];
    }
  }
  for (double& m : mean) m /= 300.0;
  for (int64_t i = 0; i < cfg.dim; ++i) {
    EXPECT_NEAR(problem.optimum[i], mean[i], 1e-14);
  }
  EXPECT_DOUBLE_EQ(problem.curvature.front(), 1.0);
  EXPECT_DOUBLE_EQ(problem.curvature.back(), 3.0);

  std::vector<double> grad(cfg.dim, 0.0);
  for (const Dataset& data : problem.users) {
    std::vector<uint32_t> all(data.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<uint32_t>(i);
    std::vector<double> g(cfg.dim);
    LocalGradient(problem.optimum, data, all, problem.curvature, g);
    for (int64_t i = 0; i < cfg.dim; ++i) grad[i] += g[i] / 3.0;
  }
  EXPECT_LE(Norm(grad), 1e-10);
}

TEST(QuadraticProblemTest, LossGapMatchesPooledLossDifference) {
  SimConfig cfg = SmallConfig(0.0);
  cfg.mu = 2.0;
  const QuadraticProblem problem = *MakeQuadraticProblem(cfg, 2);
  const std::vector<double> w = {0.3, -0.2, 0.1, 0.5, -0.4};
  EXPECT_NEAR(problem.LossGap(w),
              problem.PooledLoss(w) - problem.PooledLoss(problem.optimum),
              1e-12);
  EXPECT_EQ(problem.LossGap(problem.optimum), 0.0);
}

TEST(LocalGradientTest, MatchesFiniteDifferences) {
  SimConfig cfg = SmallConfig(0.0);
  cfg.mu = 4.0;
  const QuadraticProblem problem = *MakeQuadraticProblem(cfg, 3);
  const Dataset& data = problem.users[0];
  const std::vector<uint32_t> sample = {2, 7, 7, 40};
  auto loss = [&](const std::vector<double>& w) {
    double total = 0.0;
    for (uint32_t j : sample) {
      for (int64_t i = 0; i < cfg.dim; ++i) {
        const double d = w[i] - data.Row(j)[i];
        total += 0.5 * problem.curvature[i] * d * d;
      }
    }
    return total / static_cast<double>(sample.size());
  };
  const std::vector<double> w = {0.1, 0.2, -0.3, 0.4, 0.0};
  std::vector<double> g(cfg.dim);
  LocalGradient(w, data, sample, problem.curvature, g);
  const double h = 1e-6;
  for (int64_t i = 0; i < cfg.dim; ++i) {
    std::vector<double> up = w, down = w;
    up[i] += h;
    down[i] -= h;
    EXPECT_NEAR(g[i], (loss(up) - loss(down)) / (2 * h), 1e-7);
  }
}

TEST(ClipGradientTest, ScalesOnlyLongVectors) {
  std::vector<double> g = {3.0, 4.0};
  EXPECT_DOUBLE_EQ(ClipGradient(g, 1.0), 5.0);
  EXPECT_NEAR(Norm(g), 1.0, 1e-15);
  EXPECT_NEAR(g[0], 0.6, 1e-15);

  std::vector<double> s = {0.3, 0.4};
  EXPECT_DOUBLE_EQ(ClipGradient(s, 1.0), 0.5);
  EXPECT_EQ(s, (std::vector<double>{0.3, 0.4}));

  std::vector<double> z = {0.0, 0.0};
  EXPECT_EQ(ClipGradient(z, 1.0), 0.0);
  EXPECT_EQ(z, (std::vector<double>{0.0, 0.0}));
}

TEST(ClipGradientTest, ClippedVectorsDifferByAtMostTwiceTheClip) {
  std::vector<double> a = {10.0, 0.0};
  std::vector<double> b = {-7.0, 0.0};
  ClipGradient(a, 1.5);
  ClipGradient(b, 1.5);
  EXPECT_NEAR(std::abs(a[0] - b[0]), 3.0, 1e-15);
}

TEST(PoissonSampleTest, SortedUniqueAndUnbiased) {
  Rng rng = MakeStream(1, 0, 0, 0);
  const int draws = 20000;
  double total = 0.0;
  int empty = 0;
  for (int i = 0; i < draws; ++i) {
    const std::vector<uint32_t> s = PoissonSample(5, 0.1, rng);
    for (size_t j = 1; j < s.size(); ++j) ASSERT_LT(s[j - 1], s[j]);
    for (uint32_t v : s) ASSERT_LT(v, 5u);
    total += static_cast<double>(s.size());
    empty += s.empty();
  }
  EXPECT_NEAR(total / draws, 0.5, 0.02);
  EXPECT_NEAR(static_cast<double>(empty) / draws, std::pow(0.9, 5), 0.015);
}

TEST(PoissonSampleTest, InclusionFrequencyIsUniformAcrossIndices) {
  Rng rng = MakeStream(2, 0, 0, 0);
  std::vector<int> hits(20, 0);
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    for (uint32_t v : PoissonSample(20, 0.3, rng)) ++hits[v];
  }
  for (int h : hits) EXPECT_NEAR(static_cast<double>(h) / draws, 0.3, 0.015);
}

TEST(PerturbTest, ZeroSigmaLeavesInputAndVarianceScales) {
  Rng rng = MakeStream(3, 0, 0, 0);
  std::vector<double> g = {1.0, 2.0};
  Perturb(g, 2.0, 0.0, rng);
  EXPECT_EQ(g, (std::vector<double>{1.0, 2.0}));

  std::vector<double> big(200000, 0.0);
  Perturb(big, 2.0, 1.5, rng);
  double ss = 0.0;
  for (double v : big) ss += v * v;
  EXPECT_NEAR(ss / static_cast<double>(big.size()), 9.0, 0.1);
}

TEST(RunRoundTest, ClosedFormStepHitsOptimum) {
  Dataset data{.dim = 2, .points = {0.3, 0.0}, .center = {0.0, 0.0},
               .radius = 1.0};
  const QuadraticProblem problem = MakeProblemFromData({data}, {1.0, 1.0});
  SimConfig cfg = HomogeneousConfig(1, 2, 1, 0.999999, 0.0);
  cfg.grad_bound = 1.0;
  SimState state;
  state.w = {0.0, 0.0};
  RunRound(state, problem, cfg, 1, 0);
  EXPECT_DOUBLE_EQ(state.w[0], 0.3);
  EXPECT_DOUBLE_EQ(state.w[1], 0.0);
  EXPECT_DOUBLE_EQ(state.max_grad_norm, 0.3);
  EXPECT_EQ(state.grad_bound_violations, 0);
}

TEST(RunRoundTest, StepSizeShrinksWithRound) {
  Dataset data{.dim = 1, .points = {2.0}, .center = {0.0}, .radius = 2.0};
  const QuadraticProblem problem = MakeProblemFromData({data}, {1.0});
  SimConfig cfg = HomogeneousConfig(1, 1, 1, 0.999999, 0.0);
  cfg.grad_bound = 4.0;
  cfg.clip = 1.0;
  SimState state;
  state.w = {0.0};
  RunRound(state, problem, cfg, 4, 0);
  // Clipped gradient -1, eta = G / (C lambda t) = 1.
  EXPECT_DOUBLE_EQ(state.w[0], 1.0);
}

TEST(RunRoundTest, EmptySamplesLeaveIterateUnchanged) {
  Dataset data{.dim = 1, .points = {2.0}, .center = {0.0}, .radius = 2.0};
  const QuadraticProblem problem = MakeProblemFromData({data}, {1.0});
  SimConfig cfg = HomogeneousConfig(1, 1, 1, 1e-12, 5.0);
  cfg.grad_bound = 4.0;
  SimState state;
  state.w = {0.25};
  for (int64_t t = 1; t <= 50; ++t) RunRound(state, problem, cfg, t, 0);
  EXPECT_EQ(state.w[0], 0.25);
  EXPECT_EQ(state.max_grad_norm, 0.0);
}

TEST(RunSimulationTest, DeterministicAcrossThreadCounts) {
  SimConfig cfg = SmallConfig(1.0);
  cfg.threads = 1;
  absl::StatusOr<SimResult> a = RunSimulation(cfg);
  cfg.threads = 4;
  absl::StatusOr<SimResult> b = RunSimulation(cfg);
  ASSERT_TRUE(a.ok());
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(a->mean_loss_gap, b->mean_loss_gap);
  EXPECT_EQ(a->mean_mse, b->mean_mse);
  EXPECT_EQ(a->stderr_mse, b->stderr_mse);
  EXPECT_EQ(a->grad_bound_violations, b->grad_bound_violations);
}

TEST(RunSimulationTest, TrajectoryShape) {
  const SimConfig cfg = SmallConfig(0.5);
  absl::StatusOr<SimResult> r = RunSimulation(cfg);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->mean_loss_gap.size(), 401u);
  EXPECT_EQ(r->loss_gap_by_repetition.size(), 6u);
  EXPECT_EQ(r->mse_by_repetition[0].size(), 401u);
  // Every repetition starts from w = 0.
  EXPECT_NEAR(r->stderr_loss_gap[0], 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(r->empirical_utility, 1.0 / r->mean_loss_gap.back());
}

TEST(RunSimulationTest, NoiselessRunMeetsConvergenceBound) {
  SimConfig cfg = SmallConfig(0.0);
  cfg.rounds = 2000;
  const absl::StatusOr<SimResult> r = RunSimulation(cfg);
  ASSERT_TRUE(r.ok());
  const double g = cfg.grad_bound;
  const double bound = 2.0 * cfg.mu * g * g /
                       (cfg.lambda * cfg.lambda * cfg.rounds);
  EXPECT_LE(r->mean_loss_gap.back(), bound);
  EXPECT_GE(r->empirical_utility, 1.0 / bound);
}

TEST(RunSimulationTest, NoiseHurtsMonotonically) {
  double last = 0.0;
  for (double sigma : {0.0, 1.0, 4.0}) {
    SimConfig cfg = SmallConfig(sigma);
    cfg.repetitions = 20;
    const double gap = RunSimulation(cfg)->mean_loss_gap.back();
    EXPECT_GT(gap, last) << "sigma=" << sigma;
    last = gap;
  }
}

TEST(RunSimulationTest, EnforcedGradientBoundFailsOnViolation) {
  SimConfig data_cfg = SmallConfig(0.0);
  data_cfg.grad_bound = 10.0;
  const QuadraticProblem problem = *MakeQuadraticProblem(data_cfg, 4);
  SimConfig cfg = SmallConfig(0.0);
  cfg.grad_bound = 1.0;
  cfg.enforce_grad_bound = true;
  absl::StatusOr<SimResult> r = RunSimulation(cfg, problem);
  EXPECT_EQ(r.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_THAT(std::string(r.status().message()), HasSubstr("grad_bound"));

  cfg.enforce_grad_bound = false;
  r = RunSimulation(cfg, problem);
  ASSERT_TRUE(r.ok());
  EXPECT_GT(r->grad_bound_violations, 0);
  EXPECT_GT(r->realized_grad_norm_max, 1.0);
}

TEST(RunSimulationTest, ShapeMismatchIsRejected) {
  const QuadraticProblem problem = *MakeQuadraticProblem(SmallConfig(0.0), 1);
  SimConfig cfg = SmallConfig(0.0);
  cfg.dim = 4;
  EXPECT_EQ(RunSimulation(cfg, problem).status().code(),
            absl::StatusCode::kInvalidArgument);
}

struct BadField {
  std::string field;
  void (*mutate)(SimConfig&);
};

class ValidateSimConfigTest : public ::testing::TestWithParam<BadField> {};

TEST_P(ValidateSimConfigTest, NamesTheField) {
  SimConfig cfg = SmallConfig(1.0);
  ASSERT_TRUE(ValidateSimConfig(cfg).ok());
  GetParam().mutate(cfg);
  const absl::Status s = ValidateSimConfig(cfg);
  EXPECT_EQ(s.code(), absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(std::string(s.message()), HasSubstr(GetParam().field + ":"));
}

INSTANTIATE_TEST_SUITE_P(
    Fields, ValidateSimConfigTest,
    ::testing::Values(
        BadField{"users", [](SimConfig& c) { c.users = 0; }},
        BadField{"dim", [](SimConfig& c) { c.dim = 0; }},
        BadField{"per_user_data",
                 [](SimConfig& c) { c.per_user_data.pop_back(); }},
        BadField{"per_user_data", [](SimConfig& c) { c.per_user_data[0] = 0; }},
        BadField{"q", [](SimConfig& c) { c.q[1] = 1.0; }},
        BadField{"sigma", [](SimConfig& c) { c.sigma[2] = -0.1; }},
        BadField{"sigma", [](SimConfig& c) { c.sigma[2] = INFINITY; }},
        BadField{"clip", [](SimConfig& c) { c.clip = 0.0; }},
        BadField{"grad_bound", [](SimConfig& c) { c.grad_bound = 0.5; }},
        BadField{"rounds", [](SimConfig& c) { c.rounds = 0; }},
        BadField{"lambda", [](SimConfig& c) { c.lambda = 0.0; }},
        BadField{"mu", [](SimConfig& c) { c.mu = 0.5; }},
        BadField{"repetitions", [](SimConfig& c) { c.repetitions = 0; }},
        BadField{"threads", [](SimConfig& c) { c.threads = -1; }}));

}  // namespace
}  // namespace ldpfl
