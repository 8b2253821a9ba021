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

#include "ldpfl/privacy_core.h"

#include <cmath>
#include <limits>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace ldpfl {
namespace {

using ::testing::DoubleNear;

constexpr double kE = 2.718281828459045;

TEST(ValidateBudgetTest, AcceptsInteriorAndRejectsBoundary) {
  EXPECT_TRUE(ValidateBudget({0.3, 1e-4}).ok());
  EXPECT_EQ(ValidateBudget({0.0, 1e-4}).code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(ValidateBudget({0.3, 0.0}).code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(ValidateBudget({0.3, 1.0}).code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(
      ValidateBudget({std::numeric_limits<double>::quiet_NaN(), 1e-4}).ok());
}

TEST(ValidateMechanismTest, ChecksEveryField) {
  EXPECT_TRUE(ValidateMechanism({1e-3, 2.0, 1.0, 10}).ok());
  EXPECT_FALSE(ValidateMechanism({0.0, 2.0, 1.0, 10}).ok());
  EXPECT_FALSE(ValidateMechanism({1.0, 2.0, 1.0, 10}).ok());
  EXPECT_FALSE(ValidateMechanism({1e-3, 0.0, 1.0, 10}).ok());
  EXPECT_FALSE(ValidateMechanism({1e-3, 2.0, 0.0, 10}).ok());
  EXPECT_FALSE(ValidateMechanism({1e-3, 2.0, 1.0, 0}).ok());
}

TEST(RdpCostTest, MatchesHighPrecisionValues) {
  absl::StatusOr<RdpCost> a = RdpCostSubsampledGaussian(1e-3, 1.0, 2.0);
  ASSERT_TRUE(a.ok());
  EXPECT_DOUBLE_EQ(a->alpha, 2.0);
  EXPECT_NEAR(a->gamma, 6.006006006006006e-6, 1e-19);

  absl::StatusOr<RdpCost> b = RdpCostSubsampledGaussian(1e-2, 4.0, 3.0);
  ASSERT_TRUE(b.ok());
  EXPECT_NEAR(b->gamma, 5.0505050505050505e-5, 1e-18);
}

TEST(RdpCostTest, VanishesAsSamplingVanishes) {
  double previous = std::numeric_limits<double>::infinity();
  for (double q : {1e-3, 1e-5, 1e-7, 1e-9}) {
    absl::StatusOr<RdpCost> c = RdpCostSubsampledGaussian(q, 1.0, 5.0);
    ASSERT_TRUE(c.ok());
    EXPECT_LT(c->gamma, previous);
    previous = c->gamma;
  }
  EXPECT_LT(previous, 1e-15);
}

TEST(RdpCostTest, RejectsOutsideValidityRegion) {
  EXPECT_EQ(RdpCostSubsampledGaussian(1.0 / 16.0, 1.0, 2.0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(RdpCostSubsampledGaussian(1e-3, 0.5, 2.0).ok());
  EXPECT_FALSE(RdpCostSubsampledGaussian(1e-3, 1.0, 1.0).ok());
  EXPECT_FALSE(RdpCostSubsampledGaussian(0.0, 1.0, 2.0).ok());
}

TEST(RdpCostTest, MonotoneInAlphaQAndSigma) {
  for (double sigma : {1.0, 2.0, 4.0}) {
    for (double q : {1e-4, 1e-3, 1e-2}) {
      if (q * 16 * sigma >= 1) continue;
      double last = -1.0;
      for (double alpha = 1.5; alpha < 100; alpha *= 1.7) {
        const double g = RdpCostSubsampledGaussian(q, sigma, alpha)->gamma;
        EXPECT_GT(g, last);
        last = g;
      }
      EXPECT_LT(RdpCostSubsampledGaussian(q, sigma, 3)->gamma,
                RdpCostSubsampledGaussian(q * 1.5, sigma, 3)->gamma);
      EXPECT_GT(RdpCostSubsampledGaussian(q, sigma, 3)->gamma,
                RdpCostSubsampledGaussian(q, sigma * 1.1, 3)->gamma);
    }
  }
}

TEST(ComposeRdpTest, IdentityAndLinearity) {
  const RdpCost c{2.0, 1e-6};
  EXPECT_EQ(ComposeRdp(c, 1).gamma, 1e-6);
  EXPECT_EQ(ComposeRdp(c, 1).alpha, 2.0);
  EXPECT_NEAR(ComposeRdp(c, 70000).gamma, 0.07, 1e-15);
  EXPECT_EQ(ComposeRdp(c, 70000).alpha, 2.0);
  EXPECT_EQ(ComposeRdp(c, 0).gamma, 0.0);
}

TEST(ComposeRdpTest, AdditiveToFourUlp) {
  for (double gamma : {1e-6, 3.3e-5, 0.1234567}) {
    const RdpCost c{3.0, gamma};
    for (int64_t a : {1, 7, 1000, 70000}) {
      for (int64_t b : {2, 13, 630000}) {
        const double whole = ComposeRdp(c, a + b).gamma;
        const double parts = ComposeRdp(c, a).gamma + ComposeRdp(c, b).gamma;
        EXPECT_LE(std::abs(whole - parts),
                  4 * std::numeric_limits<double>::epsilon() * whole);
      }
    }
  }
}

TEST(RdpToDpTest, ClassicConversion) {
  EXPECT_NEAR(*RdpToDp({2.0, 0.0}, 1.0 / kE), 1.0, 1e-15);
  EXPECT_NEAR(*RdpToDp({11.0, 0.5}, 1e-4), 0.5 + std::log(1e4) / 10.0,
              1e-15);
  EXPECT_NEAR(*RdpToDp({11.0, 0.5}, 1e-4), 1.4210340371976184, 1e-12);
  EXPECT_EQ(RdpToDp({2.0, 0.0}, 0.0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(RdpToDp({2.0, 0.0}, 1.0).ok());
}

TEST(RdpToDpTest, DecreasingInDeltaIncreasingInGamma) {
  double last = std::numeric_limits<double>::infinity();
  for (double delta : {1e-9, 1e-6, 1e-4, 1e-2, 0.5}) {
    const double eps = *RdpToDp({4.0, 0.2}, delta);
    EXPECT_LT(eps, last);
    last = eps;
  }
  EXPECT_LT(*RdpToDp({4.0, 0.2}, 1e-4), *RdpToDp({4.0, 0.3}, 1e-4));
}

TEST(OptimalAlphaTest, Values) {
  EXPECT_NEAR(OptimalAlpha({0.3, 1e-4}), 61.40226914650788, 1e-12);
  EXPECT_NEAR(OptimalAlpha({1.0, 1.0 / kE}), 2.0, 1e-15);
  const double delta = 1e-4;
  const double alpha = OptimalAlpha({2.0 * std::log(1.0 / delta), delta});
  EXPECT_NEAR(alpha, 1.0, 1e-15);
  EXPECT_FALSE(IsRdpOrder(1.0));
  EXPECT_TRUE(IsRdpOrder(1.0 + 1e-12));
}

TEST(CheckValidityTest, BoundaryIsStrict) {
  const ValidityReport r = CheckValidity({1e-3, 62.5, 1.0, 1}, {0.3, 1e-4});
  EXPECT_FALSE(r.q_ok);
  EXPECT_TRUE(r.sigma_ok);
  EXPECT_FALSE(r.overall);
  EXPECT_TRUE(CheckValidity({1e-3, 62.4, 1.0, 1}, {0.3, 1e-4}).q_ok);
}

TEST(CheckValidityTest, SigmaBelowOne) {
  EXPECT_FALSE(CheckValidity({1e-3, 0.5, 1.0, 1}, {0.3, 1e-4}).sigma_ok);
  EXPECT_TRUE(CheckValidity({1e-3, 1.0, 1.0, 1}, {0.3, 1e-4}).sigma_ok);
}

TEST(CheckValidityTest, EpsilonConditionEvaluatedDirectly) {
  // 2 ln(1e4) max(1e-4, 1/ln(1e3)) = 2.6666... exceeds 0.3.
  const ValidityReport r = CheckValidity({1e-3, 1.0, 1.0, 1}, {0.3, 1e-4});
  EXPECT_FALSE(r.epsilon_ok);
  EXPECT_TRUE(CheckValidity({1e-3, 1.0, 1.0, 1}, {2.67, 1e-4}).epsilon_ok);
  EXPECT_FALSE(CheckValidity({1e-3, 1.0, 1.0, 1}, {2.66, 1e-4}).epsilon_ok);
}

TEST(CheckValidityTest, OverallIsConjunction) {
  for (double q : {1e-4, 1e-3, 0.05}) {
    for (double sigma : {0.5, 1.0, 5.0, 70.0}) {
      for (double eps : {0.01, 0.3, 3.0}) {
        const ValidityReport r = CheckValidity({q, sigma, 1.0, 1}, {eps, 1e-4});
        EXPECT_EQ(r.overall, r.q_ok && r.sigma_ok && r.epsilon_ok);
      }
    }
  }
}

TEST(GaussianDpSingleRoundTest, MatchesBisectionOracle) {
  absl::StatusOr<double> eps = GaussianDpSingleRound(2.0, 2.0, 1e-4);
  ASSERT_TRUE(eps.ok());
  EXPECT_NEAR(*eps, 3.804435909337386, 1e-9);
}

TEST(GaussianDpSingleRoundTest, ZeroSensitivityIsFree) {
  EXPECT_EQ(*GaussianDpSingleRound(0.0, 1.0, 1e-5), 0.0);
}

TEST(GaussianDpSingleRoundTest, StrictlyDecreasingInNoise) {
  double last = std::numeric_limits<double>::infinity();
  for (double s : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double eps = *GaussianDpSingleRound(1.0, s, 1e-5);
    EXPECT_LT(eps, last);
    last = eps;
  }
}

TEST(GaussianDpSingleRoundTest, RejectsInvalidArguments) {
  EXPECT_FALSE(GaussianDpSingleRound(-1.0, 1.0, 1e-5).ok());
  EXPECT_FALSE(GaussianDpSingleRound(1.0, 0.0, 1e-5).ok());
  EXPECT_FALSE(GaussianDpSingleRound(1.0, 1.0, 0.0).ok());
}

}  // namespace
}  // namespace ldpfl
