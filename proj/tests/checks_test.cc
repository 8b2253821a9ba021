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

#include <cmath>

#include "gtest/gtest.h"
#include "ldpfl/accountants.h"

namespace ldpfl {
namespace {

TEST(ChecksTest, AnalyticCriteriaPass) {
  for (const CheckResult& r :
       {CheckValidityCapExact(), CheckUtilityCaps(), CheckAccountantOrdering(),
        CheckAc1Inversion(), CheckAggregationIdentity(),
        CheckReferenceOrdering()}) {
    EXPECT_TRUE(r.passed) << r.name << ": " << r.summary;
    EXPECT_FALSE(r.name.empty());
  }
}

TEST(ChecksTest, OrderingCheckCatchesSignFlippedAccountant) {
  // Flipping the sign of the correction term pushes the proposed noise above
  // the moments accountant.
  const Calibrator mutant =
      [](const CalibrationRequest& req) -> absl::StatusOr<CalibrationResult> {
    if (req.method != Method::kProposed) return Calibrate(req);
    absl::StatusOr<CalibrationResult> ma = NoiseMa(req);
    absl::StatusOr<CalibrationResult> prop = NoiseProposed(req);
    if (!ma.ok()) return ma;
    if (!prop.ok()) return prop;
    CalibrationResult r = *prop;
    r.sigma_sq = 2.0 * ma->sigma_sq - prop->sigma_sq;
    return r;
  };
  const CheckResult r = CheckAccountantOrdering(mutant);
  EXPECT_FALSE(r.passed) << r.summary;
}

TEST(ChecksTest, NoiseAggregationWithinTolerance) {
  const CheckResult r = CheckNoiseAggregation();
  EXPECT_TRUE(r.passed) << r.summary;
}

TEST(ChecksTest, ReducedSimulationBound) {
  SimBoundOptions options;
  options.rounds = 500;
  options.repetitions = 10;
  const CheckResult r = CheckSimulationBound(options);
  EXPECT_TRUE(r.passed) << r.summary;
}

TEST(ChecksTest, PilotGradientBoundIsPositive) {
  SimConfig cfg = HomogeneousConfig(3, 4, 50, 0.2, 0.0);
  cfg.grad_bound = 2.0;
  cfg.rounds = 100;
  const QuadraticProblem problem = *MakeQuadraticProblem(cfg, 1);
  absl::StatusOr<double> g = PilotGradBound(cfg, problem, 1.5);
  ASSERT_TRUE(g.ok());
  EXPECT_GT(*g, 0.0);
  EXPECT_LE(*g, 1.5 * 2.0);
}

}  // namespace
}  // namespace ldpfl
