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

#ifndef LDPFL_RDP_ORACLE_H_
#define LDPFL_RDP_ORACLE_H_

#include "absl/status/statusor.h"

// Numerical reference for the Renyi cost of the subsampled Gaussian
// mechanism. With mu0 = N(0, sigma^2) and mu1 = N(2, sigma^2) (sensitivity 2C
// at C = 1) and mu = (1 - q) mu0 + q mu1, the log-moment of order alpha is
//   max{ log E_{mu0}[(mu0/mu)^alpha], log E_{mu}[(mu/mu0)^alpha] },
// which the closed-form cost bounds by alpha * gamma(alpha).
namespace ldpfl {

struct LogMomentParts {
  // log E_{mu0}[(mu0/mu)^alpha]
  double toward_base = 0.0;
  // log E_{mu}[(mu/mu0)^alpha]
  double toward_mixture = 0.0;
  double value() const {
    return toward_base > toward_mixture ? toward_base : toward_mixture;
  }
};

// Adaptive Gauss-Kronrod integration on a finite range that covers the
// Gaussian mass and the tilted peak of both integrands. Requires q in (0, 1),
// sigma > 0 and alpha >= 1.
absl::StatusOr<LogMomentParts> SubsampledGaussianLogMoment(double q,
                                                           double sigma,
                                                           double alpha);

// Ratio of the integrated log-moment to alpha * gamma(alpha). Requires the
// closed-form validity region.
absl::StatusOr<double> RdpOracleRatio(double q, double sigma, double alpha);

}  // namespace ldpfl

#endif  // LDPFL_RDP_ORACLE_H_
