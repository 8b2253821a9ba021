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

// Reference kernels. The four-lane accumulation mirrors the SIMD variants so
// that all of them round identically.

#include "ldpfl/kernels.h"

namespace ldpfl::kernels {
namespace {

inline double FoldLanes(const double lane[4]) {
  return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

double DotScalar(const double* a, const double* b, size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (size_t l = 0; l < 4; ++l) lane[l] += a[i + l] * b[i + l];
  }
  double sum = FoldLanes(lane);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

double WeightedSquaredDistanceScalar(const double* h, const double* a,
                                     const double* b, size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (size_t l = 0; l < 4; ++l) {
      const double diff = a[i + l] - b[i + l];
      lane[l] += h[i + l] * (diff * diff);
    }
  }
  double sum = FoldLanes(lane);
  for (; i < n; ++i) {
    const double diff = a[i] - b[i];
    sum += h[i] * (diff * diff);
  }
  return sum;
}

void AxpyScalar(double alpha, const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void ScaleScalar(double alpha, double* x, size_t n) {
  for (size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void AccumulateRowsScalar(const double* rows, size_t dim, const uint32_t* idx,
                          size_t count, double* acc) {
  for (size_t r = 0; r < count; ++r) {
    const double* row = rows + static_cast<size_t>(idx[r]) * dim;
    for (size_t j = 0; j < dim; ++j) acc[j] += row[j];
  }
}

void HadamardDifferenceScalar(const double* h, const double* w,
                              const double* m, double* out, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = h[i] * (w[i] - m[i]);
}

constexpr KernelTable kScalarTable = {
    .isa = Isa::kScalar,
    .dot = DotScalar,
    .weighted_squared_distance = WeightedSquaredDistanceScalar,
    .axpy = AxpyScalar,
    .scale = ScaleScalar,
    .accumulate_rows = AccumulateRowsScalar,
    .hadamard_difference = HadamardDifferenceScalar,
};

}  // namespace

const KernelTable& ScalarKernels() { return kScalarTable; }

}  // namespace ldpfl::kernels
