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

// AArch64 NEON kernels. Two float64x2 registers hold lanes {0,1} and {2,3}.

#include "ldpfl/kernels.h"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace ldpfl::kernels {
namespace {

inline double FoldLanes(float64x2_t lanes01, float64x2_t lanes23) {
  const float64x2_t pair = vaddq_f64(lanes01, lanes23);
  return vgetq_lane_f64(pair, 0) + vgetq_lane_f64(pair, 1);
}

double DotNeon(const double* a, const double* b, size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc23 = vaddq_f64(acc23,
                      vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double sum = FoldLanes(acc01, acc23);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

double WeightedSquaredDistanceNeon(const double* h, const double* a,
                                   const double* b, size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d01 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const float64x2_t d23 =
        vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(h + i), vmulq_f64(d01, d01)));
    acc23 = vaddq_f64(acc23,
                      vmulq_f64(vld1q_f64(h + i + 2), vmulq_f64(d23, d23)));
  }
  double sum = FoldLanes(acc01, acc23);
  for (; i < n; ++i) {
    const double diff = a[i] - b[i];
    sum += h[i] * (diff * diff);
  }
  return sum;
}

void AxpyNeon(double alpha, const double* x, double* y, size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void ScaleNeon(double alpha, double* x, size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

void AccumulateRowsNeon(const double* rows, size_t dim, const uint32_t* idx,
                        size_t count, double* acc) {
  for (size_t r = 0; r < count; ++r) {
    const double* row = rows + static_cast<size_t>(idx[r]) * dim;
    size_t j = 0;
    for (; j + 2 <= dim; j += 2) {
      vst1q_f64(acc + j, vaddq_f64(vld1q_f64(acc + j), vld1q_f64(row + j)));
    }
    for (; j < dim; ++j) acc[j] += row[j];
  }
}

void HadamardDifferenceNeon(const double* h, const double* w, const double* m,
                            double* out, size_t n) {
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t diff = vsubq_f64(vld1q_f64(w + i), vld1q_f64(m + i));
    vst1q_f64(out + i, vmulq_f64(vld1q_f64(h + i), diff));
  }
  for (; i < n; ++i) out[i] = h[i] * (w[i] - m[i]);
}

constexpr KernelTable kNeonTable = {
    .isa = Isa::kNeon,
    .dot = DotNeon,
    .weighted_squared_distance = WeightedSquaredDistanceNeon,
    .axpy = AxpyNeon,
    .scale = ScaleNeon,
    .accumulate_rows = AccumulateRowsNeon,
    .hadamard_difference = HadamardDifferenceNeon,
};

}  // namespace

namespace internal {
const KernelTable* NeonKernels() { return &kNeonTable; }
}  // namespace internal

}  // namespace ldpfl::kernels

#else

namespace ldpfl::kernels::internal {
const KernelTable* NeonKernels() { return nullptr; }
}  // namespace ldpfl::kernels::internal

#endif
