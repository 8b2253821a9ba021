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

// AVX2 kernels. This translation unit is the only one built with -mavx2; it
// must not be entered unless the dispatcher has confirmed CPU support.

#include "ldpfl/kernels.h"

#if defined(__x86_64__) && defined(__AVX2__)

#include <immintrin.h>

namespace ldpfl::kernels {
namespace {

// (l0 + l2) + (l1 + l3), matching the scalar fold.
inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double DotAvx2(const double* a, const double* b, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod =
        _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, prod);
  }
  double sum = HorizontalSum(acc);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

double WeightedSquaredDistanceAvx2(const double* h, const double* a,
                                   const double* b, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d diff =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d term =
        _mm256_mul_pd(_mm256_loadu_pd(h + i), _mm256_mul_pd(diff, diff));
    acc = _mm256_add_pd(acc, term);
  }
  double sum = HorizontalSum(acc);
  for (; i < n; ++i) {
    const double diff = a[i] - b[i];
    sum += h[i] * (diff * diff);
  }
  return sum;
}

void AxpyAvx2(double alpha, const double* x, double* y, size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void ScaleAvx2(double alpha, double* x, size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

void AccumulateRowsAvx2(const double* rows, size_t dim, const uint32_t* idx,
                        size_t count, double* acc) {
  for (size_t r = 0; r < count; ++r) {
    const double* row = rows + static_cast<size_t>(idx[r]) * dim;
    size_t j = 0;
    for (; j + 4 <= dim; j += 4) {
      _mm256_storeu_pd(acc + j, _mm256_add_pd(_mm256_loadu_pd(acc + j),
                                              _mm256_loadu_pd(row + j)));
    }
    for (; j < dim; ++j) acc[j] += row[j];
  }
}

void HadamardDifferenceAvx2(const double* h, const double* w, const double* m,
                            double* out, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d diff =
        _mm256_sub_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(m + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(h + i), diff));
  }
  for (; i < n; ++i) out[i] = h[i] * (w[i] - m[i]);
}

constexpr KernelTable kAvx2Table = {
    .isa = Isa::kAvx2,
    .dot = DotAvx2,
    .weighted_squared_distance = WeightedSquaredDistanceAvx2,
    .axpy = AxpyAvx2,
    .scale = ScaleAvx2,
    .accumulate_rows = AccumulateRowsAvx2,
    .hadamard_difference = HadamardDifferenceAvx2,
};

}  // namespace

namespace internal {
const KernelTable* Avx2Kernels() { return &kAvx2Table; }
}  // namespace internal

}  // namespace ldpfl::kernels

#else

namespace ldpfl::kernels::internal {
const KernelTable* Avx2Kernels() { return nullptr; }
}  // namespace ldpfl::kernels::internal

#endif
