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

#ifndef LDPFL_KERNELS_H_
#define LDPFL_KERNELS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

// Double-precision vector kernels used by the simulator's inner loops.
//
// Every variant produces bit-identical results to the scalar reference:
// reductions accumulate into four interleaved lanes (element i goes to lane
// i % 4), lanes are folded as (l0 + l2) + (l1 + l3), and the tail beyond the
// last full group of four is added sequentially afterwards. No variant uses
// fused multiply-add.
namespace ldpfl::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view IsaName(Isa isa);

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, size_t n);
  // sum_i h[i] * (a[i] - b[i])^2
  double (*weighted_squared_distance)(const double* h, const double* a,
                                      const double* b, size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, size_t n);
  // x[i] *= alpha
  void (*scale)(double alpha, double* x, size_t n);
  // acc[j] += rows[idx[r] * dim + j] for every listed row r
  void (*accumulate_rows)(const double* rows, size_t dim,
                          const uint32_t* idx, size_t count, double* acc);
  // out[i] = h[i] * (w[i] - m[i])
  void (*hadamard_difference)(const double* h, const double* w,
                              const double* m, double* out, size_t n);
};

const KernelTable& ScalarKernels();

// Variants compiled into this binary and supported by the running CPU,
// scalar first.
std::vector<const KernelTable*> AvailableKernels();

// The table used by the free functions below: the widest available variant
// unless overridden by ForceIsa.
const KernelTable& ActiveKernels();

// Returns false if `isa` is not available on this machine.
bool ForceIsa(Isa isa);
void ResetIsa();

inline double Dot(std::span<const double> a, std::span<const double> b) {
  return ActiveKernels().dot(a.data(), b.data(), a.size());
}
inline double SquaredNorm(std::span<const double> a) {
  return ActiveKernels().dot(a.data(), a.data(), a.size());
}
inline double WeightedSquaredDistance(std::span<const double> h,
                                      std::span<const double> a,
                                      std::span<const double> b) {
  return ActiveKernels().weighted_squared_distance(h.data(), a.data(),
                                                   b.data(), a.size());
}
inline void Axpy(double alpha, std::span<const double> x,
                 std::span<double> y) {
  ActiveKernels().axpy(alpha, x.data(), y.data(), y.size());
}
inline void Scale(double alpha, std::span<double> x) {
  ActiveKernels().scale(alpha, x.data(), x.size());
}
inline void AccumulateRows(std::span<const double> rows, size_t dim,
                           std::span<const uint32_t> idx,
                           std::span<double> acc) {
  ActiveKernels().accumulate_rows(rows.data(), dim, idx.data(), idx.size(),
                                  acc.data());
}
inline void HadamardDifference(std::span<const double> h,
                               std::span<const double> w,
                               std::span<const double> m,
                               std::span<double> out) {
  ActiveKernels().hadamard_difference(h.data(), w.data(), m.data(),
                                      out.data(), out.size());
}

namespace internal {
const KernelTable* Avx2Kernels();  // nullptr when not compiled in
const KernelTable* NeonKernels();  // nullptr when not compiled in
}  // namespace internal

}  // namespace ldpfl::kernels

#endif  // LDPFL_KERNELS_H_
