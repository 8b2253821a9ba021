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

#include "ldpfl/kernels.h"

#include <cstdint>
#include <random>
#include <vector>

#include "gtest/gtest.h"

namespace ldpfl::kernels {
namespace {

std::vector<double> RandomVector(size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  return v;
}

class KernelParityTest : public ::testing::TestWithParam<size_t> {};

TEST_P(KernelParityTest, AllTablesMatchScalarBitForBit) {
  const size_t n = GetParam();
  const std::vector<double> a = RandomVector(n, 1);
  const std::vector<double> b = RandomVector(n, 2);
  const std::vector<double> h = RandomVector(n, 3);
  const size_t rows = 9;
  const std::vector<double> mat = RandomVector(rows * n, 4);
  const std::vector<uint32_t> idx = {0, 3, 3, 8, 5, 1};
  const KernelTable& ref = ScalarKernels();
  for (const KernelTable* t : AvailableKernels()) {
    SCOPED_TRACE(IsaName(t->isa));
    EXPECT_EQ(t->dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n));
    EXPECT_EQ(t->weighted_squared_distance(h.data(), a.data(), b.data(), n),
              ref.weighted_squared_distance(h.data(), a.data(), b.data(), n));

    std::vector<double> y1 = b, y2 = b;
    t->axpy(-0.37, a.data(), y1.data(), n);
    ref.axpy(-0.37, a.data(), y2.data(), n);
    EXPECT_EQ(y1, y2);

    y1 = a;
    y2 = a;
    t->scale(1.7, y1.data(), n);
    ref.scale(1.7, y2.data(), n);
    EXPECT_EQ(y1, y2);

    y1.assign(n, 0.5);
    y2.assign(n, 0.5);
    t->accumulate_rows(mat.data(), n, idx.data(), idx.size(), y1.data());
    ref.accumulate_rows(mat.data(), n, idx.data(), idx.size(), y2.data());
    EXPECT_EQ(y1, y2);

    y1.assign(n, 0.0);
    y2.assign(n, 0.0);
    t->hadamard_difference(h.data(), a.data(), b.data(), y1.data(), n);
    ref.hadamard_difference(h.data(), a.data(), b.data(), y2.data(), n);
    EXPECT_EQ(y1, y2);
  }
}

INSTANTIATE_TEST_SUITE_P(Lengths, KernelParityTest,
                         ::testing::Values(0, 1, 3, 4, 5, 7, 8, 10, 17, 64,
                                           1001));

TEST(KernelScalarTest, ComputesExpectedValues) {
  const std::vector<double> a = {1, 2, 3};
  const std::vector<double> b = {4, 5, 6};
  const std::vector<double> h = {1, 2, 3};
  const KernelTable& k = ScalarKernels();
  EXPECT_EQ(k.dot(a.data(), b.data(), 3), 32.0);
  EXPECT_EQ(k.weighted_squared_distance(h.data(), a.data(), b.data(), 3),
            9.0 + 18.0 + 27.0);
  std::vector<double> out(3);
  k.hadamard_difference(h.data(), a.data(), b.data(), out.data(), 3);
  EXPECT_EQ(out, (std::vector<double>{-3, -6, -9}));
  const std::vector<uint32_t> idx = {1, 0, 1};
  const std::vector<double> mat = {1, 2, 3, 10, 20, 30};
  std::vector<double> acc(3, 0.0);
  k.accumulate_rows(mat.data(), 3, idx.data(), idx.size(), acc.data());
  EXPECT_EQ(acc, (std::vector<double>{21, 42, 63}));
}

TEST(KernelDispatchTest, ForceAndReset) {
  EXPECT_TRUE(ForceIsa(Isa::kScalar));
  EXPECT_EQ(ActiveKernels().isa, Isa::kScalar);
  ResetIsa();
  const Isa widest = AvailableKernels().back()->isa;
  EXPECT_EQ(ActiveKernels().isa, widest);
  bool has_avx2 = false;
  for (const KernelTable* t : AvailableKernels()) {
    has_avx2 |= t->isa == Isa::kAvx2;
  }
  EXPECT_EQ(ForceIsa(Isa::kAvx2), has_avx2);
  ResetIsa();
}

TEST(KernelDispatchTest, IsaNames) {
  EXPECT_EQ(IsaName(Isa::kScalar), "scalar");
  EXPECT_EQ(IsaName(Isa::kAvx2), "avx2");
  EXPECT_EQ(IsaName(Isa::kNeon), "neon");
}

}  // namespace
}  // namespace ldpfl::kernels
