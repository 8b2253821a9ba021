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

#include <atomic>

#include "ldpfl/kernels.h"

namespace ldpfl::kernels {
namespace {

bool CpuHasAvx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* Widest() {
  if (const KernelTable* t = internal::Avx2Kernels(); t && CpuHasAvx2()) {
    return t;
  }
  // NEON is baseline on AArch64.
  if (const KernelTable* t = internal::NeonKernels(); t) return t;
  return &ScalarKernels();
}

std::atomic<const KernelTable*>& Override() {
  static std::atomic<const KernelTable*> table{nullptr};
  return table;
}

}  // namespace

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

std::vector<const KernelTable*> AvailableKernels() {
  std::vector<const KernelTable*> out = {&ScalarKernels()};
  if (const KernelTable* t = internal::Avx2Kernels(); t && CpuHasAvx2()) {
    out.push_back(t);
  }
  if (const KernelTable* t = internal::NeonKernels(); t) out.push_back(t);
  return out;
}

const KernelTable& ActiveKernels() {
  if (const KernelTable* forced = Override().load(std::memory_order_acquire)) {
    return *forced;
  }
  static const KernelTable* const widest = Widest();
  return *widest;
}

bool ForceIsa(Isa isa) {
  for (const KernelTable* t : AvailableKernels()) {
    if (t->isa == isa) {
      Override().store(t, std::memory_order_release);
      return true;
    }
  }
  return false;
}

void ResetIsa() { Override().store(nullptr, std::memory_order_release); }

}  // namespace ldpfl::kernels
