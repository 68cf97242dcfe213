// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "beamkit/error.hpp"
#include "beamkit/kernels.hpp"

namespace beamkit::kernels {

namespace {

constexpr KernelTable kScalarTable{Isa::kScalar, &scalar::AccumulateOuter, &scalar::DotConj,
                                   &scalar::Abs2, &scalar::ScaleByReal};
constexpr KernelTable kAvx2Table{Isa::kAvx2, &avx2::AccumulateOuter, &avx2::DotConj,
                                 &avx2::Abs2, &avx2::ScaleByReal};

const KernelTable* DefaultTable() {
  const char* forced = std::getenv("BEAMKIT_ISA");
  if (forced != nullptr && std::string_view(forced) == "scalar") return &kScalarTable;
  return IsaSupported(Isa::kAvx2) ? &kAvx2Table : &kScalarTable;
}

std::atomic<const KernelTable*>& ActiveSlot() {
  static std::atomic<const KernelTable*> slot{DefaultTable()};
  return slot;
}

}  // namespace

std::string ToString(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

bool IsaSupported(Isa isa) {
  if (isa == Isa::kScalar) return true;
#if defined(BEAMKIT_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& TableFor(Isa isa) {
  BEAMKIT_REQUIRE(IsaSupported(isa), ErrorCode::kInvalidConfig,
                  "ISA " + ToString(isa) + " is not supported on this CPU");
  return isa == Isa::kAvx2 ? kAvx2Table : kScalarTable;
}

const KernelTable& Active() { return *ActiveSlot().load(std::memory_order_acquire); }

void SetActiveIsa(Isa isa) { ActiveSlot().store(&TableFor(isa), std::memory_order_release); }

}  // namespace beamkit::kernels
