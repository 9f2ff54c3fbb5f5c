// Copyright 2026 The padlab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels/variants.hpp"
#include "padlab/error.hpp"
#include "padlab/kernels.hpp"

namespace padlab::kernels {
namespace {

constexpr KernelTable kScalar{Isa::Scalar, scalar::axpy, scalar::axpy_gated, scalar::dot,
                              scalar::relu};
#if defined(PADLAB_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2, avx2::axpy, avx2::axpy_gated, avx2::dot, avx2::relu};
#endif
#if defined(PADLAB_HAVE_NEON)
constexpr KernelTable kNeon{Isa::Neon, neon::axpy, neon::axpy_gated, neon::dot, neon::relu};
#endif

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(PADLAB_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(PADLAB_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* pick_default() {
  if (const char* env = std::getenv("PADLAB_ISA")) {
    const std::string want(env);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
      if (want == isa_name(isa) && cpu_supports(isa)) return &table(isa);
    }
  }
  if (cpu_supports(Isa::Avx2)) return &table(Isa::Avx2);
  if (cpu_supports(Isa::Neon)) return &table(Isa::Neon);
  return &kScalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> ptr{pick_default()};
  return ptr;
}

}  // namespace

bool available(Isa isa) { return cpu_supports(isa); }

const KernelTable& table(Isa isa) {
  if (!cpu_supports(isa)) {
    throw Error("kernel variant '" + std::string(isa_name(isa)) + "' is not available on this CPU");
  }
  switch (isa) {
#if defined(PADLAB_HAVE_AVX2)
    case Isa::Avx2:
      return kAvx2;
#endif
#if defined(PADLAB_HAVE_NEON)
    case Isa::Neon:
      return kNeon;
#endif
    default:
      return kScalar;
  }
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) { current().store(&table(isa), std::memory_order_release); }

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
    if (cpu_supports(isa)) out.push_back(isa);
  }
  return out;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

}  // namespace padlab::kernels
