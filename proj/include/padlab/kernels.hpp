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

#pragma once

// Inner-loop kernels with a scalar reference and SIMD variants.
//
// Every variant must produce bit-identical results to the scalar reference:
// multiply-adds are fused (std::fma / vfmadd) in all variants, and reductions
// use a fixed 4-lane partial-sum order. The active table is chosen once at
// startup from CPU features and can be overridden with PADLAB_ISA=scalar|avx2|neon
// or kernels::select().

#include <cstddef>
#include <string_view>
#include <vector>

namespace padlab::kernels {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  Isa isa;
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const float* x, double* y, std::size_t n);
  // y[i] += (alpha * gate[i]) * x[i]
  void (*axpy_gated)(double alpha, const float* x, const double* gate, double* y,
                     std::size_t n);
  // sum_i x[i] * y[i], lanes i mod 4 accumulated separately then (l0+l1)+(l2+l3)
  double (*dot)(const double* x, const double* y, std::size_t n);
  // x[i] = x[i] > 0 ? x[i] : +0
  void (*relu)(float* x, std::size_t n);
};

const KernelTable& active();
const KernelTable& table(Isa isa);
bool available(Isa isa);
void select(Isa isa);
std::vector<Isa> available_isas();
std::string_view isa_name(Isa isa);

}  // namespace padlab::kernels
