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

#include <cstddef>

namespace padlab::kernels {

#define PADLAB_DECLARE_KERNELS(ns)                                                       \
  namespace ns {                                                                         \
  void axpy(double alpha, const float* x, double* y, std::size_t n);                     \
  void axpy_gated(double alpha, const float* x, const double* gate, double* y,           \
                  std::size_t n);                                                        \
  double dot(const double* x, const double* y, std::size_t n);                           \
  void relu(float* x, std::size_t n);                                                    \
  }

PADLAB_DECLARE_KERNELS(scalar)
#if defined(PADLAB_HAVE_AVX2)
PADLAB_DECLARE_KERNELS(avx2)
#endif
#if defined(PADLAB_HAVE_NEON)
PADLAB_DECLARE_KERNELS(neon)
#endif

#undef PADLAB_DECLARE_KERNELS

}  // namespace padlab::kernels
