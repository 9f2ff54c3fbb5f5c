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

#include <cmath>

#include "kernels/variants.hpp"

namespace padlab::kernels::scalar {

void axpy(double alpha, const float* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(alpha, static_cast<double>(x[i]), y[i]);
}

void axpy_gated(double alpha, const float* x, const double* gate, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double a = alpha * gate[i];
    y[i] = std::fma(a, static_cast<double>(x[i]), y[i]);
  }
}

double dot(const double* x, const double* y, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int l = 0; l < 4; ++l) lane[l] = std::fma(x[i + l], y[i + l], lane[l]);
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) total = std::fma(x[i], y[i], total);
  return total;
}

void relu(float* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

}  // namespace padlab::kernels::scalar
