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

// Compiled with -mavx2 -mfma. Only reached when the CPU reports both.

#include <immintrin.h>

#include <cmath>

#include "kernels/variants.hpp"

namespace padlab::kernels::avx2 {

void axpy(double alpha, const float* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d x0 = _mm256_cvtps_pd(_mm_loadu_ps(x + i));
    __m256d x1 = _mm256_cvtps_pd(_mm_loadu_ps(x + i + 4));
    __m256d y0 = _mm256_loadu_pd(y + i);
    __m256d y1 = _mm256_loadu_pd(y + i + 4);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, x0, y0));
    _mm256_storeu_pd(y + i + 4, _mm256_fmadd_pd(a, x1, y1));
  }
  for (; i + 4 <= n; i += 4) {
    __m256d x0 = _mm256_cvtps_pd(_mm_loadu_ps(x + i));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, x0, _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] = std::fma(alpha, static_cast<double>(x[i]), y[i]);
}

void axpy_gated(double alpha, const float* x, const double* gate, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d g = _mm256_mul_pd(a, _mm256_loadu_pd(gate + i));
    __m256d xv = _mm256_cvtps_pd(_mm_loadu_ps(x + i));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(g, xv, _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) {
    const double g = alpha * gate[i];
    y[i] = std::fma(g, static_cast<double>(x[i]), y[i]);
  }
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) total = std::fma(x[i], y[i], total);
  return total;
}

void relu(float* x, std::size_t n) {
  const __m256 zero = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    // max_ps returns the second operand for -0/+0 and NaN, matching the scalar path.
    _mm256_storeu_ps(x + i, _mm256_max_ps(_mm256_loadu_ps(x + i), zero));
  }
  for (; i < n; ++i) x[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

}  // namespace padlab::kernels::avx2
