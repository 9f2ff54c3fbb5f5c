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

// AArch64 only. float64x2 lanes; two accumulators in dot() reproduce the
// 4-lane reduction order of the scalar reference.

#include <arm_neon.h>

#include <cmath>

#include "kernels/variants.hpp"

namespace padlab::kernels::neon {

void axpy(double alpha, const float* x, double* y, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float32x4_t xf = vld1q_f32(x + i);
    float64x2_t x0 = vcvt_f64_f32(vget_low_f32(xf));
    float64x2_t x1 = vcvt_high_f64_f32(xf);
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), a, x0));
    vst1q_f64(y + i + 2, vfmaq_f64(vld1q_f64(y + i + 2), a, x1));
  }
  for (; i < n; ++i) y[i] = std::fma(alpha, static_cast<double>(x[i]), y[i]);
}

void axpy_gated(double alpha, const float* x, const double* gate, double* y, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float32x4_t xf = vld1q_f32(x + i);
    float64x2_t g0 = vmulq_f64(a, vld1q_f64(gate + i));
    float64x2_t g1 = vmulq_f64(a, vld1q_f64(gate + i + 2));
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), g0, vcvt_f64_f32(vget_low_f32(xf))));
    vst1q_f64(y + i + 2, vfmaq_f64(vld1q_f64(y + i + 2), g1, vcvt_high_f64_f32(xf)));
  }
  for (; i < n; ++i) {
    const double g = alpha * gate[i];
    y[i] = std::fma(g, static_cast<double>(x[i]), y[i]);
  }
}

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vfmaq_f64(lo, vld1q_f64(x + i), vld1q_f64(y + i));
    hi = vfmaq_f64(hi, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double total = (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
                 (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
  for (; i < n; ++i) total = std::fma(x[i], y[i], total);
  return total;
}

void relu(float* x, std::size_t n) {
  const float32x4_t zero = vdupq_n_f32(0.0f);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) vst1q_f32(x + i, vmaxq_f32(vld1q_f32(x + i), zero));
  for (; i < n; ++i) x[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

}  // namespace padlab::kernels::neon
