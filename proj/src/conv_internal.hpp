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

#include <vector>

#include "padlab/tensor.hpp"

namespace padlab::detail {

/// Multiplicative factor on each window read, laid out (K*K, H, W):
/// entry [(ky*K + kx), oy, ox] scales the read of tap (ky, kx) for output (oy, ox).
struct ReadGate {
  int kernel = 0;
  int height = 0;
  int width = 0;
  std::vector<double> values;

  const double* row(int tap, int y) const {
    return values.data() + (static_cast<std::size_t>(tap) * height + y) * width;
  }
};

/// Builds a gate from a per-read factor f(oy, ox, iy, ix), where (iy, ix) is the
/// unpadded source coordinate of the read (may lie outside the map).
template <class Factor>
ReadGate make_gate(const ConvSpec& spec, int height, int width, Factor&& factor) {
  const int k = spec.kernel_size;
  const int half = k / 2;
  ReadGate g{k, height, width, {}};
  g.values.resize(static_cast<std::size_t>(k) * k * height * width);
  std::size_t i = 0;
  for (int ky = 0; ky < k; ++ky) {
    for (int kx = 0; kx < k; ++kx) {
      const int dy = (ky - half) * spec.dilation;
      const int dx = (kx - half) * spec.dilation;
      for (int oy = 0; oy < height; ++oy) {
        for (int ox = 0; ox < width; ++ox) g.values[i++] = factor(oy, ox, oy + dy, ox + dx);
      }
    }
  }
  return g;
}

/// conv2d with every window read scaled by `gate` (nullptr means all ones).
FeatureMap conv2d_gated(const FeatureMap& input, const ConvSpec& spec, const ReadGate* gate);

}  // namespace padlab::detail
