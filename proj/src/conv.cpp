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

#include <algorithm>
#include <string>

#include "conv_internal.hpp"
#include "padlab/error.hpp"
#include "padlab/kernels.hpp"
#include "padlab/tensor.hpp"

namespace padlab {
namespace detail {

FeatureMap conv2d_gated(const FeatureMap& input, const ConvSpec& spec, const ReadGate* gate) {
  spec.validate();
  const Dims& d = input.dims();
  if (d.channels != spec.in_channels) {
    throw Error("conv2d: input has " + std::to_string(d.channels) + " channels, spec expects " +
                std::to_string(spec.in_channels));
  }
  if (gate && (gate->kernel != spec.kernel_size || gate->height != d.height ||
               gate->width != d.width)) {
    throw Error("conv2d: read gate geometry does not match the convolution");
  }

  const int k = spec.kernel_size;
  const int dil = spec.dilation;
  const FeatureMap padded = pad(input, spec.padding, spec.same_pad());
  const int pw = padded.width();
  const std::size_t w = static_cast<std::size_t>(d.width);
  const auto& kt = kernels::active();

  FeatureMap out({d.batch, spec.out_channels, d.height, d.width});
  std::vector<double> acc(d.plane());
  for (int b = 0; b < d.batch; ++b) {
    for (int co = 0; co < spec.out_channels; ++co) {
      std::fill(acc.begin(), acc.end(), static_cast<double>(spec.bias[co]));
      for (int ci = 0; ci < spec.in_channels; ++ci) {
        const float* src = padded.plane(b, ci).data();
        for (int ky = 0; ky < k; ++ky) {
          for (int kx = 0; kx < k; ++kx) {
            const double wgt = spec.weight(co, ci, ky, kx);
            const int tap = ky * k + kx;
            for (int y = 0; y < d.height; ++y) {
              const float* in_row = src + static_cast<std::size_t>(y + ky * dil) * pw + kx * dil;
              double* acc_row = acc.data() + y * w;
              if (gate) {
                kt.axpy_gated(wgt, in_row, gate->row(tap, y), acc_row, w);
              } else {
                kt.axpy(wgt, in_row, acc_row, w);
              }
            }
          }
        }
      }
      auto dst = out.plane(b, co);
      std::transform(acc.begin(), acc.end(), dst.begin(),
                     [](double v) { return static_cast<float>(v); });
    }
  }
  require_finite(out, "conv2d");
  return out;
}

}  // namespace detail

FeatureMap conv2d(const FeatureMap& input, const ConvSpec& spec) {
  return detail::conv2d_gated(input, spec, nullptr);
}

}  // namespace padlab
