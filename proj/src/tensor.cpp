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

#include "padlab/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "padlab/error.hpp"

namespace padlab {
namespace {

void check_dims(const Dims& d) {
  if (d.batch < 1 || d.channels < 1 || d.height < 1 || d.width < 1) {
    throw Error("feature map dims must all be >= 1, got (" + std::to_string(d.batch) + ", " +
                std::to_string(d.channels) + ", " + std::to_string(d.height) + ", " +
                std::to_string(d.width) + ")");
  }
}

}  // namespace

FeatureMap::FeatureMap(Dims dims, float fill) : dims_(dims) {
  check_dims(dims);
  if (!std::isfinite(fill)) throw NumericError("feature map fill value must be finite");
  data_.assign(dims.size(), fill);
}

FeatureMap::FeatureMap(Dims dims, std::vector<float> data) : dims_(dims), data_(std::move(data)) {
  check_dims(dims);
  if (data_.size() != dims.size()) {
    throw Error("feature map data length " + std::to_string(data_.size()) +
                " does not match dims product " + std::to_string(dims.size()));
  }
  require_finite(*this, "FeatureMap");
}

bool FeatureMap::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

void require_finite(const FeatureMap& map, std::string_view op) {
  if (!map.all_finite()) throw NumericError(std::string(op) + ": produced a non-finite value");
}

std::string_view padding_name(PaddingMode mode) {
  switch (mode) {
    case PaddingMode::Zero:
      return "zero";
    case PaddingMode::Reflect:
      return "reflect";
    case PaddingMode::Replicate:
      return "replicate";
    case PaddingMode::Circular:
      return "circular";
  }
  return "unknown";
}

PaddingMode parse_padding(std::string_view name) {
  for (PaddingMode m : {PaddingMode::Zero, PaddingMode::Reflect, PaddingMode::Replicate,
                        PaddingMode::Circular}) {
    if (padding_name(m) == name) return m;
  }
  throw Error("unknown padding mode '" + std::string(name) + "'");
}

int padded_source_index(int i, int extent, PaddingMode mode) {
  if (i >= 0 && i < extent) return i;
  switch (mode) {
    case PaddingMode::Zero:
      return -1;
    case PaddingMode::Reflect:
      return i < 0 ? -i : 2 * (extent - 1) - i;
    case PaddingMode::Replicate:
      return i < 0 ? 0 : extent - 1;
    case PaddingMode::Circular:
      return ((i % extent) + extent) % extent;
  }
  return -1;
}

FeatureMap pad(const FeatureMap& input, PaddingMode mode, int vertical, int horizontal) {
  const Dims& d = input.dims();
  if (vertical < 0 || horizontal < 0) throw Error("pad: amounts must be non-negative");
  if (mode == PaddingMode::Reflect && (vertical >= d.height || horizontal >= d.width)) {
    throw Error("pad: reflect padding needs amount < extent (amount " + std::to_string(vertical) +
                "x" + std::to_string(horizontal) + ", map " + std::to_string(d.height) + "x" +
                std::to_string(d.width) + ")");
  }
  if (mode == PaddingMode::Circular && (vertical > d.height || horizontal > d.width)) {
    throw Error("pad: circular padding needs amount <= extent (amount " +
                std::to_string(vertical) + "x" + std::to_string(horizontal) + ", map " +
                std::to_string(d.height) + "x" + std::to_string(d.width) + ")");
  }

  FeatureMap out({d.batch, d.channels, d.height + 2 * vertical, d.width + 2 * horizontal});
  const int ow = out.width();
  std::vector<int> col_src(static_cast<std::size_t>(ow));
  for (int x = 0; x < ow; ++x) col_src[x] = padded_source_index(x - horizontal, d.width, mode);

  for (int b = 0; b < d.batch; ++b) {
    for (int c = 0; c < d.channels; ++c) {
      auto src = input.plane(b, c);
      auto dst = out.plane(b, c);
      for (int y = 0; y < out.height(); ++y) {
        const int sy = padded_source_index(y - vertical, d.height, mode);
        if (sy < 0) continue;
        const float* srow = src.data() + static_cast<std::size_t>(sy) * d.width;
        float* drow = dst.data() + static_cast<std::size_t>(y) * ow;
        for (int x = 0; x < ow; ++x) {
          if (col_src[x] >= 0) drow[x] = srow[col_src[x]];
        }
      }
    }
  }
  return out;
}

void ConvSpec::validate() const {
  if (kernel_size < 1 || kernel_size % 2 == 0) {
    throw Error("conv: kernel size must be odd and positive, got " + std::to_string(kernel_size));
  }
  if (dilation < 1) throw Error("conv: dilation must be >= 1, got " + std::to_string(dilation));
  if (in_channels < 1 || out_channels < 1) throw Error("conv: channel counts must be >= 1");
  const std::size_t expect =
      static_cast<std::size_t>(out_channels) * in_channels * kernel_size * kernel_size;
  if (weights.size() != expect) {
    throw Error("conv: expected " + std::to_string(expect) + " weights, got " +
                std::to_string(weights.size()));
  }
  if (bias.size() != static_cast<std::size_t>(out_channels)) {
    throw Error("conv: expected " + std::to_string(out_channels) + " biases, got " +
                std::to_string(bias.size()));
  }
  auto finite = [](float v) { return std::isfinite(v); };
  if (!std::all_of(weights.begin(), weights.end(), finite) ||
      !std::all_of(bias.begin(), bias.end(), finite)) {
    throw NumericError("conv: weights and biases must be finite");
  }
}

ConvSpec ConvSpec::identity(int channels, int kernel_size, PaddingMode mode) {
  ConvSpec spec = filled(channels, channels, kernel_size, 0.0f, mode);
  const int c = kernel_size / 2;
  for (int ch = 0; ch < channels; ++ch) {
    spec.weights[((static_cast<std::size_t>(ch) * channels + ch) * kernel_size + c) *
                     kernel_size + c] = 1.0f;
  }
  return spec;
}

ConvSpec ConvSpec::filled(int in_channels, int out_channels, int kernel_size, float value,
                          PaddingMode mode) {
  ConvSpec spec;
  spec.in_channels = in_channels;
  spec.out_channels = out_channels;
  spec.kernel_size = kernel_size;
  spec.padding = mode;
  spec.weights.assign(
      static_cast<std::size_t>(out_channels) * in_channels * kernel_size * kernel_size, value);
  spec.bias.assign(static_cast<std::size_t>(out_channels), 0.0f);
  return spec;
}

PatchMatrix unfold(const FeatureMap& input, int kernel, int stride) {
  const Dims& d = input.dims();
  if (kernel < 1 || stride < 1) throw Error("unfold: kernel and stride must be >= 1");
  if (kernel > d.height || kernel > d.width) {
    throw Error("unfold: kernel " + std::to_string(kernel) + " exceeds map " +
                std::to_string(d.height) + "x" + std::to_string(d.width));
  }
  PatchMatrix p;
  p.batch = d.batch;
  p.channels = d.channels;
  p.height = d.height;
  p.width = d.width;
  p.kernel = kernel;
  p.stride = stride;
  p.data.resize(static_cast<std::size_t>(d.batch) * p.patch_length() * p.positions());

  const int rows = p.rows_of_windows();
  const int cols = p.cols_of_windows();
  for (int b = 0; b < d.batch; ++b) {
    for (int c = 0; c < d.channels; ++c) {
      auto src = input.plane(b, c);
      for (int ky = 0; ky < kernel; ++ky) {
        for (int kx = 0; kx < kernel; ++kx) {
          const std::size_t row = (static_cast<std::size_t>(c) * kernel + ky) * kernel + kx;
          float* dst = &p.at(b, row, 0);
          for (int py = 0; py < rows; ++py) {
            const float* srow =
                src.data() + static_cast<std::size_t>(py * stride + ky) * d.width + kx;
            for (int px = 0; px < cols; ++px) *dst++ = srow[px * stride];
          }
        }
      }
    }
  }
  return p;
}

FeatureMap fold(const PatchMatrix& p) {
  if (p.batch < 1 || p.channels < 1 || p.kernel < 1 || p.stride < 1 || p.kernel > p.height ||
      p.kernel > p.width) {
    throw Error("fold: inconsistent patch geometry");
  }
  const std::size_t expect = static_cast<std::size_t>(p.batch) * p.patch_length() * p.positions();
  if (p.data.size() != expect) {
    throw Error("fold: patch data has " + std::to_string(p.data.size()) + " values, geometry needs " +
                std::to_string(expect));
  }
  const int rows = p.rows_of_windows();
  const int cols = p.cols_of_windows();
  const int k = p.kernel;
  FeatureMap out({p.batch, p.channels, p.height, p.width});
  std::vector<double> acc(static_cast<std::size_t>(p.height) * p.width);
  for (int b = 0; b < p.batch; ++b) {
    for (int c = 0; c < p.channels; ++c) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int ky = 0; ky < k; ++ky) {
        for (int kx = 0; kx < k; ++kx) {
          const std::size_t row = (static_cast<std::size_t>(c) * k + ky) * k + kx;
          const float* src = p.data.data() + (static_cast<std::size_t>(b) * p.patch_length() + row) * p.positions();
          for (int py = 0; py < rows; ++py) {
            double* arow = acc.data() + static_cast<std::size_t>(py * p.stride + ky) * p.width + kx;
            for (int px = 0; px < cols; ++px) arow[px * p.stride] += *src++;
          }
        }
      }
      auto dst = out.plane(b, c);
      std::transform(acc.begin(), acc.end(), dst.begin(),
                     [](double v) { return static_cast<float>(v); });
    }
  }
  require_finite(out, "fold");
  return out;
}

FeatureMap overlap_count(int height, int width, int kernel, int stride) {
  if (height < 1 || width < 1 || kernel < 1 || stride < 1 || kernel > height || kernel > width) {
    throw Error("overlap_count: invalid geometry");
  }
  FeatureMap out({1, 1, height, width});
  auto cell = out.plane(0, 0);
  const int rows = (height - kernel) / stride + 1;
  const int cols = (width - kernel) / stride + 1;
  for (int py = 0; py < rows; ++py) {
    for (int px = 0; px < cols; ++px) {
      for (int ky = 0; ky < kernel; ++ky) {
        for (int kx = 0; kx < kernel; ++kx) {
          cell[static_cast<std::size_t>(py * stride + ky) * width + px * stride + kx] += 1.0f;
        }
      }
    }
  }
  if (std::any_of(cell.begin(), cell.end(), [](float v) { return v == 0.0f; })) {
    throw Error("overlap_count: kernel " + std::to_string(kernel) + " with stride " +
                std::to_string(stride) + " leaves cells of a " + std::to_string(height) + "x" +
                std::to_string(width) + " map uncovered");
  }
  return out;
}

FeatureMap crop(const FeatureMap& input, const Rect& r) {
  const Dims& d = input.dims();
  if (r.height < 1 || r.width < 1 || r.top < 0 || r.left < 0 || r.top + r.height > d.height ||
      r.left + r.width > d.width) {
    throw Error("crop: rectangle out of bounds");
  }
  FeatureMap out({d.batch, d.channels, r.height, r.width});
  for (int b = 0; b < d.batch; ++b) {
    for (int c = 0; c < d.channels; ++c) {
      for (int y = 0; y < r.height; ++y) {
        for (int x = 0; x < r.width; ++x) out.at(b, c, y, x) = input.at(b, c, r.top + y, r.left + x);
      }
    }
  }
  return out;
}

}  // namespace padlab
