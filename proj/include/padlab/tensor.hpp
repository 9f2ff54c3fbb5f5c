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

// Dense rank-4 feature maps, padding, same-size convolution, and the
// unfold/fold (patch extraction / overlap-add) pair.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace padlab {

struct Dims {
  int batch = 1;
  int channels = 1;
  int height = 1;
  int width = 1;

  std::size_t size() const {
    return static_cast<std::size_t>(batch) * channels * height * width;
  }
  std::size_t plane() const { return static_cast<std::size_t>(height) * width; }
  bool operator==(const Dims&) const = default;
};

/// Axis-aligned rectangle in feature cells.
struct Rect {
  int top = 0;
  int left = 0;
  int height = 0;
  int width = 0;

  bool contains(int y, int x) const {
    return y >= top && y < top + height && x >= left && x < left + width;
  }
  bool operator==(const Rect&) const = default;
};

/// Row-major (batch, channel, height, width) array of finite floats.
class FeatureMap {
 public:
  FeatureMap() = default;
  explicit FeatureMap(Dims dims, float fill = 0.0f);
  /// Takes ownership of `data`; throws if the length or any value is invalid.
  FeatureMap(Dims dims, std::vector<float> data);

  const Dims& dims() const { return dims_; }
  int batch() const { return dims_.batch; }
  int channels() const { return dims_.channels; }
  int height() const { return dims_.height; }
  int width() const { return dims_.width; }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  std::span<float> plane(int b, int c) {
    return std::span<float>(data_).subspan(plane_offset(b, c), dims_.plane());
  }
  std::span<const float> plane(int b, int c) const {
    return std::span<const float>(data_).subspan(plane_offset(b, c), dims_.plane());
  }

  float& at(int b, int c, int y, int x) { return data_[index(b, c, y, x)]; }
  float at(int b, int c, int y, int x) const { return data_[index(b, c, y, x)]; }

  bool all_finite() const;

  bool operator==(const FeatureMap&) const = default;

 private:
  std::size_t plane_offset(int b, int c) const {
    return (static_cast<std::size_t>(b) * dims_.channels + c) * dims_.plane();
  }
  std::size_t index(int b, int c, int y, int x) const {
    return plane_offset(b, c) + static_cast<std::size_t>(y) * dims_.width + x;
  }

  Dims dims_{};
  std::vector<float> data_ = std::vector<float>(1, 0.0f);
};

/// Throws NumericError naming `op` if any value is NaN or infinite.
void require_finite(const FeatureMap& map, std::string_view op);

enum class PaddingMode { Zero, Reflect, Replicate, Circular };

std::string_view padding_name(PaddingMode mode);
PaddingMode parse_padding(std::string_view name);

/// Pads `vertical` rows above and below and `horizontal` columns left and right.
/// Reflect mirrors without repeating the edge cell (needs amount < extent);
/// circular wraps (needs amount <= extent).
FeatureMap pad(const FeatureMap& input, PaddingMode mode, int vertical, int horizontal);
inline FeatureMap pad(const FeatureMap& input, PaddingMode mode, int amount) {
  return pad(input, mode, amount, amount);
}

/// Source index along one axis for padded coordinate `i` (may be outside [0, extent)).
/// Returns -1 for zero padding outside the map.
int padded_source_index(int i, int extent, PaddingMode mode);

struct ConvSpec {
  int in_channels = 1;
  int out_channels = 1;
  int kernel_size = 3;
  int dilation = 1;
  PaddingMode padding = PaddingMode::Zero;
  std::vector<float> weights;  // (out, in, K, K)
  std::vector<float> bias;     // (out)

  /// Pad per side that keeps the spatial size: dilation * (K - 1) / 2.
  int same_pad() const { return dilation * (kernel_size - 1) / 2; }
  float weight(int co, int ci, int ky, int kx) const {
    return weights[((static_cast<std::size_t>(co) * in_channels + ci) * kernel_size + ky) *
                       kernel_size + kx];
  }
  /// Throws Error on an even/non-positive kernel, bad dilation, wrong array sizes,
  /// or non-finite weights.
  void validate() const;

  static ConvSpec identity(int channels, int kernel_size = 3, PaddingMode mode = PaddingMode::Zero);
  static ConvSpec filled(int in_channels, int out_channels, int kernel_size, float value,
                         PaddingMode mode = PaddingMode::Zero);
};

/// Stride-1 "same" convolution. Accumulates in double, stores float.
FeatureMap conv2d(const FeatureMap& input, const ConvSpec& spec);

/// Unfolded sliding windows: (batch, channels*K*K, L) with L = rows * cols
/// window positions scanned row-major.
struct PatchMatrix {
  int batch = 1;
  int channels = 1;
  int height = 0;
  int width = 0;
  int kernel = 1;
  int stride = 1;
  std::vector<float> data;

  int rows_of_windows() const { return (height - kernel) / stride + 1; }
  int cols_of_windows() const { return (width - kernel) / stride + 1; }
  std::size_t positions() const {
    return static_cast<std::size_t>(rows_of_windows()) * cols_of_windows();
  }
  std::size_t patch_length() const {
    return static_cast<std::size_t>(channels) * kernel * kernel;
  }
  float& at(int b, std::size_t row, std::size_t pos) {
    return data[(static_cast<std::size_t>(b) * patch_length() + row) * positions() + pos];
  }
  float at(int b, std::size_t row, std::size_t pos) const {
    return data[(static_cast<std::size_t>(b) * patch_length() + row) * positions() + pos];
  }
};

/// No implicit padding: callers pad first.
PatchMatrix unfold(const FeatureMap& input, int kernel, int stride);
/// Overlap-add back onto the recorded (height, width).
FeatureMap fold(const PatchMatrix& patches);
/// Number of windows covering each cell, as a (1, 1, H, W) map. Throws if any
/// cell is left uncovered.
FeatureMap overlap_count(int height, int width, int kernel, int stride);

FeatureMap crop(const FeatureMap& input, const Rect& rect);

}  // namespace padlab
