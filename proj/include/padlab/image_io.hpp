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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace padlab {

/// RGB image, planar (3, height, width), values clamped to [0, 1].
class Image {
 public:
  Image(int height, int width, std::vector<float> data);
  Image(int height, int width, float fill = 0.0f);

  int height() const { return height_; }
  int width() const { return width_; }
  float& at(int c, int y, int x) { return data_[index(c, y, x)]; }
  float at(int c, int y, int x) const { return data_[index(c, y, x)]; }
  std::span<const float> data() const { return data_; }

  /// Copy of the sub-rectangle, all three channels.
  Image region(int top, int left, int height, int width) const;

 private:
  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
  }
  int height_;
  int width_;
  std::vector<float> data_;
};

/// Binary P6 reader; comments allowed in the header, maxval 1..255.
/// Throws IoError on open failures and malformed files.
Image read_ppm(const std::filesystem::path& path);
/// Binary P6, maxval 255, values rounded to the nearest level.
void write_ppm(const std::filesystem::path& path, const Image& image);
/// Binary P5, maxval 255, row-major pixels.
void write_pgm(const std::filesystem::path& path, std::span<const std::uint8_t> pixels, int height,
               int width);

struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;
};
GrayImage read_pgm(const std::filesystem::path& path);

}  // namespace padlab
