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

#include "padlab/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "padlab/error.hpp"

namespace padlab {
namespace {

struct PnmHeader {
  std::string magic;
  int width = 0;
  int height = 0;
  int maxval = 0;
};

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in, const std::string& what) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  if (tok.empty()) throw IoError(what + ": truncated header");
  return tok;
}

int parse_positive(const std::string& tok, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size() || v <= 0) throw IoError(what + ": bad header value '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    throw IoError(what + ": bad header value '" + tok + "'");
  }
}

PnmHeader read_header(std::istream& in, const std::string& expect_magic, const std::string& what) {
  PnmHeader h;
  char magic[2] = {0, 0};
  in.read(magic, 2);
  h.magic.assign(magic, 2);
  if (!in || h.magic != expect_magic) {
    throw IoError(what + ": not a binary " + expect_magic + " file");
  }
  // The token reader consumes exactly one whitespace byte after maxval.
  h.width = parse_positive(next_token(in, what), what);
  h.height = parse_positive(next_token(in, what), what);
  h.maxval = parse_positive(next_token(in, what), what);
  if (h.maxval > 255) throw IoError(what + ": only 8-bit files (maxval <= 255) are supported");
  return h;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::vector<std::uint8_t> read_pixels(std::istream& in, std::size_t count, const std::string& what) {
  std::vector<std::uint8_t> buf(count);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(in.gcount()) != count) throw IoError(what + ": truncated pixel data");
  return buf;
}

}  // namespace

Image::Image(int height, int width, std::vector<float> data)
    : height_(height), width_(width), data_(std::move(data)) {
  if (height < 1 || width < 1) throw Error("image dims must be >= 1");
  if (data_.size() != 3ULL * height * width) throw Error("image data length mismatch");
  for (float& v : data_) {
    if (!std::isfinite(v)) throw NumericError("image values must be finite");
    v = std::clamp(v, 0.0f, 1.0f);
  }
}

Image::Image(int height, int width, float fill)
    : Image(height, width, std::vector<float>(3ULL * std::max(height, 1) * std::max(width, 1), fill)) {}

Image Image::region(int top, int left, int height, int width) const {
  if (top < 0 || left < 0 || height < 1 || width < 1 || top + height > height_ ||
      left + width > width_) {
    throw Error("image region out of bounds");
  }
  std::vector<float> out(3ULL * height * width);
  std::size_t i = 0;
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) out[i++] = at(c, top + y, left + x);
    }
  }
  return Image(height, width, std::move(out));
}

Image read_ppm(const std::filesystem::path& path) {
  const std::string what = path.string();
  auto in = open_in(path);
  const PnmHeader h = read_header(in, "P6", what);
  const auto buf = read_pixels(in, 3ULL * h.width * h.height, what);
  std::vector<float> data(buf.size());
  const std::size_t plane = static_cast<std::size_t>(h.width) * h.height;
  for (std::size_t p = 0; p < plane; ++p) {
    for (int c = 0; c < 3; ++c) {
      data[c * plane + p] = static_cast<float>(buf[3 * p + c]) / static_cast<float>(h.maxval);
    }
  }
  return Image(h.height, h.width, std::move(data));
}

void write_ppm(const std::filesystem::path& path, const Image& image) {
  auto out = open_out(path);
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  std::vector<std::uint8_t> buf(3ULL * image.width() * image.height());
  std::size_t i = 0;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        buf[i++] = static_cast<std::uint8_t>(std::lround(image.at(c, y, x) * 255.0f));
      }
    }
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_pgm(const std::filesystem::path& path, std::span<const std::uint8_t> pixels, int height,
               int width) {
  if (height < 1 || width < 1 || pixels.size() != static_cast<std::size_t>(height) * width) {
    throw Error("write_pgm: pixel count does not match dims");
  }
  auto out = open_out(path);
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

GrayImage read_pgm(const std::filesystem::path& path) {
  const std::string what = path.string();
  auto in = open_in(path);
  const PnmHeader h = read_header(in, "P5", what);
  GrayImage g{h.height, h.width, read_pixels(in, static_cast<std::size_t>(h.width) * h.height, what)};
  return g;
}

}  // namespace padlab
