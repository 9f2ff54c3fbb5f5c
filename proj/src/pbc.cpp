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

#include "padlab/pbc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "padlab/error.hpp"

namespace padlab {
namespace {

int max_distance(int extent) { return (extent + 1) / 2 - 1; }

int clamp_distance(int distance, int extent) {
  return std::clamp(distance, 1, std::max(1, max_distance(extent)));
}

void sort_boundaries(std::vector<VirtualBoundary>& v) {
  std::stable_sort(v.begin(), v.end(), [](const VirtualBoundary& a, const VirtualBoundary& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.axis < b.axis;
  });
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_set_geometry(const BoundarySet& set, int height, int width) {
  for (const auto& vb : set.boundaries) {
    const int extent = vb.axis == Axis::Rows ? height : width;
    if (vb.extent != extent) {
      throw Error("virtual boundary placed for extent " + std::to_string(vb.extent) +
                  " applied to a map of extent " + std::to_string(extent));
    }
  }
}

}  // namespace

std::string_view pbc_mode_name(PbcMode mode) {
  return mode == PbcMode::WholePatch ? "wholepatch" : "crossboundary";
}

PbcMode parse_pbc_mode(std::string_view name) {
  if (name == "wholepatch") return PbcMode::WholePatch;
  if (name == "crossboundary") return PbcMode::CrossBoundary;
  throw Error("unknown PBC mode '" + std::string(name) + "'");
}

std::string_view pbc_axes_name(PbcAxes axes) {
  switch (axes) {
    case PbcAxes::Both:
      return "both";
    case PbcAxes::RowsOnly:
      return "rows";
    case PbcAxes::ColsOnly:
      return "cols";
  }
  return "unknown";
}

PbcAxes parse_pbc_axes(std::string_view name) {
  for (PbcAxes a : {PbcAxes::Both, PbcAxes::RowsOnly, PbcAxes::ColsOnly}) {
    if (pbc_axes_name(a) == name) return a;
  }
  throw Error("unknown PBC axes '" + std::string(name) + "'");
}

BoundarySet place_boundaries(int count, int height, int width, PbcAxes axes) {
  if (count < 0) throw Error("place_boundaries: count must be >= 0");
  BoundarySet set;
  set.count_per_axis = count;
  if (count == 0) return set;

  auto place_axis = [&](Axis axis, int extent) {
    if (2 * count >= extent) {
      throw Error("place_boundaries: " + std::to_string(count) +
                  " boundaries do not fit an axis of size " + std::to_string(extent));
    }
    for (int n = 1; n <= count; ++n) {
      const double ratio = static_cast<double>(n) / (count + 1);
      const int distance = static_cast<int>(std::floor(ratio * extent / 2.0 + 0.5));
      set.boundaries.push_back({axis, clamp_distance(distance, extent), ratio, extent});
    }
  };
  if (axes != PbcAxes::ColsOnly) place_axis(Axis::Rows, height);
  if (axes != PbcAxes::RowsOnly) place_axis(Axis::Cols, width);
  sort_boundaries(set.boundaries);
  return set;
}

BoundarySet perturb(const BoundarySet& set, std::mt19937_64& rng) {
  if (set.perturb_range < 0) throw Error("perturb: range must be >= 0");
  if (set.perturb_range == 0) return set;
  BoundarySet out = set;
  std::uniform_int_distribution<int> offset(-set.perturb_range, set.perturb_range);
  for (auto& vb : out.boundaries) vb.distance = clamp_distance(vb.distance + offset(rng), vb.extent);
  sort_boundaries(out.boundaries);
  return out;
}

std::uint64_t layer_seed(std::uint64_t global_seed, int layer, int boundary) {
  std::uint64_t h = splitmix64(global_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(layer));
  return splitmix64(h ^ (static_cast<std::uint64_t>(boundary) << 32));
}

BoundarySet perturb_for_layer(const BoundarySet& set, int layer) {
  if (set.perturb_range < 0) throw Error("perturb: range must be >= 0");
  if (set.perturb_range == 0) return set;
  BoundarySet out = set;
  for (std::size_t i = 0; i < out.boundaries.size(); ++i) {
    std::mt19937_64 rng(layer_seed(set.seed, layer, static_cast<int>(i)));
    std::uniform_int_distribution<int> offset(-set.perturb_range, set.perturb_range);
    auto& vb = out.boundaries[i];
    vb.distance = clamp_distance(vb.distance + offset(rng), vb.extent);
  }
  sort_boundaries(out.boundaries);
  return out;
}

std::map<double, std::vector<std::size_t>> boundary_locations(const BoundarySet& set, int height,
                                                              int width, int kernel, int stride) {
  std::map<double, std::vector<std::size_t>> out;
  if (set.boundaries.empty()) return out;
  if (kernel < 1 || kernel % 2 == 0) throw Error("boundary_locations: kernel must be odd");
  if (stride < 1 || kernel > height || kernel > width) {
    throw Error("boundary_locations: geometry inconsistent with unfold");
  }
  check_set_geometry(set, height, width);

  const int rows = (height - kernel) / stride + 1;
  const int cols = (width - kernel) / stride + 1;
  const int half = kernel / 2;
  constexpr double kNone = std::numeric_limits<double>::infinity();

  // Smallest ratio of any line through each centre row / column.
  std::vector<double> row_ratio(static_cast<std::size_t>(height), kNone);
  std::vector<double> col_ratio(static_cast<std::size_t>(width), kNone);
  for (const auto& vb : set.boundaries) {
    auto& line = vb.axis == Axis::Rows ? row_ratio : col_ratio;
    for (int cell : {vb.near_cell(), vb.far_cell()}) line[cell] = std::min(line[cell], vb.ratio);
  }
  for (int py = 0; py < rows; ++py) {
    const double ry = row_ratio[py * stride + half];
    for (int px = 0; px < cols; ++px) {
      const double r = std::min(ry, col_ratio[px * stride + half]);
      if (r != kNone) out[r].push_back(static_cast<std::size_t>(py) * cols + px);
    }
  }
  return out;
}

FeatureMap apply_pbc_wholepatch(const FeatureMap& input, const BoundarySet& set, int kernel,
                                int stride) {
  if (kernel > input.height() || kernel > input.width()) {
    throw Error("apply_pbc_wholepatch: kernel exceeds the feature map");
  }
  if (set.boundaries.empty()) return input;

  const auto locations = boundary_locations(set, input.height(), input.width(), kernel, stride);
  PatchMatrix patches = unfold(input, kernel, stride);
  const std::size_t positions = patches.positions();
  const std::size_t rows = static_cast<std::size_t>(patches.batch) * patches.patch_length();
  for (const auto& [ratio, columns] : locations) {
    const float scale = static_cast<float>(ratio);
    for (std::size_t r = 0; r < rows; ++r) {
      float* row = patches.data.data() + r * positions;
      for (std::size_t col : columns) row[col] *= scale;
    }
  }
  FeatureMap out = fold(patches);
  const FeatureMap count = overlap_count(input.height(), input.width(), kernel, stride);
  auto cnt = count.plane(0, 0);
  for (int b = 0; b < out.batch(); ++b) {
    for (int c = 0; c < out.channels(); ++c) {
      auto plane = out.plane(b, c);
      for (std::size_t i = 0; i < plane.size(); ++i) plane[i] /= cnt[i];
    }
  }
  require_finite(out, "apply_pbc_wholepatch");
  return out;
}

std::vector<BoundaryLine> boundary_lines(const BoundarySet& set) {
  std::map<std::pair<Axis, int>, double> merged;
  for (const auto& vb : set.boundaries) {
    for (int pos : {vb.distance, vb.extent - vb.distance}) {
      auto [it, inserted] = merged.try_emplace({vb.axis, pos}, vb.ratio);
      if (!inserted) it->second = std::min(it->second, vb.ratio);
    }
  }
  std::vector<BoundaryLine> lines;
  lines.reserve(merged.size());
  for (const auto& [key, ratio] : merged) lines.push_back({key.first, key.second, ratio});
  return lines;
}

FeatureMap apply_pbc_crossboundary(const FeatureMap& input, const BoundarySet& set,
                                   const ConvSpec& spec) {
  check_set_geometry(set, input.height(), input.width());
  const auto lines = boundary_lines(set);
  return conv2d_with_lines(input, spec, lines);
}

}  // namespace padlab
