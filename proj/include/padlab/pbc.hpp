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

// Progressive boundary complement: hierarchical virtual boundaries placed
// inside a feature map, applied either by scaling whole unfolded patches or by
// attenuating convolution reads that cross a boundary line.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "padlab/padmodes.hpp"
#include "padlab/tensor.hpp"

namespace padlab {

/// A symmetric pair of lines on one axis of size `extent`, at cell offsets
/// `distance` and `extent - 1 - distance` from the two real edges.
struct VirtualBoundary {
  Axis axis = Axis::Rows;
  int distance = 1;
  double ratio = 1.0;
  int extent = 2;

  int near_cell() const { return distance; }
  int far_cell() const { return extent - 1 - distance; }
  bool operator==(const VirtualBoundary&) const = default;
};

enum class PbcAxes { Both, RowsOnly, ColsOnly };
enum class PbcMode { WholePatch, CrossBoundary };

std::string_view pbc_mode_name(PbcMode mode);
PbcMode parse_pbc_mode(std::string_view name);
std::string_view pbc_axes_name(PbcAxes axes);
PbcAxes parse_pbc_axes(std::string_view name);

struct BoundarySet {
  std::vector<VirtualBoundary> boundaries;  // sorted by distance, then axis
  int count_per_axis = 0;
  int perturb_range = 0;
  std::uint64_t seed = 0;

  bool operator==(const BoundarySet&) const = default;
};

struct PbcConfig {
  int count = 3;
  PbcAxes axes = PbcAxes::Both;
  PbcMode mode = PbcMode::WholePatch;
  int kernel = 3;  // unfold window for whole-patch mode
  int stride = 1;
  int perturb_range = 0;
  std::uint64_t seed = 0;
  std::optional<int> layers;  // apply to the first `layers` layers only; all when empty
  // Replaces hierarchical placement when set (e.g. a single boundary of chosen ratio).
  std::optional<BoundarySet> fixed_boundaries;
};

/// Boundaries n = 1..count on every active axis with ratio n/(count+1) and
/// distance round-half-up(ratio * extent / 2), clamped to [1, ceil(extent/2) - 1].
BoundarySet place_boundaries(int count, int height, int width, PbcAxes axes);

/// Moves every boundary by an independent integer offset drawn uniformly from
/// [-r, r] (r = set.perturb_range), clamping to [1, ceil(extent/2) - 1].
/// Ratios are left untouched.
BoundarySet perturb(const BoundarySet& set, std::mt19937_64& rng);

/// Seed for boundary `boundary` at network layer `layer`.
std::uint64_t layer_seed(std::uint64_t global_seed, int layer, int boundary);

/// One fresh draw per boundary for `layer`, each from its own layer_seed stream.
BoundarySet perturb_for_layer(const BoundarySet& set, int layer);

/// Unfold column indices whose window centre lies on a boundary line, grouped
/// by ratio. A column hit by several boundaries keeps only the smallest ratio.
std::map<double, std::vector<std::size_t>> boundary_locations(const BoundarySet& set, int height,
                                                              int width, int kernel, int stride);

/// fold(scale(unfold(F))) / overlap_count, scaling boundary columns by their ratio.
FeatureMap apply_pbc_wholepatch(const FeatureMap& input, const BoundarySet& set, int kernel,
                                int stride);

/// Lines used by cross-boundary mode: the near line sits between cells
/// distance-1 and distance, the far line between extent-1-distance and
/// extent-distance. Coinciding lines keep the smaller ratio.
std::vector<BoundaryLine> boundary_lines(const BoundarySet& set);

/// Convolution whose reads across a boundary line are scaled by that line's ratio.
FeatureMap apply_pbc_crossboundary(const FeatureMap& input, const BoundarySet& set,
                                   const ConvSpec& spec);

}  // namespace padlab
