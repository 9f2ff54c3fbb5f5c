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

// Convolutions with interior boundaries: bidirectional zero "trenches",
// attenuating lines, and one-sided region padding.

#include <span>
#include <vector>

#include "padlab/tensor.hpp"

namespace padlab {

/// Rows: the line runs between rows position-1 and position.
/// Cols: the line runs between columns position-1 and position.
enum class Axis { Rows, Cols };

/// Zero-width line that no convolution read may cross; both sides behave as
/// independently zero-padded images along `axis`.
struct TrenchSpec {
  Axis axis = Axis::Rows;
  int position = 1;
};

/// Line whose crossing reads are multiplied by `ratio` (0 = trench, 1 = no-op).
/// A read crossing several lines is scaled by the product of their ratios.
struct BoundaryLine {
  Axis axis = Axis::Rows;
  int position = 1;
  double ratio = 0.0;
};

enum class RegionSide {
  Inward,   // outputs inside the rectangle see outside reads attenuated
  Outward,  // outputs outside the rectangle see inside reads attenuated
};

struct RegionSpec {
  Rect rect;
  RegionSide side = RegionSide::Inward;
};

FeatureMap conv2d_with_trenches(const FeatureMap& input, const ConvSpec& spec,
                                std::span<const TrenchSpec> trenches);

FeatureMap conv2d_with_lines(const FeatureMap& input, const ConvSpec& spec,
                             std::span<const BoundaryLine> lines);

/// One-sided padding around `region`: for outputs on the designated side,
/// reads from the other side are multiplied by `ratio`. Outer borders still
/// follow `spec.padding`.
FeatureMap conv2d_with_region(const FeatureMap& input, const ConvSpec& spec,
                              const RegionSpec& region, double ratio);

}  // namespace padlab
