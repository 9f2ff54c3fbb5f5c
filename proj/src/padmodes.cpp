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

#include "padlab/padmodes.hpp"

#include <algorithm>
#include <string>

#include "conv_internal.hpp"
#include "padlab/error.hpp"

namespace padlab {
namespace {

int extent_of(const FeatureMap& f, Axis axis) {
  return axis == Axis::Rows ? f.height() : f.width();
}

// factor[tap offset index][o]: product of ratios of the lines crossed by a read
// from output coordinate o to o + offset along one axis.
std::vector<std::vector<double>> axis_factors(const ConvSpec& spec, int extent,
                                              const std::vector<BoundaryLine>& lines) {
  const int k = spec.kernel_size;
  const int half = k / 2;
  std::vector<std::vector<double>> f(static_cast<std::size_t>(k),
                                     std::vector<double>(static_cast<std::size_t>(extent), 1.0));
  for (int t = 0; t < k; ++t) {
    const int off = (t - half) * spec.dilation;
    for (int o = 0; o < extent; ++o) {
      const int lo = std::min(o, o + off);
      const int hi = std::max(o, o + off);
      double v = 1.0;
      for (const auto& line : lines) {
        if (lo < line.position && line.position <= hi) v *= line.ratio;
      }
      f[t][o] = v;
    }
  }
  return f;
}

}  // namespace

FeatureMap conv2d_with_lines(const FeatureMap& input, const ConvSpec& spec,
                             std::span<const BoundaryLine> lines) {
  std::vector<BoundaryLine> rows;
  std::vector<BoundaryLine> cols;
  for (const auto& line : lines) {
    const int extent = extent_of(input, line.axis);
    if (line.position <= 0 || line.position >= extent) {
      throw Error("boundary line at " + std::to_string(line.position) +
                  " must lie strictly inside an axis of size " + std::to_string(extent));
    }
    if (!(line.ratio >= 0.0 && line.ratio <= 1.0)) {
      throw Error("boundary line ratio must lie in [0, 1]");
    }
    (line.axis == Axis::Rows ? rows : cols).push_back(line);
  }
  if (rows.empty() && cols.empty()) return conv2d(input, spec);
  spec.validate();

  const auto fy = axis_factors(spec, input.height(), rows);
  const auto fx = axis_factors(spec, input.width(), cols);
  const int k = spec.kernel_size;
  detail::ReadGate gate{k, input.height(), input.width(), {}};
  gate.values.resize(static_cast<std::size_t>(k) * k * input.height() * input.width());
  std::size_t i = 0;
  for (int ky = 0; ky < k; ++ky) {
    for (int kx = 0; kx < k; ++kx) {
      for (int oy = 0; oy < input.height(); ++oy) {
        for (int ox = 0; ox < input.width(); ++ox) gate.values[i++] = fy[ky][oy] * fx[kx][ox];
      }
    }
  }
  return detail::conv2d_gated(input, spec, &gate);
}

FeatureMap conv2d_with_trenches(const FeatureMap& input, const ConvSpec& spec,
                                std::span<const TrenchSpec> trenches) {
  std::vector<BoundaryLine> lines;
  lines.reserve(trenches.size());
  for (const auto& t : trenches) {
    const int extent = extent_of(input, t.axis);
    if (t.position <= 0 || t.position >= extent) {
      throw Error("trench at " + std::to_string(t.position) +
                  " coincides with or lies beyond the border of an axis of size " +
                  std::to_string(extent));
    }
    lines.push_back({t.axis, t.position, 0.0});
  }
  return conv2d_with_lines(input, spec, lines);
}

FeatureMap conv2d_with_region(const FeatureMap& input, const ConvSpec& spec,
                              const RegionSpec& region, double ratio) {
  const Rect& r = region.rect;
  if (r.height < 1 || r.width < 1 || r.top < 0 || r.left < 0 ||
      r.top + r.height > input.height() || r.left + r.width > input.width()) {
    throw Error("region rectangle lies outside the feature map");
  }
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw Error("region ratio must lie in [0, 1]");
  spec.validate();

  const bool inward = region.side == RegionSide::Inward;
  auto factor = [&](int oy, int ox, int iy, int ix) {
    const bool out_inside = r.contains(oy, ox);
    const bool read_inside = r.contains(iy, ix);
    if (inward) return (out_inside && !read_inside) ? ratio : 1.0;
    return (!out_inside && read_inside) ? ratio : 1.0;
  };
  const auto gate = detail::make_gate(spec, input.height(), input.width(), factor);
  return detail::conv2d_gated(input, spec, &gate);
}

}  // namespace padlab
