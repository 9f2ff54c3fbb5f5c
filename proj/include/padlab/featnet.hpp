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

// Deterministic randomly-initialised conv/ReLU stack used as a feature
// extractor for the position probe.

#include <cstdint>
#include <optional>
#include <vector>

#include "padlab/padmodes.hpp"
#include "padlab/pbc.hpp"
#include "padlab/tensor.hpp"

namespace padlab {

struct RegionIntervention {
  RegionSpec region;
  double ratio = 0.0;
};

struct ToyNetConfig {
  int depth = 8;
  int channels = 16;
  int input_channels = 4;
  int kernel = 3;
  PaddingMode padding = PaddingMode::Zero;
  int dilation = 1;
  std::vector<int> layer_dilations;  // overrides `dilation` per layer when non-empty
  std::uint64_t weight_seed = 0;
  std::optional<PbcConfig> pbc;
  std::vector<TrenchSpec> trenches;             // applied at every layer
  std::optional<RegionIntervention> region;     // applied at every layer

  void validate() const;
  int dilation_at(int layer) const {
    return layer_dilations.empty() ? dilation : layer_dilations[static_cast<std::size_t>(layer)];
  }
};

class ToyNet {
 public:
  explicit ToyNet(ToyNetConfig cfg);

  const ToyNetConfig& config() const { return cfg_; }
  const std::vector<ConvSpec>& layers() const { return layers_; }

 private:
  ToyNetConfig cfg_;
  std::vector<ConvSpec> layers_;
};

/// Weights i.i.d. normal with std 1/sqrt(C_in * K^2), biases zero.
ToyNet build_toynet(const ToyNetConfig& cfg);

/// depth x ([PBC], conv, ReLU). Output has cfg.channels channels and the input's size.
FeatureMap forward(const ToyNet& net, const FeatureMap& input);

/// Seeded standard-normal latent of shape (1, channels, height, width).
FeatureMap make_latent(int height, int width, std::uint64_t seed, int channels = 4);

}  // namespace padlab
