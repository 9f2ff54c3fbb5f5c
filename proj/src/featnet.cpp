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

#include "padlab/featnet.hpp"

#include <cmath>
#include <random>
#include <string>

#include "padlab/error.hpp"
#include "padlab/kernels.hpp"

namespace padlab {

void ToyNetConfig::validate() const {
  if (depth < 1 || channels < 1 || input_channels < 1) {
    throw Error("toy net: depth and channel counts must be >= 1");
  }
  if (kernel < 1 || kernel % 2 == 0) throw Error("toy net: kernel must be odd and positive");
  if (dilation < 1) throw Error("toy net: dilation must be >= 1");
  if (!layer_dilations.empty()) {
    if (layer_dilations.size() != static_cast<std::size_t>(depth)) {
      throw Error("toy net: need one dilation per layer");
    }
    for (int d : layer_dilations) {
      if (d < 1) throw Error("toy net: dilation must be >= 1");
    }
  }
  if (pbc) {
    if (pbc->count < 0) throw Error("toy net: PBC count must be >= 0");
    if (pbc->layers && *pbc->layers < 0) throw Error("toy net: PBC layer mask must be >= 0");
  }
  if (!trenches.empty() && region) {
    throw Error("toy net: trenches and a region intervention cannot be combined");
  }
}

ToyNet::ToyNet(ToyNetConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  std::mt19937_64 rng(cfg_.weight_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int layer = 0; layer < cfg_.depth; ++layer) {
    const int in = layer == 0 ? cfg_.input_channels : cfg_.channels;
    ConvSpec spec = ConvSpec::filled(in, cfg_.channels, cfg_.kernel, 0.0f, cfg_.padding);
    spec.dilation = cfg_.dilation_at(layer);
    const double scale = 1.0 / std::sqrt(static_cast<double>(in) * cfg_.kernel * cfg_.kernel);
    for (float& w : spec.weights) w = static_cast<float>(normal(rng) * scale);
    layers_.push_back(std::move(spec));
  }
}

ToyNet build_toynet(const ToyNetConfig& cfg) { return ToyNet(cfg); }

FeatureMap forward(const ToyNet& net, const FeatureMap& input) {
  const ToyNetConfig& cfg = net.config();
  if (input.channels() != cfg.input_channels) {
    throw Error("toy net: input has " + std::to_string(input.channels()) +
                " channels, network expects " + std::to_string(cfg.input_channels));
  }

  std::optional<BoundarySet> placed;
  if (cfg.pbc) {
    placed = cfg.pbc->fixed_boundaries
                 ? *cfg.pbc->fixed_boundaries
                 : place_boundaries(cfg.pbc->count, input.height(), input.width(), cfg.pbc->axes);
    placed->perturb_range = cfg.pbc->perturb_range;
    placed->seed = cfg.pbc->seed;
  }

  FeatureMap x = input;
  for (int layer = 0; layer < cfg.depth; ++layer) {
    const ConvSpec& spec = net.layers()[static_cast<std::size_t>(layer)];
    const bool use_pbc = placed && (!cfg.pbc->layers || layer < *cfg.pbc->layers);

    if (use_pbc) {
      const BoundarySet set = perturb_for_layer(*placed, layer);
      if (cfg.pbc->mode == PbcMode::WholePatch) {
        x = conv2d(apply_pbc_wholepatch(x, set, cfg.pbc->kernel, cfg.pbc->stride), spec);
      } else {
        x = apply_pbc_crossboundary(x, set, spec);
      }
    } else if (!cfg.trenches.empty()) {
      x = conv2d_with_trenches(x, spec, cfg.trenches);
    } else if (cfg.region) {
      x = conv2d_with_region(x, spec, cfg.region->region, cfg.region->ratio);
    } else {
      x = conv2d(x, spec);
    }
    auto data = x.data();
    kernels::active().relu(data.data(), data.size());
  }
  return x;
}

FeatureMap make_latent(int height, int width, std::uint64_t seed, int channels) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  FeatureMap out({1, channels, height, width});
  for (float& v : out.data()) v = static_cast<float>(normal(rng));
  return out;
}

}  // namespace padlab
