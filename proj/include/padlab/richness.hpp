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

// Content richness: split an image into k x k patches, embed each patch, and
// sum the pairwise cosine similarities over ordered pairs (i != j). Lower is
// more diverse; a grid of identical patches scores k^2 (k^2 - 1).

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "padlab/image_io.hpp"

namespace padlab {

using Embedding = std::vector<double>;

class PatchEmbedder {
 public:
  virtual ~PatchEmbedder() = default;
  virtual std::string_view name() const = 0;
  virtual Embedding embed(const Image& patch) const = 0;
};

/// Per-channel mean (3), per-channel std (3), and an 8-bin histogram of
/// luminance gradient magnitude over [0, sqrt(2)] (fractions of pixels).
class StatsEmbedder final : public PatchEmbedder {
 public:
  std::string_view name() const override { return "stats"; }
  Embedding embed(const Image& patch) const override;
};

/// 4x4x4 RGB colour histogram, L1-normalised.
class HistogramEmbedder final : public PatchEmbedder {
 public:
  std::string_view name() const override { return "histogram"; }
  Embedding embed(const Image& patch) const override;
};

std::unique_ptr<PatchEmbedder> make_embedder(std::string_view name);

/// k*k patches of floor(H/k) x floor(W/k), row-major; remainders dropped.
std::vector<Image> partition(const Image& image, int k);

Embedding embed(const Image& patch, const PatchEmbedder& embedder);

struct RichnessReport {
  int k = 0;
  std::string embedder;
  double score = 0.0;
  std::vector<double> pairwise;  // (k^2, k^2) cosines, row-major
};

/// Cosine matrix and S for an arbitrary list of embeddings.
RichnessReport score_embeddings(std::span<const Embedding> embeddings);

RichnessReport content_richness(const Image& image, int k, const PatchEmbedder& embedder);

}  // namespace padlab
