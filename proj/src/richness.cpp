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

#include "padlab/richness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "padlab/error.hpp"

namespace padlab {

Embedding StatsEmbedder::embed(const Image& patch) const {
  const int h = patch.height();
  const int w = patch.width();
  const double n = static_cast<double>(h) * w;
  Embedding out(14, 0.0);
  for (int c = 0; c < 3; ++c) {
    double sum = 0.0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) sum += patch.at(c, y, x);
    }
    const double mean = sum / n;
    double sq = 0.0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double d = patch.at(c, y, x) - mean;
        sq += d * d;
      }
    }
    out[c] = mean;
    out[3 + c] = std::sqrt(sq / n);
  }

  auto luma = [&](int y, int x) {
    return 0.299 * patch.at(0, y, x) + 0.587 * patch.at(1, y, x) + 0.114 * patch.at(2, y, x);
  };
  constexpr int kBins = 8;
  const double bin_width = std::numbers::sqrt2 / kBins;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Forward differences; the last row/column repeats its edge.
      const double gy = luma(std::min(y + 1, h - 1), x) - luma(y, x);
      const double gx = luma(y, std::min(x + 1, w - 1)) - luma(y, x);
      const int bin = std::min(kBins - 1, static_cast<int>(std::hypot(gx, gy) / bin_width));
      out[6 + bin] += 1.0 / n;
    }
  }
  return out;
}

Embedding HistogramEmbedder::embed(const Image& patch) const {
  Embedding out(64, 0.0);
  const int h = patch.height();
  const int w = patch.width();
  auto level = [](float v) { return std::min(3, static_cast<int>(v * 4.0f)); };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int bin = level(patch.at(0, y, x)) * 16 + level(patch.at(1, y, x)) * 4 +
                      level(patch.at(2, y, x));
      out[bin] += 1.0;
    }
  }
  const double total = static_cast<double>(h) * w;
  for (double& v : out) v /= total;
  return out;
}

std::unique_ptr<PatchEmbedder> make_embedder(std::string_view name) {
  if (name == "stats") return std::make_unique<StatsEmbedder>();
  if (name == "histogram") return std::make_unique<HistogramEmbedder>();
  throw Error("unknown embedder '" + std::string(name) + "'");
}

std::vector<Image> partition(const Image& image, int k) {
  if (k < 2) throw Error("partition: k must be >= 2");
  if (k > image.height() || k > image.width()) {
    throw Error("partition: k = " + std::to_string(k) + " exceeds image size " +
                std::to_string(image.height()) + "x" + std::to_string(image.width()));
  }
  const int ph = image.height() / k;
  const int pw = image.width() / k;
  std::vector<Image> patches;
  patches.reserve(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) patches.push_back(image.region(i * ph, j * pw, ph, pw));
  }
  return patches;
}

Embedding embed(const Image& patch, const PatchEmbedder& embedder) {
  Embedding e = embedder.embed(patch);
  if (e.empty() || !std::all_of(e.begin(), e.end(), [](double v) { return std::isfinite(v); })) {
    throw NumericError("embedder '" + std::string(embedder.name()) + "' produced an invalid vector");
  }
  return e;
}

RichnessReport score_embeddings(std::span<const Embedding> embeddings) {
  const std::size_t m = embeddings.size();
  std::vector<double> sq(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (double v : embeddings[i]) sq[i] += v * v;
  }
  RichnessReport rep;
  rep.pairwise.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (embeddings[i].size() != embeddings[j].size()) throw Error("embedding lengths differ");
      double dot = 0.0;
      for (std::size_t t = 0; t < embeddings[i].size(); ++t) dot += embeddings[i][t] * embeddings[j][t];
      // sqrt(a*b) rather than sqrt(a)*sqrt(b): identical vectors give exactly 1.
      const double denom = std::max(std::sqrt(sq[i] * sq[j]), 1e-12);
      rep.pairwise[i * m + j] = std::clamp(dot / denom, -1.0, 1.0);
    }
  }
  // Fixed i-major order keeps S independent of how embeddings were computed.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) rep.score += rep.pairwise[i * m + j];
    }
  }
  return rep;
}

RichnessReport content_richness(const Image& image, int k, const PatchEmbedder& embedder) {
  const auto patches = partition(image, k);
  std::vector<Embedding> emb;
  emb.reserve(patches.size());
  for (const auto& p : patches) emb.push_back(embed(p, embedder));
  RichnessReport rep = score_embeddings(emb);
  rep.k = k;
  rep.embedder = std::string(embedder.name());
  return rep;
}

}  // namespace padlab
