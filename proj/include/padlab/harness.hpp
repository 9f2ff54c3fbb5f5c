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

// Experiment grids over the toy network and the position probe, plus the
// richness scorer and feature-map dumps. Every experiment returns a report
// whose rows are emitted in a fixed grid order.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "padlab/featnet.hpp"
#include "padlab/pbc.hpp"
#include "padlab/probe.hpp"
#include "padlab/richness.hpp"

namespace padlab {

struct ExperimentConfig {
  std::string experiment;
  int size = 64;                      // base latent size s
  std::vector<int> sizes{64, 128};    // resolution grid; first = s, last = 2s
  int depth = 8;
  int channels = 16;
  int seed_count = 5;
  std::uint64_t base_seed = 0;
  FitConfig solver = ClosedFormSolver{};
  PbcMode pbc_mode = PbcMode::WholePatch;
  PbcAxes pbc_axes = PbcAxes::Both;
  std::optional<std::vector<int>> counts;  // N; resolution-grid uses the first, default 3
  std::vector<double> lambda_grid{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  int perturb_range = 0;
  int dilated_dilation = 2;
  PaddingMode padding = PaddingMode::Zero;  // dump-features
  std::vector<std::string> images;          // richness inputs
  int k = 3;
  std::string embedder = "stats";
  bool dump_pairwise = false;  // richness: keep the cosine matrix in JSON output

  std::uint64_t seed_at(int i) const { return base_seed + static_cast<std::uint64_t>(i); }
  std::vector<int> counts_or(std::vector<int> fallback) const {
    return counts ? *counts : std::move(fallback);
  }
  /// Throws Error on empty grids or out-of-range values.
  void validate() const;
};

struct LossRow {
  std::string experiment;
  std::string label;
  int size = 0;
  std::string region;
  int seed_count = 0;
  double loss_mean = 0.0;
  double loss_std = 0.0;
};

struct RichnessRow {
  std::string image;
  int k = 0;
  std::string embedder;
  double score = 0.0;
  std::vector<double> pairwise;
};

struct ExperimentReport {
  std::string experiment;
  std::vector<LossRow> rows;
  std::vector<RichnessRow> richness;
  std::vector<std::string> errors;  // per-item failures that did not stop the run
  std::vector<std::pair<std::string, std::string>> meta;

  const LossRow& row(const std::string& label, int size, const std::string& region) const;
};

/// Toy-net config for seed index `seed` of an experiment.
ToyNetConfig base_net_config(const ExperimentConfig& cfg, std::uint64_t seed);
/// Seeded input latent for an experiment seed.
FeatureMap experiment_latent(int size, std::uint64_t seed);

ExperimentReport run_padding_ablation(const ExperimentConfig& cfg);
ExperimentReport run_resolution_grid(const ExperimentConfig& cfg);
ExperimentReport run_lambda_ablation(const ExperimentConfig& cfg);
ExperimentReport run_n_ablation(const ExperimentConfig& cfg);
ExperimentReport run_richness(const ExperimentConfig& cfg);

/// Writes solid.ppm, tiled.ppm (2x2 repetition of one random tile) and
/// noise.ppm of size x size into `dir`; returns their paths.
std::vector<std::filesystem::path> generate_test_images(const std::filesystem::path& dir, int size,
                                                        std::uint64_t seed);

struct DumpBounds {
  double min = 0.0;
  double max = 0.0;
};
/// Channel-L2 magnitude per position (batch 0), min-max scaled to 8 bits, as P5.
/// Bounds go to `<path>.txt`.
DumpBounds dump_feature_map(const FeatureMap& features, const std::filesystem::path& path);

std::string to_csv(const ExperimentReport& report);
std::string to_json(const ExperimentReport& report);
/// Formatting shared by CSV and JSON so both carry identical values.
std::string format_value(double v);

}  // namespace padlab
