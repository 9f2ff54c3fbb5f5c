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

#include "padlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <string>

#include "padlab/error.hpp"
#include "padlab/image_io.hpp"
#include "padlab/kernels.hpp"

namespace padlab {
namespace {

constexpr const char* kFull = "full";

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a * 0x9e3779b97f4a7c15ULL + b;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string central_label(int inner, int outer) {
  return "central-" + std::to_string(inner) + "-in-" + std::to_string(outer);
}

Rect central_rect(int inner, int outer) {
  const int off = (outer - inner) / 2;
  return {off, off, inner, inner};
}

std::string fmt_ratio(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Per-seed losses for each grid cell, kept in first-seen order.
class Grid {
 public:
  explicit Grid(std::string experiment) : experiment_(std::move(experiment)) {}

  void add(const std::string& label, int size, const std::string& region, double loss) {
    for (auto& c : cells_) {
      if (c.label == label && c.size == size && c.region == region) {
        c.losses.push_back(loss);
        return;
      }
    }
    cells_.push_back({label, size, region, {loss}});
  }

  std::vector<LossRow> rows() const {
    std::vector<LossRow> out;
    for (const auto& c : cells_) {
      const double n = static_cast<double>(c.losses.size());
      double sum = 0.0;
      for (double v : c.losses) sum += v;
      const double mean = sum / n;
      double sq = 0.0;
      for (double v : c.losses) sq += (v - mean) * (v - mean);
      const double sd = c.losses.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
      out.push_back({experiment_, c.label, c.size, c.region, static_cast<int>(c.losses.size()),
                     mean, sd});
    }
    return out;
  }

 private:
  struct Cell {
    std::string label;
    int size;
    std::string region;
    std::vector<double> losses;
  };
  std::string experiment_;
  std::vector<Cell> cells_;
};

std::string solver_name(const FitConfig& solver) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        char buf[96];
        if constexpr (std::is_same_v<T, ClosedFormSolver>) {
          std::snprintf(buf, sizeof buf, "closed(ridge=%g)", s.ridge);
        } else if constexpr (std::is_same_v<T, AdamSolver>) {
          std::snprintf(buf, sizeof buf, "adam(lr=%g,iters=%d)", s.lr, s.iterations);
        } else {
          std::snprintf(buf, sizeof buf, "sgd(lr=%g,iters=%d)", s.lr, s.iterations);
        }
        return buf;
      },
      solver);
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

ExperimentReport make_report(const ExperimentConfig& cfg, const std::string& name,
                             const Grid& grid) {
  ExperimentReport rep;
  rep.experiment = name;
  rep.rows = grid.rows();
  std::string seeds;
  for (int i = 0; i < cfg.seed_count; ++i) seeds += (i ? ";" : "") + std::to_string(cfg.seed_at(i));
  rep.meta = {
      {"experiment", name},
      {"version", "padlab 1.0.0"},
      {"seeds", seeds},
      {"solver", solver_name(cfg.solver)},
      {"size", std::to_string(cfg.size)},
      {"sizes", join_ints(cfg.sizes)},
      {"depth", std::to_string(cfg.depth)},
      {"channels", std::to_string(cfg.channels)},
      {"pbc_mode", std::string(pbc_mode_name(cfg.pbc_mode))},
      {"pbc_axes", std::string(pbc_axes_name(cfg.pbc_axes))},
      {"perturb_range", std::to_string(cfg.perturb_range)},
      {"kernels", std::string(kernels::isa_name(kernels::active().isa))},
  };
  return rep;
}

double probe_loss(const FeatureMap& features, const FitConfig& solver) {
  return fit(features, make_position_map(features.height(), features.width()), solver).loss;
}

FeatureMap random_features(int channels, int size, std::uint64_t seed) {
  return make_latent(size, size, mix(seed, 0x52414e44ULL + static_cast<std::uint64_t>(size)),
                     channels);
}

PbcConfig pbc_config(const ExperimentConfig& cfg, std::uint64_t seed, int count, PbcMode mode) {
  PbcConfig p;
  p.count = count;
  p.axes = cfg.pbc_axes;
  p.mode = mode;
  p.perturb_range = cfg.perturb_range;
  p.seed = mix(seed, 0x504243ULL);
  return p;
}

FeatureMap run_net(const ToyNetConfig& net_cfg, const FeatureMap& latent) {
  return forward(build_toynet(net_cfg), latent);
}

// One boundary of ratio `ratio` at distance extent/4 on every active axis.
BoundarySet single_boundary(PbcAxes axes, int size, double ratio) {
  BoundarySet set;
  set.count_per_axis = 1;
  const int l = std::max(1, size / 4);
  if (axes != PbcAxes::ColsOnly) set.boundaries.push_back({Axis::Rows, l, ratio, size});
  if (axes != PbcAxes::RowsOnly) set.boundaries.push_back({Axis::Cols, l, ratio, size});
  return set;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (sizes.empty()) throw Error("config: sizes must not be empty");
  for (int s : sizes) {
    if (s < 8) throw Error("config: sizes must be >= 8");
  }
  if (size < 8) throw Error("config: size must be >= 8");
  if (depth < 1 || channels < 1) throw Error("config: depth and channels must be >= 1");
  if (seed_count < 1) throw Error("config: need at least one seed");
  if (lambda_grid.empty()) throw Error("config: lambda grid must not be empty");
  for (double l : lambda_grid) {
    if (!(l >= 0.0 && l <= 1.0)) throw Error("config: lambda values must lie in [0, 1]");
  }
  if (counts) {
    if (counts->empty()) throw Error("config: N grid must not be empty");
    for (int n : *counts) {
      if (n < 0) throw Error("config: N must be >= 0");
    }
  }
  if (perturb_range < 0) throw Error("config: perturbation range must be >= 0");
  if (dilated_dilation < 1) throw Error("config: dilation must be >= 1");
  if (k < 2) throw Error("config: k must be >= 2");
}

const LossRow& ExperimentReport::row(const std::string& label, int size,
                                     const std::string& region) const {
  for (const auto& r : rows) {
    if (r.label == label && r.size == size && r.region == region) return r;
  }
  throw Error("report has no row (" + label + ", " + std::to_string(size) + ", " + region + ")");
}

ToyNetConfig base_net_config(const ExperimentConfig& cfg, std::uint64_t seed) {
  ToyNetConfig net;
  net.depth = cfg.depth;
  net.channels = cfg.channels;
  net.weight_seed = mix(seed, 0x57474854ULL);
  return net;
}

FeatureMap experiment_latent(int size, std::uint64_t seed) {
  return make_latent(size, size, mix(seed, 0x4c4154ULL + static_cast<std::uint64_t>(size)));
}

ExperimentReport run_padding_ablation(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string name = "padding-ablation";
  Grid grid(name);
  const int s = cfg.size;
  for (int i = 0; i < cfg.seed_count; ++i) {
    const std::uint64_t seed = cfg.seed_at(i);
    const FeatureMap latent = experiment_latent(s, seed);
    grid.add("random-feature", s, kFull, probe_loss(random_features(cfg.channels, s, seed), cfg.solver));
    grid.add("target-variance-floor", s, kFull, target_variance(s, s));
    for (PaddingMode mode : {PaddingMode::Zero, PaddingMode::Reflect, PaddingMode::Replicate,
                             PaddingMode::Circular}) {
      ToyNetConfig net = base_net_config(cfg, seed);
      net.padding = mode;
      grid.add(std::string(padding_name(mode)), s, kFull, probe_loss(run_net(net, latent), cfg.solver));
    }
  }
  return make_report(cfg, name, grid);
}

ExperimentReport run_resolution_grid(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.sizes.size() < 2) throw Error("resolution-grid needs a base size and a larger size");
  const std::string name = "resolution-grid";
  const int base = cfg.sizes.front();
  for (int s : cfg.sizes) {
    if (s < base) throw Error("resolution-grid: the first size must be the smallest");
  }
  const int count = cfg.counts_or({3}).front();
  const std::string dilated = "dilated-d" + std::to_string(cfg.dilated_dilation);
  const std::string pbc_suffix = " N=" + std::to_string(count) + " r=" + std::to_string(cfg.perturb_range);

  struct Method {
    std::string label;
    std::function<std::optional<ToyNetConfig>(std::uint64_t)> net;  // empty = random features
  };
  std::vector<Method> methods;
  methods.push_back({"random", [](std::uint64_t) { return std::nullopt; }});
  methods.push_back({"zero", [&](std::uint64_t seed) {
                       return std::optional(base_net_config(cfg, seed));
                     }});
  methods.push_back({"circular", [&](std::uint64_t seed) {
                       auto n = base_net_config(cfg, seed);
                       n.padding = PaddingMode::Circular;
                       return std::optional(n);
                     }});
  methods.push_back({dilated, [&](std::uint64_t seed) {
                       auto n = base_net_config(cfg, seed);
                       n.dilation = cfg.dilated_dilation;
                       return std::optional(n);
                     }});
  for (PbcMode mode : {PbcMode::WholePatch, PbcMode::CrossBoundary}) {
    methods.push_back({"pbc-" + std::string(pbc_mode_name(mode)) + pbc_suffix,
                       [&, mode](std::uint64_t seed) {
                         auto n = base_net_config(cfg, seed);
                         n.pbc = pbc_config(cfg, seed, count, mode);
                         return std::optional(n);
                       }});
  }

  Grid grid(name);
  // Rows come out in first-seen order: method, then size, then region.
  for (int i = 0; i < cfg.seed_count; ++i) {
    const std::uint64_t seed = cfg.seed_at(i);
    for (const auto& m : methods) {
      for (int s : cfg.sizes) {
        const auto net = m.net(seed);
        const FeatureMap features =
            net ? run_net(*net, experiment_latent(s, seed)) : random_features(cfg.channels, s, seed);
        grid.add(m.label, s, kFull, probe_loss(features, cfg.solver));
        if (s > base) {
          grid.add(m.label, s, central_label(base, s),
                   fit_cropped(features, central_rect(base, s), cfg.solver).loss);
        }
      }
    }
  }
  return make_report(cfg, name, grid);
}

ExperimentReport run_lambda_ablation(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string name = "lambda-ablation";
  const int s = cfg.sizes.back();
  Grid grid(name);
  for (int i = 0; i < cfg.seed_count; ++i) {
    const std::uint64_t seed = cfg.seed_at(i);
    const FeatureMap latent = experiment_latent(s, seed);

    grid.add("no-boundary", s, kFull, probe_loss(run_net(base_net_config(cfg, seed), latent), cfg.solver));

    ToyNetConfig trench = base_net_config(cfg, seed);
    for (const auto& line : boundary_lines(single_boundary(cfg.pbc_axes, s, 0.0))) {
      trench.trenches.push_back({line.axis, line.position});
    }
    grid.add("trench", s, kFull, probe_loss(run_net(trench, latent), cfg.solver));

    for (double ratio : cfg.lambda_grid) {
      ToyNetConfig net = base_net_config(cfg, seed);
      PbcConfig p = pbc_config(cfg, seed, 1, cfg.pbc_mode);
      p.fixed_boundaries = single_boundary(cfg.pbc_axes, s, ratio);
      net.pbc = p;
      grid.add("lambda=" + fmt_ratio(ratio) + " " + std::string(pbc_mode_name(cfg.pbc_mode)), s,
               kFull, probe_loss(run_net(net, latent), cfg.solver));
    }
  }
  return make_report(cfg, name, grid);
}

ExperimentReport run_n_ablation(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string name = "n-ablation";
  const int s = cfg.sizes.back();
  const auto counts = cfg.counts_or({0, 1, 3, 5, 7});
  Grid grid(name);
  for (int i = 0; i < cfg.seed_count; ++i) {
    const std::uint64_t seed = cfg.seed_at(i);
    const FeatureMap latent = experiment_latent(s, seed);
    for (int n : counts) {
      ToyNetConfig net = base_net_config(cfg, seed);
      net.pbc = pbc_config(cfg, seed, n, cfg.pbc_mode);
      grid.add("N=" + std::to_string(n) + " " + std::string(pbc_mode_name(cfg.pbc_mode)), s, kFull,
               probe_loss(run_net(net, latent), cfg.solver));
    }
  }
  return make_report(cfg, name, grid);
}

ExperimentReport run_richness(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto embedder = make_embedder(cfg.embedder);
  ExperimentReport rep;
  rep.experiment = "richness";
  rep.meta = {{"experiment", "richness"},
              {"version", "padlab 1.0.0"},
              {"k", std::to_string(cfg.k)},
              {"embedder", cfg.embedder}};
  for (const auto& path : cfg.images) {
    try {
      const Image img = read_ppm(path);
      const RichnessReport r = content_richness(img, cfg.k, *embedder);
      rep.richness.push_back({path, cfg.k, cfg.embedder, r.score,
                              cfg.dump_pairwise ? r.pairwise : std::vector<double>{}});
    } catch (const Error& e) {
      rep.errors.push_back(path + ": " + e.what());
    }
  }
  return rep;
}

std::vector<std::filesystem::path> generate_test_images(const std::filesystem::path& dir, int size,
                                                        std::uint64_t seed) {
  if (size < 4 || size % 2 != 0) throw Error("gen-test-images: size must be even and >= 4");
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);

  Image solid(size, size);
  const float color[3] = {0.2f, 0.6f, 0.8f};
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) solid.at(c, y, x) = color[c];
    }
  }

  const int half = size / 2;
  Image tile(half, half);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < half; ++y) {
      for (int x = 0; x < half; ++x) tile.at(c, y, x) = unit(rng);
    }
  }
  Image tiled(size, size);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) tiled.at(c, y, x) = tile.at(c, y % half, x % half);
    }
  }

  Image noise(size, size);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) noise.at(c, y, x) = unit(rng);
    }
  }

  std::vector<std::filesystem::path> paths{dir / "solid.ppm", dir / "tiled.ppm", dir / "noise.ppm"};
  write_ppm(paths[0], solid);
  write_ppm(paths[1], tiled);
  write_ppm(paths[2], noise);
  return paths;
}

DumpBounds dump_feature_map(const FeatureMap& features, const std::filesystem::path& path) {
  const int h = features.height();
  const int w = features.width();
  std::vector<double> mag(static_cast<std::size_t>(h) * w, 0.0);
  for (int c = 0; c < features.channels(); ++c) {
    auto plane = features.plane(0, c);
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] += static_cast<double>(plane[i]) * plane[i];
  }
  for (double& m : mag) m = std::sqrt(m);
  DumpBounds b{*std::min_element(mag.begin(), mag.end()), *std::max_element(mag.begin(), mag.end())};

  std::vector<std::uint8_t> px(mag.size(), 0);
  if (b.max > b.min) {
    for (std::size_t i = 0; i < mag.size(); ++i) {
      px[i] = static_cast<std::uint8_t>(std::lround(255.0 * (mag[i] - b.min) / (b.max - b.min)));
    }
  }
  write_pgm(path, px, h, w);

  std::filesystem::path side = path;
  side += ".txt";
  std::ofstream out(side);
  if (!out) throw IoError("cannot open '" + side.string() + "' for writing");
  out << "min " << format_value(b.min) << "\nmax " << format_value(b.max) << '\n';
  if (!out) throw IoError("failed writing '" + side.string() + "'");
  return b;
}

}  // namespace padlab
