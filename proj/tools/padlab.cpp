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

// padlab: command-line runner for the padding / position-probe experiments.
//
//   padlab <experiment> [inputs...] [flags]
//
// Exit codes: 0 success, 1 usage error, 2 runtime or numeric error, 3 I/O error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "padlab/error.hpp"
#include "padlab/featnet.hpp"
#include "padlab/harness.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kRuntime = 2;
constexpr int kIo = 3;

const std::vector<std::string> kExperiments{"padding-ablation", "resolution-grid", "lambda-ablation",
                                            "n-ablation",       "richness",        "gen-test-images",
                                            "dump-features"};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw padlab::IoError("cannot open '" + out_path + "' for writing");
  out << text;
  if (!out) throw padlab::IoError("failed writing '" + out_path + "'");
}

int run(int argc, char** argv) {
  CLI::App app{"padlab - convolution padding and position-information experiments"};
  app.set_config("--config", "", "Flat key=value file with the same keys as the flags");

  std::string experiment;
  std::vector<std::string> inputs;
  padlab::ExperimentConfig cfg;
  std::string solver = "closed";
  double lr = padlab::AdamSolver{}.lr;
  int iterations = padlab::AdamSolver{}.iterations;
  double ridge = padlab::ClosedFormSolver{}.ridge;
  std::string pbc_mode = "wholepatch";
  std::string pbc_axes = "both";
  std::string padding = "zero";
  std::vector<int> counts;
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 0;
  int dilation = 1;

  app.add_option("experiment", experiment, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(kExperiments));
  app.add_option("inputs", inputs, "Input images (richness)");
  app.add_option("--size", cfg.size, "Base latent size")->capture_default_str();
  app.add_option("--sizes", cfg.sizes, "Latent sizes, base first")->delimiter(',')->capture_default_str();
  app.add_option("--depth", cfg.depth, "Toy network depth")->capture_default_str();
  app.add_option("--channels", cfg.channels, "Toy network width")->capture_default_str();
  app.add_option("--seeds", cfg.seed_count, "Number of seeds averaged")->capture_default_str();
  app.add_option("--seed", seed, "First seed")->capture_default_str();
  app.add_option("--solver", solver, "Probe solver")
      ->check(CLI::IsMember({"closed", "adam", "sgd"}))
      ->capture_default_str();
  app.add_option("--lr", lr, "Learning rate for adam/sgd")->capture_default_str();
  app.add_option("--iterations", iterations, "Iterations for adam/sgd")->capture_default_str();
  app.add_option("--ridge", ridge, "Ridge for the closed-form solver")->capture_default_str();
  app.add_option("--pbc-mode", pbc_mode, "Boundary application mode")
      ->check(CLI::IsMember({"wholepatch", "crossboundary"}))
      ->capture_default_str();
  app.add_option("--pbc-axes", pbc_axes, "Axes carrying virtual boundaries")
      ->check(CLI::IsMember({"both", "rows", "cols"}))
      ->capture_default_str();
  app.add_option("--n", counts, "Virtual boundaries per axis (list for n-ablation)")->delimiter(',');
  app.add_option("--lambda-grid", cfg.lambda_grid, "Ratios for lambda-ablation")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--r", cfg.perturb_range, "Boundary perturbation range in cells")
      ->capture_default_str();
  app.add_option("--dilation", dilation, "Dilation for dump-features")->capture_default_str();
  app.add_option("--padding", padding, "Padding mode for dump-features")
      ->check(CLI::IsMember({"zero", "reflect", "replicate", "circular"}))
      ->capture_default_str();
  app.add_option("--k", cfg.k, "Richness grid size")->capture_default_str();
  app.add_option("--embedder", cfg.embedder, "Richness patch embedder")
      ->check(CLI::IsMember({"stats", "histogram"}))
      ->capture_default_str();
  app.add_flag("--pairwise", cfg.dump_pairwise, "Include cosine matrices in JSON output");
  app.add_option("--out", out_path, "Output file (directory for gen-test-images)");
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  cfg.experiment = experiment;
  cfg.base_seed = seed;
  cfg.images = inputs;
  cfg.pbc_mode = padlab::parse_pbc_mode(pbc_mode);
  cfg.pbc_axes = padlab::parse_pbc_axes(pbc_axes);
  if (!counts.empty()) cfg.counts = counts;
  if (solver == "adam") {
    padlab::AdamSolver a;
    a.lr = lr;
    a.iterations = iterations;
    cfg.solver = a;
  } else if (solver == "sgd") {
    cfg.solver = padlab::SgdSolver{lr, iterations};
  } else {
    cfg.solver = padlab::ClosedFormSolver{ridge};
  }
  try {
    cfg.validate();
  } catch (const padlab::Error& e) {
    std::cerr << "padlab: " << e.what() << '\n';
    return kUsage;
  }

  if (experiment == "gen-test-images") {
    const auto paths = padlab::generate_test_images(out_path.empty() ? "." : out_path,
                                                    cfg.size, seed);
    for (const auto& p : paths) std::cout << p.string() << '\n';
    return 0;
  }
  if (experiment == "dump-features") {
    if (out_path.empty()) {
      std::cerr << "padlab: dump-features needs --out <file.pgm>\n";
      return kUsage;
    }
    padlab::ToyNetConfig net = padlab::base_net_config(cfg, seed);
    net.padding = padlab::parse_padding(padding);
    net.dilation = dilation;
    if (cfg.counts && cfg.counts->front() > 0) {
      padlab::PbcConfig p;
      p.count = cfg.counts->front();
      p.mode = cfg.pbc_mode;
      p.axes = cfg.pbc_axes;
      p.perturb_range = cfg.perturb_range;
      p.seed = seed;
      net.pbc = p;
    }
    const auto features =
        padlab::forward(padlab::build_toynet(net), padlab::experiment_latent(cfg.size, seed));
    const auto b = padlab::dump_feature_map(features, out_path);
    std::cout << "wrote " << out_path << " (" << cfg.size << "x" << cfg.size << ", min "
              << padlab::format_value(b.min) << ", max " << padlab::format_value(b.max) << ")\n";
    return 0;
  }

  padlab::ExperimentReport report;
  if (experiment == "padding-ablation") {
    report = padlab::run_padding_ablation(cfg);
  } else if (experiment == "resolution-grid") {
    report = padlab::run_resolution_grid(cfg);
  } else if (experiment == "lambda-ablation") {
    report = padlab::run_lambda_ablation(cfg);
  } else if (experiment == "n-ablation") {
    report = padlab::run_n_ablation(cfg);
  } else {
    if (cfg.images.empty()) {
      std::cerr << "padlab: richness needs at least one input image\n";
      return kUsage;
    }
    report = padlab::run_richness(cfg);
  }

  emit(format == "json" ? padlab::to_json(report) : padlab::to_csv(report), out_path);
  for (const auto& err : report.errors) std::cerr << "padlab: " << err << '\n';
  return report.errors.empty() ? 0 : kIo;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const padlab::IoError& e) {
    std::cerr << "padlab: " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "padlab: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "padlab: " << e.what() << '\n';
    return kRuntime;
  }
}
