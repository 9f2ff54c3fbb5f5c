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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "padlab/error.hpp"
#include "padlab/harness.hpp"
#include "padlab/image_io.hpp"

using namespace padlab;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.size = 16;
  c.sizes = {16, 32};
  c.depth = 3;
  c.channels = 6;
  c.seed_count = 2;
  c.base_seed = 3;
  return c;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "padlab_harness_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PADLAB_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("padding ablation rows are complete and ordered") {
  const ExperimentReport r = run_padding_ablation(small_config());
  REQUIRE(r.rows.size() == 6);
  const char* labels[] = {"random-feature", "target-variance-floor", "zero", "reflect", "replicate",
                          "circular"};
  for (int i = 0; i < 6; ++i) {
    CHECK(r.rows[i].label == labels[i]);
    CHECK(r.rows[i].size == 16);
    CHECK(r.rows[i].region == "full");
    CHECK(r.rows[i].seed_count == 2);
    CHECK(std::isfinite(r.rows[i].loss_mean));
  }
  const double floor = r.row("target-variance-floor", 16, "full").loss_mean;
  CHECK(floor == doctest::Approx(target_variance(16, 16)));
  for (const auto& row : r.rows) CHECK(row.loss_mean <= floor + 0.01);
}

TEST_CASE("single seed gives zero spread") {
  ExperimentConfig c = small_config();
  c.seed_count = 1;
  for (const auto& row : run_padding_ablation(c).rows) CHECK(row.loss_std == 0.0);
}

TEST_CASE("resolution grid covers every method, size and region once") {
  const ExperimentReport r = run_resolution_grid(small_config());
  const std::vector<std::string> methods{"random",       "zero", "circular", "dilated-d2",
                                         "pbc-wholepatch N=3 r=0", "pbc-crossboundary N=3 r=0"};
  CHECK(r.rows.size() == methods.size() * 3);
  for (const auto& m : methods) {
    CHECK_NOTHROW(r.row(m, 16, "full"));
    CHECK_NOTHROW(r.row(m, 32, "full"));
    CHECK_NOTHROW(r.row(m, 32, "central-16-in-32"));
  }
  CHECK_THROWS(r.row("zero", 16, "central-16-in-32"));
  // circular nets carry no absolute position, so the centre matches random-like behaviour
  CHECK(r.row("circular", 32, "central-16-in-32").loss_mean ==
        r.row("zero", 32, "central-16-in-32").loss_mean);
}

TEST_CASE("lambda ablation coincides with its baselines") {
  ExperimentConfig c = small_config();
  c.sizes = {32};
  const ExperimentReport whole = run_lambda_ablation(c);
  CHECK(whole.rows.size() == 8);
  for (const auto& row : whole.rows) CHECK(std::isfinite(row.loss_mean));
  CHECK(std::abs(whole.row("lambda=1 wholepatch", 32, "full").loss_mean -
                 whole.row("no-boundary", 32, "full").loss_mean) <= 1e-6);

  c.pbc_mode = PbcMode::CrossBoundary;
  const ExperimentReport cross = run_lambda_ablation(c);
  CHECK(std::abs(cross.row("lambda=0 crossboundary", 32, "full").loss_mean -
                 cross.row("trench", 32, "full").loss_mean) <= 1e-6);
  CHECK(std::abs(cross.row("lambda=1 crossboundary", 32, "full").loss_mean -
                 cross.row("no-boundary", 32, "full").loss_mean) <= 1e-6);
}

TEST_CASE("boundary count ablation") {
  ExperimentConfig c = small_config();
  const ExperimentReport n = run_n_ablation(c);
  REQUIRE(n.rows.size() == 5);
  CHECK(n.rows[0].label == "N=0 wholepatch");
  CHECK(n.rows[0].size == 32);
  const ExperimentReport grid = run_resolution_grid(c);
  CHECK(n.rows[0].loss_mean == grid.row("zero", 32, "full").loss_mean);
  CHECK(to_csv(run_n_ablation(c)) == to_csv(n));
  c.counts = std::vector<int>{16};
  CHECK_THROWS_AS(run_n_ablation(c), Error);
}

TEST_CASE("reports are reproducible and CSV agrees with JSON") {
  const ExperimentConfig c = small_config();
  const ExperimentReport a = run_resolution_grid(c);
  const std::string csv = to_csv(a);
  CHECK(csv == to_csv(run_resolution_grid(c)));
  CHECK(csv.rfind("experiment,label,size,region,seed_count,loss_mean,loss_std\n", 0) == 0);

  const auto json = nlohmann::json::parse(to_json(a));
  CHECK(json["meta"]["experiment"] == "resolution-grid");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::size_t i = 0;
  while (std::getline(lines, line)) {
    const auto& row = json["rows"].at(i++);
    std::ostringstream rebuilt;
    rebuilt << row["experiment"].get<std::string>() << ',' << row["label"].get<std::string>() << ','
            << row["size"].get<int>() << ',' << row["region"].get<std::string>() << ','
            << row["seed_count"].get<int>() << ',' << format_value(row["loss_mean"].get<double>())
            << ',' << format_value(row["loss_std"].get<double>());
    CHECK(rebuilt.str() == line);
  }
  CHECK(i == json["rows"].size());
}

TEST_CASE("config validation") {
  ExperimentConfig c = small_config();
  c.seed_count = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = small_config();
  c.lambda_grid = {0.5, 1.5};
  CHECK_THROWS_AS(c.validate(), Error);
  c = small_config();
  c.sizes.clear();
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("richness over generated images") {
  const fs::path dir = scratch_dir("rich");
  const auto paths = generate_test_images(dir, 48, 5);
  REQUIRE(paths.size() == 3);
  ExperimentConfig c;
  for (const auto& p : paths) c.images.push_back(p.string());
  c.images.push_back(paths[0].string());
  c.images.push_back((dir / "missing.ppm").string());
  const ExperimentReport r = run_richness(c);
  REQUIRE(r.richness.size() == 4);
  CHECK(r.errors.size() == 1);
  CHECK(r.richness[0].score == 72.0);
  CHECK(r.richness[3].score == r.richness[0].score);
  c.k = 2;
  c.images = {paths[1].string(), paths[2].string()};
  const ExperimentReport k2 = run_richness(c);
  CHECK(k2.richness[0].score > k2.richness[1].score);
  CHECK(to_csv(k2).rfind("image,k,embedder,S\n", 0) == 0);
}

TEST_CASE("feature dumps") {
  const fs::path dir = scratch_dir("dump");
  const FeatureMap flat({1, 3, 6, 9}, 2.0f);
  dump_feature_map(flat, dir / "flat.pgm");
  const GrayImage g = read_pgm(dir / "flat.pgm");
  CHECK(g.height == 6);
  CHECK(g.width == 9);
  for (auto v : g.pixels) CHECK(v == g.pixels[0]);
  CHECK(fs::exists(dir / "flat.pgm.txt"));

  FeatureMap f({1, 2, 8, 10}, 1.0f);
  BoundarySet set;
  set.boundaries.push_back({Axis::Cols, 2, 0.0, 10});
  const DumpBounds b = dump_feature_map(apply_pbc_wholepatch(f, set, 1, 1), dir / "lines.pgm");
  CHECK(b.min == 0.0);
  const GrayImage lines = read_pgm(dir / "lines.pgm");
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 10; ++x) {
      const auto v = lines.pixels[static_cast<std::size_t>(y) * 10 + x];
      if (x == 2 || x == 7)
        CHECK(v == 0);
      else
        CHECK(v == 255);
    }
  CHECK(slurp(dir / "lines.pgm.txt").find("min 0") == 0);
  CHECK_THROWS_AS(dump_feature_map(f, dir / "no" / "such" / "dir.pgm"), IoError);
}

TEST_CASE("command line exit codes and outputs") {
  const fs::path dir = scratch_dir("cli");
  const std::string small = " --sizes 16,32 --size 16 --depth 2 --channels 4 --seeds 1";
  CHECK(run_cli("bogus") == 1);
  CHECK(run_cli("padding-ablation --seeds x") == 1);
  CHECK(run_cli("padding-ablation --seeds 0") == 1);
  CHECK(run_cli("richness") == 1);
  CHECK(run_cli("richness " + (dir / "absent.ppm").string()) == 3);
  CHECK(run_cli("padding-ablation" + small + " --out " + (dir / "no/such/x.csv").string()) == 3);
  CHECK(run_cli("n-ablation" + small + " --n 20") == 2);

  CHECK(run_cli("padding-ablation" + small + " --out " + (dir / "a.csv").string()) == 0);
  CHECK(run_cli("padding-ablation" + small + " --format json --out " + (dir / "a.json").string()) == 0);
  const auto json = nlohmann::json::parse(slurp(dir / "a.json"));
  CHECK(json["rows"].size() == 6);

  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "size=16\nsizes=[16,32]\ndepth=2\nchannels=4\nseeds=3\n";
  }
  CHECK(run_cli("padding-ablation --config " + (dir / "run.cfg").string() + " --seeds 1 --out " +
                (dir / "b.csv").string()) == 0);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));

  CHECK(run_cli("gen-test-images --size 24 --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "tiled.ppm"));
  CHECK(run_cli("richness --k 3 " + (dir / "solid.ppm").string() + " --out " + (dir / "r.csv").string()) ==
        0);
  CHECK(slurp(dir / "r.csv").find(",3,stats,72\n") != std::string::npos);
  CHECK(run_cli("dump-features --size 16 --depth 2 --channels 4 --out " + (dir / "f.pgm").string()) == 0);
  CHECK(read_pgm(dir / "f.pgm").width == 16);
  CHECK(run_cli("dump-features --size 16") == 1);
}

TEST_CASE("default-scale orderings of the grid experiments") {
  ExperimentConfig c;
  const ExperimentReport grid = run_resolution_grid(c);
  const double random = grid.row("random", 64, "full").loss_mean;
  for (const char* m : {"zero", "dilated-d2", "pbc-wholepatch N=3 r=0", "pbc-crossboundary N=3 r=0"})
    CHECK(random > grid.row(m, 64, "full").loss_mean);

  const ExperimentReport n = run_n_ablation(c);
  CHECK(n.rows[0].loss_mean == grid.row("zero", 128, "full").loss_mean);
  for (std::size_t i = 1; i < n.rows.size(); ++i) CHECK(n.rows[i].loss_mean <= n.rows[0].loss_mean + 0.005);
}
