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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "padlab/error.hpp"
#include "padlab/image_io.hpp"
#include "padlab/richness.hpp"

using namespace padlab;
namespace fs = std::filesystem;

namespace {

Image noise(int h, int w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  Image img(h, w);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) img.at(c, y, x) = u(rng);
  return img;
}

// Sum of ordered-pair cosines computed directly.
double brute_score(const std::vector<Embedding>& e) {
  double s = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (i == j) continue;
      double d = 0, a = 0, b = 0;
      for (std::size_t t = 0; t < e[i].size(); ++t) {
        d += e[i][t] * e[j][t];
        a += e[i][t] * e[i][t];
        b += e[j][t] * e[j][t];
      }
      s += d / std::sqrt(a * b);
    }
  return s;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "padlab_richness_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("partition grid and remainder handling") {
  CHECK(partition(Image(9, 9), 3).size() == 9);
  const auto p = partition(noise(10, 11, 1), 3);
  REQUIRE(p.size() == 9);
  for (const Image& q : p) {
    CHECK(q.height() == 3);
    CHECK(q.width() == 3);
  }
  const Image src = noise(10, 11, 1);
  CHECK(p[5].at(2, 1, 2) == src.at(2, 3 + 1, 6 + 2));
  const auto tiny = partition(noise(2, 2, 2), 2);
  REQUIRE(tiny.size() == 4);
  CHECK(tiny[3].at(0, 0, 0) == noise(2, 2, 2).at(0, 1, 1));
  CHECK_THROWS_AS(partition(Image(4, 4), 5), Error);
  CHECK_THROWS_AS(partition(Image(4, 4), 1), Error);
}

TEST_CASE("stats embedding of a constant patch") {
  Image gray(5, 4, 0.4f);
  const Embedding e = StatsEmbedder().embed(gray);
  REQUIRE(e.size() == 14);
  for (int c = 0; c < 3; ++c) {
    CHECK(e[c] == doctest::Approx(0.4));
    CHECK(e[3 + c] == 0.0);
  }
  CHECK(e[6] == doctest::Approx(1.0));
  for (int b = 7; b < 14; ++b) CHECK(e[b] == 0.0);
}

TEST_CASE("embedders are deterministic and the histogram sees inversion") {
  const Image a = noise(8, 8, 3);
  Image inv(8, 8);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < 8; ++x) inv.at(c, y, x) = 1.0f - a.at(c, y, x);
  HistogramEmbedder hist;
  StatsEmbedder stats;
  CHECK(hist.embed(a) == hist.embed(a));
  CHECK(stats.embed(a) == stats.embed(a));
  const Embedding ha = hist.embed(a);
  const Embedding hi = hist.embed(inv);
  REQUIRE(ha.size() == 64);
  CHECK(ha != hi);
  double l1 = 0.0;
  for (double v : ha) l1 += v;
  CHECK(l1 == doctest::Approx(1.0));
  CHECK(make_embedder("histogram")->name() == "histogram");
  CHECK_THROWS_AS(make_embedder("clip"), Error);
}

TEST_CASE("solid image scores the maximum exactly") {
  for (const char* name : {"stats", "histogram"}) {
    const RichnessReport r = content_richness(Image(30, 30, 0.7f), 3, *make_embedder(name));
    CHECK(r.score == 72.0);
    CHECK(r.pairwise.size() == 81);
  }
}

TEST_CASE("orthogonal embeddings score zero") {
  std::vector<Embedding> e(9, Embedding(9, 0.0));
  for (int i = 0; i < 9; ++i) e[i][i] = 1.0 + i;
  CHECK(score_embeddings(e).score == 0.0);
}

TEST_CASE("score matches direct pairwise sums and obeys invariances") {
  const Image img = noise(24, 24, 5);
  StatsEmbedder stats;
  std::vector<Embedding> e;
  for (const Image& p : partition(img, 3)) e.push_back(stats.embed(p));
  const RichnessReport r = score_embeddings(e);
  CHECK(r.score == doctest::Approx(brute_score(e)).epsilon(1e-12));
  CHECK(r.score <= 72.0);
  CHECK(r.score >= -72.0);
  for (int i = 0; i < 9; ++i) {
    CHECK(r.pairwise[i * 9 + i] == doctest::Approx(1.0));
    for (int j = 0; j < 9; ++j) CHECK(r.pairwise[i * 9 + j] == r.pairwise[j * 9 + i]);
  }

  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Embedding> shuffled = e;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(score_embeddings(shuffled).score == doctest::Approx(r.score).epsilon(1e-12));
    std::vector<Embedding> scaled = e;
    for (auto& v : scaled[trial % 9]) v *= 3.5;
    CHECK(score_embeddings(scaled).score == doctest::Approx(r.score).epsilon(1e-12));
  }
}

TEST_CASE("repetition scores above noise") {
  const Image tile = noise(16, 16, 7);
  Image tiled(32, 32);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < 32; ++y)
      for (int x = 0; x < 32; ++x) tiled.at(c, y, x) = tile.at(c, y % 16, x % 16);
  for (const char* name : {"stats", "histogram"}) {
    const auto emb = make_embedder(name);
    const double s_tiled = content_richness(tiled, 2, *emb).score;
    CHECK(s_tiled == doctest::Approx(12.0));
    CHECK(s_tiled > content_richness(noise(32, 32, 8), 2, *emb).score);
  }
}

TEST_CASE("ppm round trip and clamping") {
  Image img = noise(5, 7, 9);
  img.at(0, 0, 0) = 1.0f;
  img.at(1, 0, 0) = 0.0f;
  const fs::path p = scratch("rt.ppm");
  write_ppm(p, img);
  const Image back = read_ppm(p);
  REQUIRE(back.height() == 5);
  REQUIRE(back.width() == 7);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < 7; ++x) CHECK(std::abs(back.at(c, y, x) - img.at(c, y, x)) <= 0.5f / 255 + 1e-6f);
  CHECK(back.at(0, 0, 0) == 1.0f);

  const Image clamped(1, 2, std::vector<float>{2.0f, -1.0f, 0.5f, 0.5f, 0.5f, 0.5f});
  CHECK(clamped.at(0, 0, 0) == 1.0f);
  CHECK(clamped.at(0, 0, 1) == 0.0f);
}

TEST_CASE("ppm header comments are accepted") {
  const fs::path p = scratch("comment.ppm");
  {
    std::ofstream out(p, std::ios::binary);
    out << "P6\n# made by hand\n2 1\n# depth\n255\n";
    const unsigned char px[6] = {255, 0, 0, 0, 0, 255};
    out.write(reinterpret_cast<const char*>(px), 6);
  }
  const Image img = read_ppm(p);
  CHECK(img.at(0, 0, 0) == 1.0f);
  CHECK(img.at(2, 0, 1) == 1.0f);
}

TEST_CASE("malformed images raise I/O errors") {
  CHECK_THROWS_AS(read_ppm(scratch("missing.ppm")), IoError);
  const fs::path bad = scratch("bad.ppm");
  {
    std::ofstream out(bad, std::ios::binary);
    out << "P3\n2 2\n255\n0 0 0";
  }
  CHECK_THROWS_AS(read_ppm(bad), IoError);
  const fs::path short_file = scratch("short.ppm");
  {
    std::ofstream out(short_file, std::ios::binary);
    out << "P6\n4 4\n255\n";
    out.write("abc", 3);
  }
  CHECK_THROWS_AS(read_ppm(short_file), IoError);
}

TEST_CASE("pgm round trip") {
  const std::vector<std::uint8_t> px{0, 10, 200, 255, 7, 9};
  const fs::path p = scratch("g.pgm");
  write_pgm(p, px, 2, 3);
  const GrayImage g = read_pgm(p);
  CHECK(g.height == 2);
  CHECK(g.width == 3);
  CHECK(g.pixels == px);
}
