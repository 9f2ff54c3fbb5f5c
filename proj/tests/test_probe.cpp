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

#include <numeric>
#include <random>

#include "padlab/error.hpp"
#include "padlab/featnet.hpp"
#include "padlab/probe.hpp"
#include "test_util.hpp"

using namespace padlab;

namespace {

FeatureMap normal_features(int c, int h, int w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  FeatureMap f({1, c, h, w});
  for (float& v : f.data()) v = static_cast<float>(nd(rng));
  return f;
}

// Mean squared deviation of the coordinate grid, by enumeration. Coordinates
// are rounded to float like the stored target.
double grid_variance(int h, int w, bool stored = true) {
  double total = 0.0;
  for (int axis = 0; axis < 2; ++axis) {
    const int n = axis == 0 ? h : w;
    auto coord = [&](int i) {
      const double v = double(i) / (n - 1);
      return stored ? double(static_cast<float>(v)) : v;
    };
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += coord(i);
    mean /= n;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) ss += (coord(i) - mean) * (coord(i) - mean);
    total += ss / n;
  }
  return total / 2.0;
}

// Direct residual pass over a rectangle.
double direct_mse(const ProbeModel& m, const FeatureMap& f, const PositionMap& t, const Rect& r) {
  double ss = 0.0;
  std::vector<double> v(static_cast<std::size_t>(f.channels()));
  for (int y = r.top; y < r.top + r.height; ++y)
    for (int x = r.left; x < r.left + r.width; ++x) {
      for (int c = 0; c < f.channels(); ++c) v[c] = f.at(0, c, y, x);
      for (int k = 0; k < 2; ++k) {
        const double e = m.predict(k, v) - t.map().at(0, k, y, x);
        ss += e * e;
      }
    }
  return ss / (2.0 * r.height * r.width);
}

}  // namespace

TEST_CASE("position map examples") {
  const PositionMap p2 = make_position_map(2, 2);
  CHECK(p2.map().at(0, 0, 0, 0) == 0.0f);
  CHECK(p2.map().at(0, 0, 1, 0) == 1.0f);
  CHECK(p2.map().at(0, 1, 0, 1) == 1.0f);
  const PositionMap p3 = make_position_map(3, 5);
  CHECK(p3.map().at(0, 0, 1, 4) == 0.5f);
  CHECK(p3.map().at(0, 0, 2, 0) == 1.0f);
  CHECK(p3.map().at(0, 1, 2, 4) == 1.0f);
  CHECK(p3.map().at(0, 1, 0, 0) == 0.0f);
  CHECK_THROWS_AS(make_position_map(1, 4), Error);
}

TEST_CASE("target variance matches grid enumeration") {
  for (auto [h, w] : {std::pair{2, 2}, {3, 7}, {64, 64}, {128, 64}})
    CHECK(target_variance(h, w) == doctest::Approx(grid_variance(h, w, false)).epsilon(1e-12));
}

TEST_CASE("identity features are recovered exactly") {
  const PositionMap t = make_position_map(16, 12);
  const ProbeResult r = fit_closed_form(t.map(), t, 0.0);
  CHECK(r.loss <= 1e-10);
  CHECK(fit_closed_form(t.map(), t).loss <= 1e-10);
}

TEST_CASE("random features sit at the variance floor") {
  const PositionMap t = make_position_map(64, 64);
  const ProbeResult r = fit_closed_form(normal_features(8, 64, 64, 1), t);
  CHECK(r.loss >= 0.06);
  CHECK(r.loss <= 0.09);
  CHECK(r.loss <= grid_variance(64, 64));
}

TEST_CASE("constant features give exactly the target variance") {
  const PositionMap t = make_position_map(20, 30);
  const FeatureMap f({1, 3, 20, 30}, 2.5f);
  CHECK(fit_closed_form(f, t, 1e-8).loss == doctest::Approx(grid_variance(20, 30)).epsilon(1e-12));
  CHECK_THROWS_AS(fit_closed_form(f, t, 0.0), NumericError);
}

TEST_CASE("closed-form residual is orthogonal to every feature") {
  const PositionMap t = make_position_map(24, 24);
  const FeatureMap f = forward(build_toynet([] {
                                 ToyNetConfig c;
                                 c.depth = 3;
                                 c.channels = 6;
                                 c.weight_seed = 5;
                                 return c;
                               }()),
                               make_latent(24, 24, 6));
  const ProbeResult r = fit_closed_form(f, t, 0.0);
  CHECK(r.loss == doctest::Approx(direct_mse(r.model, f, t, {0, 0, 24, 24})).epsilon(1e-9));
  std::vector<double> v(6);
  for (int k = 0; k < 2; ++k) {
    std::vector<double> g(7, 0.0);
    for (int y = 0; y < 24; ++y)
      for (int x = 0; x < 24; ++x) {
        for (int c = 0; c < 6; ++c) v[c] = f.at(0, c, y, x);
        const double e = r.model.predict(k, v) - t.map().at(0, k, y, x);
        for (int c = 0; c < 6; ++c) g[c] += e * v[c];
        g[6] += e;
      }
    for (double gi : g) CHECK(std::abs(gi) / (24 * 24) < 1e-8);
  }
}

TEST_CASE("Adam recovers the identity map") {
  const PositionMap t = make_position_map(16, 16);
  const ProbeResult r = fit_iterative(t.map(), t, AdamSolver{});
  CHECK(r.loss <= 1e-4);
  CHECK(r.loss_curve.size() == 5000);
}

TEST_CASE("iterative fits never beat the closed form") {
  const PositionMap t = make_position_map(16, 16);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const FeatureMap f = normal_features(5, 16, 16, seed);
    const double oracle = fit_closed_form(f, t, 0.0).loss;
    CHECK(fit_iterative(f, t, AdamSolver{}).loss >= oracle - 1e-6);
    CHECK(fit_iterative(f, t, SgdSolver{0.05, 500}).loss >= oracle - 1e-6);
  }
}

TEST_CASE("zero learning rate keeps the zero model") {
  const PositionMap t = make_position_map(10, 10);
  const FeatureMap f = normal_features(3, 10, 10, 2);
  const ProbeModel zero{3, std::vector<double>(6, 0.0), {0.0, 0.0}};
  const double want = direct_mse(zero, f, t, {0, 0, 10, 10});
  for (FitConfig cfg : {FitConfig{AdamSolver{0.0, 50}}, FitConfig{SgdSolver{0.0, 50}}}) {
    const ProbeResult r = fit(f, t, cfg);
    CHECK(r.loss == doctest::Approx(want).epsilon(1e-12));
    for (double l : r.loss_curve) CHECK(l == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("divergence is reported with the iteration") {
  const PositionMap t = make_position_map(10, 10);
  FeatureMap f = normal_features(3, 10, 10, 3);
  for (float& v : f.data()) v *= 1000.0f;
  try {
    fit_iterative(f, t, SgdSolver{10.0, 2000});
    FAIL("expected divergence");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("iteration") != std::string::npos);
  }
  CHECK_THROWS_AS(fit_iterative(f, t, ClosedFormSolver{}), Error);
  CHECK_THROWS_AS(fit_iterative(f, t, AdamSolver{1e-3, 0}), Error);
}

TEST_CASE("region losses decompose the global loss") {
  const PositionMap t = make_position_map(12, 16);
  const FeatureMap f = normal_features(4, 12, 16, 4);
  ProbeResult r = fit_closed_form(f, t);
  CHECK(eval_region(r, f, t, {0, 0, 12, 16}) == doctest::Approx(r.loss).epsilon(1e-12));
  const double top = eval_region(r, f, t, {0, 0, 5, 16});
  const double bottom = eval_region(r, f, t, {5, 0, 7, 16});
  CHECK((5 * top + 7 * bottom) / 12 == doctest::Approx(r.loss).epsilon(1e-12));
  CHECK(top == doctest::Approx(direct_mse(r.model, f, t, {0, 0, 5, 16})).epsilon(1e-12));
  add_region_loss(r, f, t, {2, 3, 4, 4});
  REQUIRE(r.region_losses.size() == 1);
  CHECK(r.region_losses[0].region == Rect{2, 3, 4, 4});
  CHECK_THROWS_AS(eval_region(r, f, t, {0, 0, 0, 3}), Error);
  CHECK_THROWS_AS(eval_region(r, f, t, {10, 0, 4, 3}), Error);
}

TEST_CASE("probe loss ignores channel order and scale") {
  const PositionMap t = make_position_map(20, 20);
  const FeatureMap f = forward(build_toynet([] {
                                 ToyNetConfig c;
                                 c.depth = 2;
                                 c.channels = 5;
                                 c.weight_seed = 9;
                                 return c;
                               }()),
                               make_latent(20, 20, 10));
  const double base = fit_closed_form(f, t, 0.0).loss;
  FeatureMap perm(f.dims());
  const int order[] = {3, 0, 4, 1, 2};
  for (int c = 0; c < 5; ++c)
    for (int y = 0; y < 20; ++y)
      for (int x = 0; x < 20; ++x) perm.at(0, c, y, x) = f.at(0, order[c], y, x);
  CHECK(fit_closed_form(perm, t, 0.0).loss == doctest::Approx(base).epsilon(1e-9));
  FeatureMap scaled = f;
  for (float& v : scaled.data()) v *= -4.0f;
  CHECK(fit_closed_form(scaled, t, 0.0).loss == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("cropped refit uses a crop-normalised target") {
  const PositionMap t = make_position_map(16, 16);
  const FeatureMap full = t.map();
  // identity features restricted to a crop are still affine in the crop's own coordinates
  CHECK(fit_cropped(full, {4, 4, 8, 8}, ClosedFormSolver{0.0}).loss <= 1e-10);
  const FeatureMap flat({1, 2, 16, 16}, 1.0f);
  CHECK(fit_cropped(flat, {4, 4, 8, 8}, ClosedFormSolver{}).loss ==
        doctest::Approx(grid_variance(8, 8)).epsilon(1e-12));
}

TEST_CASE("zero-padded net loses position in the centre of a doubled map") {
  ToyNetConfig cfg;
  cfg.weight_seed = 21;
  const ToyNet net = build_toynet(cfg);
  const FeatureMap f = forward(net, make_latent(128, 128, 22));
  const PositionMap t = make_position_map(128, 128);
  const double whole = fit_closed_form(f, t).loss;
  const double central = fit_cropped(f, {32, 32, 64, 64}, ClosedFormSolver{}).loss;
  CHECK(central > whole);
}
