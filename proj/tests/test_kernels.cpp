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

#include <cstring>
#include <random>

#include "padlab/kernels.hpp"
#include "padlab/tensor.hpp"
#include "test_util.hpp"

using namespace padlab;

namespace {

struct Buffers {
  std::vector<float> x;
  std::vector<double> gate, y, z;
};

Buffers make_buffers(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 3.0);
  Buffers b;
  for (std::size_t i = 0; i < n; ++i) {
    b.x.push_back(static_cast<float>(nd(rng)));
    b.gate.push_back(std::abs(nd(rng)) / 3.0);
    b.y.push_back(nd(rng));
    b.z.push_back(nd(rng));
  }
  return b;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("scalar reference is always available and selected variants agree bit for bit") {
  const auto& ref = kernels::table(kernels::Isa::Scalar);
  CHECK(kernels::available(kernels::Isa::Scalar));
  for (kernels::Isa isa : kernels::available_isas()) {
    CAPTURE(kernels::isa_name(isa));
    const auto& simd = kernels::table(isa);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 31u, 67u, 130u}) {
      CAPTURE(n);
      Buffers a = make_buffers(n, 100 + n);
      Buffers b = a;
      ref.axpy(0.37, a.x.data(), a.y.data(), n);
      simd.axpy(0.37, b.x.data(), b.y.data(), n);
      ref.axpy_gated(-1.3, a.x.data(), a.gate.data(), a.z.data(), n);
      simd.axpy_gated(-1.3, b.x.data(), b.gate.data(), b.z.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(same_bits(a.y[i], b.y[i]));
        CHECK(same_bits(a.z[i], b.z[i]));
      }
      CHECK(same_bits(ref.dot(a.y.data(), a.z.data(), n), simd.dot(a.y.data(), a.z.data(), n)));

      std::vector<float> r1 = a.x, r2 = a.x;
      if (n > 2) r1[1] = r2[1] = -0.0f;
      ref.relu(r1.data(), n);
      simd.relu(r2.data(), n);
      CHECK(std::memcmp(r1.data(), r2.data(), n * sizeof(float)) == 0);
    }
  }
}

TEST_CASE("dot uses the documented four-lane reduction order") {
  const double x[6] = {1e16, 1.0, -1e16, 1.0, 3.0, 5.0};
  const double y[6] = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  // lanes: (1e16 + 1) + (-1e16 + 1) = 0 + 0 ... then tail 3 + 5
  const double lane_order = ((1e16 + 1.0) + (-1e16 + 1.0)) + 3.0 + 5.0;
  CHECK(kernels::table(kernels::Isa::Scalar).dot(x, y, 6) == lane_order);
  CHECK(kernels::active().dot(x, y, 6) == lane_order);
}

TEST_CASE("relu clamps negatives and signed zero to +0") {
  float v[5] = {-2.0f, -0.0f, 0.0f, 1.5f, -1e-30f};
  kernels::active().relu(v, 5);
  CHECK(v[0] == 0.0f);
  CHECK_FALSE(std::signbit(v[1]));
  CHECK(v[3] == 1.5f);
  CHECK(v[4] == 0.0f);
}

TEST_CASE("conv2d output does not depend on the selected kernel variant") {
  const FeatureMap f = testing::random_map({2, 3, 11, 13}, 7);
  const ConvSpec spec = testing::random_spec(3, 4, 3, 2, PaddingMode::Reflect, 8);
  const kernels::Isa before = kernels::active().isa;
  kernels::select(kernels::Isa::Scalar);
  const FeatureMap ref = conv2d(f, spec);
  for (kernels::Isa isa : kernels::available_isas()) {
    kernels::select(isa);
    CHECK(conv2d(f, spec) == ref);
  }
  kernels::select(before);
}

TEST_CASE("selecting an unavailable variant throws") {
  for (kernels::Isa isa : {kernels::Isa::Avx2, kernels::Isa::Neon}) {
    if (!kernels::available(isa)) CHECK_THROWS(kernels::select(isa));
  }
}
