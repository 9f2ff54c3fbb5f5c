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

// Linear position probe: one affine map shared across all positions, fitted
// from feature channels to normalised (row, col) coordinates. Its residual MSE
// measures how much absolute position the features carry.

#include <variant>
#include <vector>

#include "padlab/tensor.hpp"

namespace padlab {

/// (1, 2, H, W): channel 0 = row / (H-1), channel 1 = col / (W-1).
class PositionMap {
 public:
  PositionMap(int height, int width);

  const FeatureMap& map() const { return map_; }
  int height() const { return map_.height(); }
  int width() const { return map_.width(); }

 private:
  FeatureMap map_;
};

PositionMap make_position_map(int height, int width);

struct ProbeModel {
  int channels = 0;
  std::vector<double> weight;  // (2, channels)
  std::vector<double> bias;    // (2)

  double predict(int coord, std::span<const double> features) const;
};

struct ClosedFormSolver {
  double ridge = 1e-8;
};

struct AdamSolver {
  double lr = 1e-3;
  int iterations = 5000;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct SgdSolver {
  double lr = 0.1;
  int iterations = 5000;
};

using FitConfig = std::variant<ClosedFormSolver, AdamSolver, SgdSolver>;

struct RegionLoss {
  Rect region;
  double loss = 0.0;
};

struct ProbeResult {
  ProbeModel model;
  double loss = 0.0;  // mean over both coordinates and all positions
  std::vector<RegionLoss> region_losses;
  std::vector<double> loss_curve;  // iterative solvers only
};

/// Exact minimiser of MSE + ridge * ||weight||^2 (bias unpenalised).
/// Throws NumericError when the normal equations are singular.
ProbeResult fit_closed_form(const FeatureMap& features, const PositionMap& target,
                            double ridge = 1e-8);

/// Full-batch Adam or gradient descent from a zero model. Throws NumericError
/// naming the iteration if the loss stops being finite.
ProbeResult fit_iterative(const FeatureMap& features, const PositionMap& target,
                          const FitConfig& cfg);

ProbeResult fit(const FeatureMap& features, const PositionMap& target, const FitConfig& cfg);

/// MSE of an already-fitted model over the positions of `region`.
double eval_region(const ProbeResult& result, const FeatureMap& features,
                   const PositionMap& target, const Rect& region);

/// eval_region, recorded into result.region_losses.
double add_region_loss(ProbeResult& result, const FeatureMap& features, const PositionMap& target,
                       const Rect& region);

/// Crops features to `region` and fits a fresh probe against a position map
/// normalised over the crop itself.
ProbeResult fit_cropped(const FeatureMap& features, const Rect& region, const FitConfig& cfg);

/// Per-coordinate variance of a normalised grid, averaged over both coordinates:
/// the loss of the best constant predictor.
double target_variance(int height, int width);

}  // namespace padlab
