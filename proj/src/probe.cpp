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

#include "padlab/probe.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "padlab/error.hpp"
#include "padlab/kernels.hpp"

namespace padlab {
namespace {

constexpr int kCoords = 2;

void check_pair(const FeatureMap& features, const PositionMap& target) {
  if (features.batch() != 1) throw Error("probe: features must have batch size 1");
  if (features.height() != target.height() || features.width() != target.width()) {
    throw Error("probe: feature map is " + std::to_string(features.height()) + "x" +
                std::to_string(features.width()) + " but target is " +
                std::to_string(target.height()) + "x" + std::to_string(target.width()));
  }
}

// Centred first and second moments of features and target. Everything the
// MSE of an affine model depends on.
struct Moments {
  int channels = 0;
  std::size_t samples = 0;
  std::vector<double> mean_x;  // C
  std::vector<double> cov;     // C x C, centred
  std::vector<double> raw_sq;  // C, uncentred E[x^2]
  double mean_y[kCoords] = {0.0, 0.0};
  double var_y[kCoords] = {0.0, 0.0};
  std::vector<double> cross;  // C x 2, centred E[x y]

  explicit Moments(const FeatureMap& features, const PositionMap& target) {
    channels = features.channels();
    samples = features.dims().plane();
    const auto& dot = kernels::active().dot;
    const double n = static_cast<double>(samples);

    auto centred = [&](std::span<const float> plane, double& mean) {
      double sum = 0.0;
      for (float v : plane) sum += v;
      mean = sum / n;
      std::vector<double> out(plane.size());
      for (std::size_t i = 0; i < plane.size(); ++i) out[i] = static_cast<double>(plane[i]) - mean;
      return out;
    };

    std::vector<std::vector<double>> xc(static_cast<std::size_t>(channels));
    mean_x.resize(channels);
    raw_sq.resize(channels);
    for (int c = 0; c < channels; ++c) {
      xc[c] = centred(features.plane(0, c), mean_x[c]);
    }
    std::vector<std::vector<double>> yc(kCoords);
    for (int k = 0; k < kCoords; ++k) {
      yc[k] = centred(target.map().plane(0, k), mean_y[k]);
      var_y[k] = dot(yc[k].data(), yc[k].data(), samples) / n;
    }

    cov.assign(static_cast<std::size_t>(channels) * channels, 0.0);
    cross.assign(static_cast<std::size_t>(channels) * kCoords, 0.0);
    for (int i = 0; i < channels; ++i) {
      for (int j = 0; j <= i; ++j) {
        const double v = dot(xc[i].data(), xc[j].data(), samples) / n;
        cov[i * channels + j] = v;
        cov[j * channels + i] = v;
      }
      raw_sq[i] = cov[i * channels + i] + mean_x[i] * mean_x[i];
      for (int k = 0; k < kCoords; ++k) {
        cross[i * kCoords + k] = dot(xc[i].data(), yc[k].data(), samples) / n;
      }
    }
  }

  // Mean over both coordinates of E[(w_k.x + b_k - y_k)^2].
  double loss(const ProbeModel& m) const {
    double total = 0.0;
    for (int k = 0; k < kCoords; ++k) {
      const double* w = m.weight.data() + k * channels;
      double offset = m.bias[k] - mean_y[k];
      double quad = 0.0;
      double lin = 0.0;
      for (int i = 0; i < channels; ++i) {
        offset += w[i] * mean_x[i];
        lin += w[i] * cross[i * kCoords + k];
        double row = 0.0;
        for (int j = 0; j < channels; ++j) row += cov[i * channels + j] * w[j];
        quad += w[i] * row;
      }
      total += offset * offset + quad - 2.0 * lin + var_y[k];
    }
    return std::max(0.0, total / kCoords);
  }
};

double residual_mse(const ProbeModel& model, const FeatureMap& features, const PositionMap& target,
                    const Rect& region) {
  const int w = features.width();
  const auto& kt = kernels::active();
  double total = 0.0;
  std::vector<double> pred(static_cast<std::size_t>(region.width));
  for (int k = 0; k < kCoords; ++k) {
    auto tplane = target.map().plane(0, k);
    for (int y = region.top; y < region.top + region.height; ++y) {
      std::fill(pred.begin(), pred.end(), model.bias[k]);
      for (int c = 0; c < model.channels; ++c) {
        const float* row = features.plane(0, c).data() + static_cast<std::size_t>(y) * w + region.left;
        kt.axpy(model.weight[k * model.channels + c], row, pred.data(), pred.size());
      }
      const float* trow = tplane.data() + static_cast<std::size_t>(y) * w + region.left;
      for (int x = 0; x < region.width; ++x) {
        const double r = pred[x] - static_cast<double>(trow[x]);
        total += r * r;
      }
    }
  }
  const double count = static_cast<double>(region.height) * region.width * kCoords;
  const double mse = total / count;
  if (!std::isfinite(mse)) throw NumericError("probe: loss is not finite");
  return mse;
}

Rect full_rect(const FeatureMap& f) { return {0, 0, f.height(), f.width()}; }

ProbeModel zero_model(int channels) {
  return {channels, std::vector<double>(static_cast<std::size_t>(channels) * kCoords, 0.0),
          std::vector<double>(kCoords, 0.0)};
}

}  // namespace

PositionMap::PositionMap(int height, int width) : map_({1, 2, std::max(height, 1), std::max(width, 1)}) {
  if (height < 2 || width < 2) throw Error("position map needs height and width >= 2");
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      map_.at(0, 0, y, x) = static_cast<float>(static_cast<double>(y) / (height - 1));
      map_.at(0, 1, y, x) = static_cast<float>(static_cast<double>(x) / (width - 1));
    }
  }
}

PositionMap make_position_map(int height, int width) { return PositionMap(height, width); }

double ProbeModel::predict(int coord, std::span<const double> features) const {
  double v = bias[coord];
  for (int c = 0; c < channels; ++c) v += weight[coord * channels + c] * features[c];
  return v;
}

ProbeResult fit_closed_form(const FeatureMap& features, const PositionMap& target, double ridge) {
  check_pair(features, target);
  if (!(ridge >= 0.0)) throw Error("probe: ridge must be >= 0");
  const Moments mom(features, target);
  const int c = mom.channels;

  Eigen::MatrixXd a(c, c);
  Eigen::MatrixXd rhs(c, kCoords);
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j < c; ++j) a(i, j) = mom.cov[i * c + j];
    a(i, i) += ridge;
    for (int k = 0; k < kCoords; ++k) rhs(i, k) = mom.cross[i * kCoords + k];
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  const auto diag = ldlt.vectorD();
  const double scale = *std::max_element(mom.raw_sq.begin(), mom.raw_sq.end());
  if (ldlt.info() != Eigen::Success ||
      (ridge == 0.0 && (scale == 0.0 || diag.minCoeff() <= 1e-12 * scale))) {
    throw NumericError(
        "probe: normal equations are singular (features are collinear or constant); "
        "use a ridge > 0");
  }
  const Eigen::MatrixXd w = ldlt.solve(rhs);

  ProbeResult result;
  result.model = zero_model(c);
  for (int k = 0; k < kCoords; ++k) {
    double b = mom.mean_y[k];
    for (int i = 0; i < c; ++i) {
      result.model.weight[k * c + i] = w(i, k);
      b -= w(i, k) * mom.mean_x[i];
    }
    result.model.bias[k] = b;
  }
  result.loss = residual_mse(result.model, features, target, full_rect(features));
  return result;
}

ProbeResult fit_iterative(const FeatureMap& features, const PositionMap& target,
                          const FitConfig& cfg) {
  check_pair(features, target);
  if (std::holds_alternative<ClosedFormSolver>(cfg)) {
    throw Error("fit_iterative: solver must be Adam or SGD");
  }
  const Moments mom(features, target);
  const int c = mom.channels;
  const std::size_t nparams = static_cast<std::size_t>(c + 1) * kCoords;

  // Uncentred E[x x^T] and E[x y] for the gradient.
  std::vector<double> exx(mom.cov);
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j < c; ++j) exx[i * c + j] += mom.mean_x[i] * mom.mean_x[j];
  }
  std::vector<double> exy(mom.cross);
  for (int i = 0; i < c; ++i) {
    for (int k = 0; k < kCoords; ++k) exy[i * kCoords + k] += mom.mean_x[i] * mom.mean_y[k];
  }

  // Gradient of 0.5 * sum_k E[(w_k.x + b_k - y_k)^2]; weights first, then biases.
  ProbeModel model = zero_model(c);
  std::vector<double> grad(nparams);
  auto gradient = [&] {
    for (int k = 0; k < kCoords; ++k) {
      const double* w = model.weight.data() + k * c;
      double gb = model.bias[k] - mom.mean_y[k];
      for (int i = 0; i < c; ++i) {
        double g = model.bias[k] * mom.mean_x[i] - exy[i * kCoords + k];
        for (int j = 0; j < c; ++j) g += exx[i * c + j] * w[j];
        grad[k * c + i] = g;
        gb += w[i] * mom.mean_x[i];
      }
      grad[static_cast<std::size_t>(c) * kCoords + k] = gb;
    }
  };
  auto param = [&](std::size_t p) -> double& {
    return p < static_cast<std::size_t>(c) * kCoords ? model.weight[p]
                                                     : model.bias[p - static_cast<std::size_t>(c) * kCoords];
  };

  ProbeResult result;
  std::visit(
      [&](const auto& solver) {
        using T = std::decay_t<decltype(solver)>;
        if constexpr (!std::is_same_v<T, ClosedFormSolver>) {
          if (solver.iterations < 1) throw Error("probe: iterations must be >= 1");
          if (!(solver.lr >= 0.0)) throw Error("probe: learning rate must be >= 0");
          result.loss_curve.reserve(static_cast<std::size_t>(solver.iterations));
          std::vector<double> m1(nparams, 0.0);
          std::vector<double> m2(nparams, 0.0);
          for (int it = 1; it <= solver.iterations; ++it) {
            gradient();
            if constexpr (std::is_same_v<T, AdamSolver>) {
              const double c1 = 1.0 - std::pow(solver.beta1, it);
              const double c2 = 1.0 - std::pow(solver.beta2, it);
              for (std::size_t p = 0; p < nparams; ++p) {
                m1[p] = solver.beta1 * m1[p] + (1.0 - solver.beta1) * grad[p];
                m2[p] = solver.beta2 * m2[p] + (1.0 - solver.beta2) * grad[p] * grad[p];
                param(p) -= solver.lr * (m1[p] / c1) / (std::sqrt(m2[p] / c2) + solver.eps);
              }
            } else {
              for (std::size_t p = 0; p < nparams; ++p) param(p) -= solver.lr * grad[p];
            }
            const double loss = mom.loss(model);
            if (!std::isfinite(loss)) {
              throw NumericError("probe: iterative fit diverged at iteration " + std::to_string(it));
            }
            result.loss_curve.push_back(loss);
          }
        }
      },
      cfg);

  result.model = std::move(model);
  result.loss = residual_mse(result.model, features, target, full_rect(features));
  return result;
}

ProbeResult fit(const FeatureMap& features, const PositionMap& target, const FitConfig& cfg) {
  if (const auto* cf = std::get_if<ClosedFormSolver>(&cfg)) {
    return fit_closed_form(features, target, cf->ridge);
  }
  return fit_iterative(features, target, cfg);
}

double eval_region(const ProbeResult& result, const FeatureMap& features, const PositionMap& target,
                   const Rect& region) {
  check_pair(features, target);
  if (region.height < 1 || region.width < 1) throw Error("eval_region: region is empty");
  if (region.top < 0 || region.left < 0 || region.top + region.height > features.height() ||
      region.left + region.width > features.width()) {
    throw Error("eval_region: region lies outside the feature map");
  }
  if (result.model.channels != features.channels()) {
    throw Error("eval_region: model was fitted on a different channel count");
  }
  return residual_mse(result.model, features, target, region);
}

double add_region_loss(ProbeResult& result, const FeatureMap& features, const PositionMap& target,
                       const Rect& region) {
  const double loss = eval_region(result, features, target, region);
  result.region_losses.push_back({region, loss});
  return loss;
}

ProbeResult fit_cropped(const FeatureMap& features, const Rect& region, const FitConfig& cfg) {
  const FeatureMap sub = crop(features, region);
  return fit(sub, make_position_map(region.height, region.width), cfg);
}

double target_variance(int height, int width) {
  auto grid_var = [](int n) { return (n + 1.0) / (12.0 * (n - 1.0)); };
  return 0.5 * (grid_var(height) + grid_var(width));
}

}  // namespace padlab
