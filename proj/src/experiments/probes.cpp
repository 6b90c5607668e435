// Copyright 2026 The gmafed Authors. All Rights Reserved.
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

#include <algorithm>
#include <cmath>
#include <functional>

#include "gmafed/errors.hpp"
#include "gmafed/experiments/studies.hpp"

namespace gmafed::experiments {
namespace {

// Attacker features: the target's logits sorted descending, so the attacker
// sees confidence shape rather than class identity.
models::Matrix attack_features(const models::ModelSpec& spec, const numerics::ParamVector& w,
                               const data::Dataset& ds) {
  models::Matrix logits = models::predict_logits(spec, w, ds.features);
  for (std::size_t i = 0; i < logits.rows; ++i) {
    auto r = logits.row(i);
    std::sort(r.begin(), r.end(), std::greater<>());
  }
  return logits;
}

}  // namespace

double mask_stability_mc(const MaskStabilityConfig& cfg, numerics::Rng& rng) {
  cfg.validate();
  std::size_t unmasked = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    double sign_sum = 0.0;
    for (std::size_t n = 0; n < cfg.n_clients; ++n) {
      const double mu = cfg.means.size() == 1 ? cfg.means[0] : cfg.means[n];
      const double d = mu + cfg.std * rng.normal();
      sign_sum += d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    }
    const double a = std::fabs(sign_sum / static_cast<double>(cfg.n_clients));
    if (a >= cfg.tau) ++unmasked;
  }
  return static_cast<double>(unmasked) / static_cast<double>(cfg.trials);
}

std::vector<double> mask_stability_grid(const MaskStabilityConfig& cfg,
                                        const std::vector<double>& ratios, std::uint64_t seed) {
  std::vector<double> out;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    // Keep sigma and the relative spread of the means; rescale so that
    // inf mu / sigma equals the grid ratio.
    MaskStabilityConfig point = cfg;
    const double lowest = *std::min_element(cfg.means.begin(), cfg.means.end());
    if (!(lowest > 0.0)) throw ParameterError("mask_stability.means must be positive for a grid");
    for (double& m : point.means) m *= ratios[i] * cfg.std / lowest;
    numerics::Rng rng(numerics::derive_stream(seed, numerics::Purpose::monte_carlo, i));
    out.push_back(mask_stability_mc(point, rng));
  }
  return out;
}

AttackResult membership_inference(const models::ModelSpec& spec, const numerics::ParamVector& w,
                                  const data::Dataset& members, const data::Dataset& non_members,
                                  numerics::Rng& rng, std::size_t steps) {
  const std::size_t per_group = std::min(members.size(), non_members.size());
  if (per_group < 2)
    throw DataError("membership inference needs at least 2 members and 2 non-members");

  // Balanced groups, each split in half between attacker train and test.
  auto pick = [&](std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    numerics::shuffle(idx, rng);
    idx.resize(per_group);
    return idx;
  };
  const auto in_idx = pick(members.size());
  const auto out_idx = pick(non_members.size());
  const models::Matrix in_f = attack_features(spec, w, members.subset(in_idx));
  const models::Matrix out_f = attack_features(spec, w, non_members.subset(out_idx));

  const std::size_t dim = in_f.cols;
  const std::size_t half = per_group / 2;
  data::Dataset train, test;
  train.num_classes = test.num_classes = 2;
  train.features = models::Matrix(0, dim);
  test.features = models::Matrix(0, dim);
  auto push = [](data::Dataset& ds, std::span<const double> row, std::int32_t label) {
    ds.features.values.insert(ds.features.values.end(), row.begin(), row.end());
    ds.features.rows++;
    ds.labels.push_back(label);
  };
  for (std::size_t i = 0; i < per_group; ++i) {
    data::Dataset& dst = i < half ? train : test;
    push(dst, in_f.row(i), 1);
    push(dst, out_f.row(i), 0);
  }

  // Standardise with attacker-train statistics.
  std::vector<double> mean(dim, 0.0), scale(dim, 0.0);
  for (std::size_t i = 0; i < train.features.rows; ++i)
    for (std::size_t j = 0; j < dim; ++j) mean[j] += train.features.at(i, j);
  for (double& m : mean) m /= static_cast<double>(train.features.rows);
  for (std::size_t i = 0; i < train.features.rows; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = train.features.at(i, j) - mean[j];
      scale[j] += d * d;
    }
  for (double& s : scale) {
    s = std::sqrt(s / static_cast<double>(train.features.rows));
    s = s > 1e-12 ? 1.0 / s : 0.0;
  }
  for (data::Dataset* ds : {&train, &test})
    for (std::size_t i = 0; i < ds->features.rows; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        ds->features.at(i, j) = (ds->features.at(i, j) - mean[j]) * scale[j];

  // Binary logistic attacker (two-class softmax), full-batch gradient descent.
  const auto attacker = models::ModelSpec::logistic(dim, 2);
  numerics::ParamVector a(attacker.param_count());
  std::vector<double> grad;
  constexpr double kAttackerLr = 0.5;
  for (std::size_t s = 0; s < steps; ++s) {
    models::loss_and_gradient_into(attacker, a, train.view(), grad);
    for (std::size_t k = 0; k < grad.size(); ++k) a.data()[k] -= kAttackerLr * grad[k];
  }
  return {models::evaluate_accuracy(attacker, a, test.view()), train.size(), test.size()};
}

}  // namespace gmafed::experiments
