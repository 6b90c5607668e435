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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "gmafed/data/dataset.hpp"
#include "gmafed/models/model.hpp"
#include "gmafed/numerics/rng.hpp"

namespace gmafed::testing {

inline models::Batch random_batch(numerics::Rng& rng, std::size_t dim, std::size_t classes,
                                  std::size_t rows) {
  models::Batch b;
  b.features = models::Matrix(rows, dim);
  for (double& v : b.features.values) v = rng.uniform() * 2.0 - 1.0;
  for (std::size_t i = 0; i < rows; ++i) b.labels.push_back(static_cast<std::int32_t>(rng.below(classes)));
  return b;
}

struct Instance {
  models::ModelSpec spec;
  numerics::ParamVector w;
  models::Batch batch;
};

// Hidden pre-activations of the MLP, computed directly from the packed layout.
inline bool relu_margin_ok(const Instance& inst, double margin) {
  if (inst.spec.kind != models::ModelKind::mlp) return true;
  const std::size_t d = inst.spec.input_dim, h = inst.spec.hidden_dim;
  for (std::size_t r = 0; r < inst.batch.labels.size(); ++r)
    for (std::size_t j = 0; j < h; ++j) {
      double z = inst.w[h * d + j];
      for (std::size_t i = 0; i < d; ++i) z += inst.w[j * d + i] * inst.batch.features.at(r, i);
      if (std::fabs(z) < margin) return false;
    }
  return true;
}

// Random logistic or MLP instance with at most `max_params` parameters, away
// from ReLU kinks so central differences are valid.
inline Instance random_instance(numerics::Rng& rng, std::size_t max_params) {
  for (;;) {
    Instance inst;
    const std::size_t dim = 1 + rng.below(6), classes = 2 + rng.below(4);
    inst.spec = rng.below(2) == 0 ? models::ModelSpec::logistic(dim, classes)
                                  : models::ModelSpec::mlp(dim, 1 + rng.below(6), classes);
    if (inst.spec.param_count() > max_params) continue;
    inst.w = numerics::ParamVector(inst.spec.param_count());
    for (double& v : inst.w) v = rng.uniform() * 2.0 - 1.0;
    inst.batch = random_batch(rng, dim, classes, 1 + rng.below(8));
    if (relu_margin_ok(inst, 1e-3)) return inst;
  }
}

// Central differences of the loss, one coordinate at a time.
inline numerics::ParamVector central_difference(const models::ModelSpec& spec,
                                                const numerics::ParamVector& w,
                                                models::BatchView batch, double eps) {
  numerics::ParamVector grad(w.size());
  numerics::ParamVector probe = w;
  std::vector<double> scratch;
  for (std::size_t i = 0; i < w.size(); ++i) {
    probe[i] = w[i] + eps;
    const double up = models::loss_and_gradient_into(spec, probe, batch, scratch);
    probe[i] = w[i] - eps;
    const double down = models::loss_and_gradient_into(spec, probe, batch, scratch);
    probe[i] = w[i];
    grad[i] = (up - down) / (2.0 * eps);
  }
  return grad;
}

// max_i |a_i - b_i| / max(|a_i|, |b_i|, 1e-3); the floor keeps near-zero
// coordinates from amplifying finite-difference truncation noise.
inline double max_relative_error(const numerics::ParamVector& a, const numerics::ParamVector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::fabs(a[i]), std::fabs(b[i]), 1e-3});
    worst = std::max(worst, std::fabs(a[i] - b[i]) / denom);
  }
  return worst;
}

// Dataset with every class present `per_class` times, features uniform in [0, 1].
inline data::Dataset random_dataset(numerics::Rng& rng, std::size_t dim, std::size_t classes,
                                    std::size_t per_class) {
  data::Dataset ds;
  ds.num_classes = classes;
  ds.features = models::Matrix(classes * per_class, dim);
  for (double& v : ds.features.values) v = rng.uniform();
  for (std::size_t c = 0; c < classes; ++c)
    for (std::size_t i = 0; i < per_class; ++i) ds.labels.push_back(static_cast<std::int32_t>(c));
  return ds;
}

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("gmafed-" + tag + "-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace gmafed::testing
