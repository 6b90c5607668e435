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

#include "gmafed/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gmafed/errors.hpp"

namespace gmafed::data {

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.num_classes = num_classes;
  out.features = Matrix(indices.size(), input_dim());
  out.labels.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const std::size_t i = indices[r];
    if (i >= size()) throw DataError("subset index " + std::to_string(i) + " out of range");
    std::copy_n(features.row(i).begin(), input_dim(), out.features.row(r).begin());
    out.labels.push_back(labels[i]);
  }
  return out;
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(num_classes, 0);
  for (std::int32_t y : labels) ++counts[static_cast<std::size_t>(y)];
  return counts;
}

void Dataset::validate() const {
  if (size() == 0) throw DataError("dataset is empty");
  if (features.rows != size()) throw DataError("feature rows do not match label count");
  if (features.values.size() != features.rows * features.cols)
    throw DataError("feature buffer does not match its shape");
  for (std::int32_t y : labels)
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes)
      throw DataError("label " + std::to_string(y) + " outside [0, " +
                      std::to_string(num_classes) + ")");
  for (double x : features.values)
    if (!(x >= 0.0 && x <= 1.0)) throw DataError("feature value outside [0, 1]");
}

Dataset synth_blobs(numerics::Rng& rng, std::size_t num_classes, std::size_t per_class,
                    std::size_t input_dim, double separation) {
  if (num_classes < 2) throw ParameterError("synthetic data needs at least 2 classes");
  if (per_class < 1 || input_dim < 1) throw ParameterError("synthetic counts must be >= 1");
  if (!(separation > 0.0)) throw ParameterError("synthetic separation must be positive");

  Dataset ds;
  ds.num_classes = num_classes;
  ds.features = Matrix(num_classes * per_class, input_dim);
  ds.labels.reserve(num_classes * per_class);
  const double scale = 1.0 / (separation + 1.0);
  std::size_t r = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    for (std::size_t s = 0; s < per_class; ++s, ++r) {
      auto row = ds.features.row(r);
      for (std::size_t j = 0; j < input_dim; ++j) {
        const double raw = (j == c % input_dim ? separation : 0.0) + rng.normal();
        row[j] = std::clamp(raw * scale, 0.0, 1.0);
      }
      ds.labels.push_back(static_cast<std::int32_t>(c));
    }
  }
  return ds;
}

Dataset synth_blobs(numerics::RngState state, std::size_t num_classes, std::size_t per_class,
                    std::size_t input_dim, double separation) {
  numerics::Rng rng(state);
  return synth_blobs(rng, num_classes, per_class, input_dim, separation);
}

}  // namespace gmafed::data
