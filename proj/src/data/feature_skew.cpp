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

#include "gmafed/data/feature_skew.hpp"

#include <algorithm>
#include <set>

#include "gmafed/errors.hpp"

namespace gmafed::data {
namespace {

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("color correlation must lie in [0, 1]");
}

// Tints one sample in place and returns the class whose tint was used.
std::int32_t tint_sample(std::span<double> row, std::int32_t label,
                         const std::vector<double>& table, double rho, numerics::Rng& rng) {
  const double u = rng.uniform();
  const std::uint64_t random_class = rng.below(table.size());
  const std::int32_t chosen = u < rho ? label : static_cast<std::int32_t>(random_class);
  const double t = table[static_cast<std::size_t>(chosen)];
  for (double& x : row) x = std::min(1.0, x + t);
  return chosen;
}

}  // namespace

void TintTable::validate(std::size_t n_clients, std::size_t num_classes) const {
  if (train.size() != n_clients)
    throw ParameterError("tint table has " + std::to_string(train.size()) + " client rows, need " +
                         std::to_string(n_clients));
  std::set<double> train_values;
  auto check_row = [&](const std::vector<double>& row, const char* what) {
    if (row.size() != num_classes)
      throw ParameterError(std::string(what) + " tint row has " + std::to_string(row.size()) +
                           " entries, need " + std::to_string(num_classes));
    for (double v : row)
      if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("tint value outside [0, 1]");
  };
  for (const auto& row : train) {
    check_row(row, "train");
    train_values.insert(row.begin(), row.end());
  }
  check_row(test, "test");
  for (double v : test)
    if (train_values.count(v)) throw ParameterError("test tint table overlaps a train table");
}

TintTable make_tint_table(numerics::Rng& rng, std::size_t n_clients, std::size_t num_classes,
                          double max_tint) {
  if (!(max_tint > 0.0 && max_tint <= 1.0)) throw ParameterError("max tint must lie in (0, 1]");
  const std::size_t slots = (n_clients + 1) * num_classes;
  std::vector<double> values(slots);
  for (std::size_t i = 0; i < slots; ++i)
    values[i] = max_tint * static_cast<double>(i + 1) / static_cast<double>(slots);
  numerics::shuffle(values, rng);

  TintTable t;
  t.train.assign(n_clients, std::vector<double>(num_classes));
  std::size_t pos = 0;
  for (auto& row : t.train)
    for (auto& v : row) v = values[pos++];
  t.test.assign(values.begin() + static_cast<std::ptrdiff_t>(pos), values.end());
  return t;
}

SkewedDataset apply_feature_skew(const PartitionPlan& plan, const Dataset& ds,
                                 const FeatureTransform& transform, double rho,
                                 numerics::RngState state) {
  check_rho(rho);
  SkewedDataset out{ds, std::vector<std::int32_t>(ds.size(), -1)};
  if (transform.kind == TransformKind::identity) return out;
  transform.tints.validate(plan.num_clients(), ds.num_classes);

  for (std::size_t client = 0; client < plan.num_clients(); ++client) {
    const auto& table = transform.tints.train[client];
    for (std::size_t i : plan.assignments[client]) {
      numerics::Rng rng(numerics::derive_stream(state.seed ^ state.stream,
                                                numerics::Purpose::feature_skew, client, i));
      out.tint_class[i] = tint_sample(out.data.features.row(i), ds.labels[i], table, rho, rng);
    }
  }
  return out;
}

SkewedDataset apply_test_tint(const Dataset& ds, const FeatureTransform& transform, double rho,
                              numerics::RngState state) {
  check_rho(rho);
  SkewedDataset out{ds, std::vector<std::int32_t>(ds.size(), -1)};
  if (transform.kind == TransformKind::identity) return out;
  if (transform.tints.test.size() != ds.num_classes)
    throw ParameterError("test tint row does not match the number of classes");
  for (std::size_t i = 0; i < ds.size(); ++i) {
    numerics::Rng rng(numerics::derive_stream(state.seed ^ state.stream,
                                              numerics::Purpose::feature_skew, ~0ULL, i));
    out.tint_class[i] =
        tint_sample(out.data.features.row(i), ds.labels[i], transform.tints.test, rho, rng);
  }
  return out;
}

}  // namespace gmafed::data
