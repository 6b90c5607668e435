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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gmafed/data/dataset.hpp"
#include "gmafed/data/partition.hpp"
#include "gmafed/numerics/rng.hpp"

namespace gmafed::data {

// Additive tint intensities: train[client][class] and test[class]. The test
// table shares no value with any train table.
struct TintTable {
  std::vector<std::vector<double>> train;
  std::vector<double> test;

  // Throws ParameterError on ragged rows, values outside [0,1], or a test
  // value that also appears in a train table.
  void validate(std::size_t n_clients, std::size_t num_classes) const;
};

enum class TransformKind { identity, color_tint };

struct FeatureTransform {
  TransformKind kind = TransformKind::identity;
  TintTable tints;
};

// Distinct tint values spread over (0, max_tint], shuffled across
// (client, class) slots and the test row.
TintTable make_tint_table(numerics::Rng& rng, std::size_t n_clients, std::size_t num_classes,
                          double max_tint = 0.5);

struct SkewedDataset {
  Dataset data;
  // Class whose tint was applied to each sample; -1 when untouched.
  std::vector<std::int32_t> tint_class;
};

// With probability rho a sample of client n receives its own label's tint
// from row n of the table; otherwise the tint of a uniformly random class from
// the same row. x' = min(1, x + tint) on every feature. Labels and sample
// counts are unchanged. The draw for a sample depends only on (state, client,
// sample index). Samples outside the plan are left untouched.
SkewedDataset apply_feature_skew(const PartitionPlan& plan, const Dataset& ds,
                                 const FeatureTransform& transform, double rho,
                                 numerics::RngState state);

// Same mechanism with the held-out test tint row, applied to every sample.
SkewedDataset apply_test_tint(const Dataset& ds, const FeatureTransform& transform, double rho,
                              numerics::RngState state);

}  // namespace gmafed::data
