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
#include <string>
#include <vector>

#include "gmafed/data/dataset.hpp"
#include "gmafed/numerics/rng.hpp"

namespace gmafed::data {

enum class SkewKind { iid, label_shard, dirichlet_quantity, dirichlet_label };

std::string to_string(SkewKind kind);
SkewKind skew_kind_from_string(const std::string& name);  // throws ParameterError

// Disjoint, nonempty per-client index lists into one dataset.
struct PartitionPlan {
  std::vector<std::vector<std::size_t>> assignments;
  SkewKind kind = SkewKind::iid;
  // classes-per-client for label_shard, concentration for the Dirichlet kinds.
  double parameter = 0.0;

  std::size_t num_clients() const noexcept { return assignments.size(); }
  std::vector<std::size_t> sizes() const;

  // Throws InternalError if any index is out of range or duplicated, or any
  // client is empty.
  void validate(std::size_t num_samples) const;
};

// Shuffled split into near-equal parts (sizes differ by at most one).
PartitionPlan partition_iid(numerics::Rng& rng, const Dataset& ds, std::size_t n_clients);

// Each client holds shards of exactly `classes_per_client` distinct classes.
// Shard counts per class are n * k / C (remainder spread over random
// classes); shards are dealt greedily to the classes with the most shards
// left, ties broken at random, which never gives a client two shards of one
// class.
PartitionPlan partition_label_shards(numerics::Rng& rng, const Dataset& ds,
                                     std::size_t n_clients, std::size_t classes_per_client);

// Client sizes from Dirichlet(beta) proportions with largest-remainder
// rounding; indices assigned by a label-independent shuffle. A client rounded
// to zero receives one sample from the largest client.
PartitionPlan partition_dirichlet_quantity(numerics::Rng& rng, const Dataset& ds,
                                           std::size_t n_clients, double concentration);

// Per-class Dirichlet(alpha) split across clients (label heterogeneity knob).
PartitionPlan partition_dirichlet_label(numerics::Rng& rng, const Dataset& ds,
                                        std::size_t n_clients, double concentration);

// counts[client][class]
std::vector<std::vector<std::size_t>> label_histogram(const PartitionPlan& plan,
                                                      const Dataset& ds);

// floor(p_i * total) plus one extra unit for the largest fractional parts
// (lower index wins ties); sums to `total` exactly.
std::vector<std::size_t> largest_remainder(const std::vector<double>& proportions,
                                           std::size_t total);

}  // namespace gmafed::data
