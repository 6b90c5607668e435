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

#include "gmafed/data/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gmafed/errors.hpp"
#include "gmafed/numerics/sampling.hpp"

namespace gmafed::data {
namespace {

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

void require_clients(std::size_t n_clients, const Dataset& ds) {
  if (n_clients < 1) throw ParameterError("number of clients must be >= 1");
  if (n_clients > ds.size())
    throw ParameterError("cannot split " + std::to_string(ds.size()) + " samples across " +
                         std::to_string(n_clients) + " clients");
}

// Cuts `items` into consecutive chunks of the given sizes.
std::vector<std::vector<std::size_t>> cut(const std::vector<std::size_t>& items,
                                          const std::vector<std::size_t>& sizes) {
  std::vector<std::vector<std::size_t>> parts(sizes.size());
  std::size_t pos = 0;
  for (std::size_t p = 0; p < sizes.size(); ++p) {
    parts[p].assign(items.begin() + static_cast<std::ptrdiff_t>(pos),
                    items.begin() + static_cast<std::ptrdiff_t>(pos + sizes[p]));
    pos += sizes[p];
  }
  return parts;
}

// Every empty client takes the last index of the currently largest client.
void repair_empty_clients(std::vector<std::vector<std::size_t>>& parts) {
  for (auto& part : parts) {
    if (!part.empty()) continue;
    auto largest = std::max_element(parts.begin(), parts.end(),
                                    [](const auto& a, const auto& b) { return a.size() < b.size(); });
    if (largest->size() < 2) throw ParameterError("not enough samples to give every client one");
    part.push_back(largest->back());
    largest->pop_back();
  }
}

}  // namespace

std::string to_string(SkewKind kind) {
  switch (kind) {
    case SkewKind::iid: return "iid";
    case SkewKind::label_shard: return "label-shard";
    case SkewKind::dirichlet_quantity: return "dirichlet-quantity";
    case SkewKind::dirichlet_label: return "dirichlet-label";
  }
  return "iid";
}

SkewKind skew_kind_from_string(const std::string& name) {
  for (SkewKind k : {SkewKind::iid, SkewKind::label_shard, SkewKind::dirichlet_quantity,
                     SkewKind::dirichlet_label})
    if (to_string(k) == name) return k;
  throw ParameterError("unknown partition kind '" + name +
                       "' (valid: iid, label-shard, dirichlet-quantity, dirichlet-label)");
}

std::vector<std::size_t> PartitionPlan::sizes() const {
  std::vector<std::size_t> s;
  s.reserve(assignments.size());
  for (const auto& a : assignments) s.push_back(a.size());
  return s;
}

void PartitionPlan::validate(std::size_t num_samples) const {
  if (assignments.empty()) throw InternalError("partition has no clients");
  std::vector<char> seen(num_samples, 0);
  for (std::size_t c = 0; c < assignments.size(); ++c) {
    if (assignments[c].empty())
      throw InternalError("partition leaves client " + std::to_string(c) + " empty");
    for (std::size_t i : assignments[c]) {
      if (i >= num_samples) throw InternalError("partition index out of range");
      if (seen[i]) throw InternalError("partition assigns sample " + std::to_string(i) + " twice");
      seen[i] = 1;
    }
  }
}

std::vector<std::size_t> largest_remainder(const std::vector<double>& proportions,
                                           std::size_t total) {
  const std::size_t n = proportions.size();
  std::vector<std::size_t> out(n);
  std::vector<double> frac(n);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double exact = proportions[i] * static_cast<double>(total);
    out[i] = static_cast<std::size_t>(std::floor(exact));
    frac[i] = exact - std::floor(exact);
    assigned += out[i];
  }
  // Rounding of the proportions can push the floor sum past the total.
  while (assigned > total) {
    const auto it = std::max_element(out.begin(), out.end());
    --*it;
    --assigned;
  }
  std::vector<std::size_t> order = iota_indices(n);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t r = 0; assigned < total; r = (r + 1) % n, ++assigned) ++out[order[r]];
  return out;
}

PartitionPlan partition_iid(numerics::Rng& rng, const Dataset& ds, std::size_t n_clients) {
  require_clients(n_clients, ds);
  auto idx = iota_indices(ds.size());
  numerics::shuffle(idx, rng);
  std::vector<std::size_t> sizes(n_clients, ds.size() / n_clients);
  for (std::size_t c = 0; c < ds.size() % n_clients; ++c) ++sizes[c];
  return {cut(idx, sizes), SkewKind::iid, 0.0};
}

PartitionPlan partition_label_shards(numerics::Rng& rng, const Dataset& ds,
                                     std::size_t n_clients, std::size_t classes_per_client) {
  require_clients(n_clients, ds);
  const std::size_t k = classes_per_client;

  // Shuffled sample lists for every class that has samples.
  std::vector<std::vector<std::size_t>> by_class(ds.num_classes);
  for (std::size_t i = 0; i < ds.size(); ++i)
    by_class[static_cast<std::size_t>(ds.labels[i])].push_back(i);
  std::vector<std::size_t> classes;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    if (by_class[c].empty()) continue;
    numerics::shuffle(by_class[c], rng);
    classes.push_back(c);
  }
  const std::size_t n_classes = classes.size();

  if (k < 1) throw ParameterError("classes per client must be >= 1");
  if (k > n_classes)
    throw ParameterError("classes per client (" + std::to_string(k) + ") exceeds the " +
                         std::to_string(n_classes) + " classes present in the data");
  if (n_clients * k < n_classes)
    throw ParameterError(std::to_string(n_clients) + " clients x " + std::to_string(k) +
                         " classes each cannot cover all " + std::to_string(n_classes) +
                         " classes");

  // Shards per class: total n*k split as evenly as possible, the remainder
  // going to randomly chosen classes. Each count is <= n_clients because k <= C.
  const std::size_t total_shards = n_clients * k;
  std::vector<std::size_t> shard_count(ds.num_classes, 0);
  {
    std::vector<std::size_t> order = classes;
    numerics::shuffle(order, rng);
    for (std::size_t i = 0; i < order.size(); ++i)
      shard_count[order[i]] = total_shards / n_classes + (i < total_shards % n_classes ? 1 : 0);
  }

  // Cut every class into its shards.
  std::vector<std::vector<std::vector<std::size_t>>> shards(ds.num_classes);
  for (std::size_t c : classes) {
    const std::size_t m = shard_count[c];
    if (by_class[c].size() < m)
      throw ParameterError("class " + std::to_string(c) + " has " +
                           std::to_string(by_class[c].size()) + " samples but needs " +
                           std::to_string(m) + " shards");
    std::vector<std::size_t> sizes(m, by_class[c].size() / m);
    for (std::size_t s = 0; s < by_class[c].size() % m; ++s) ++sizes[s];
    shards[c] = cut(by_class[c], sizes);
  }

  // Deal: each client takes one shard from each of the k classes with the
  // most shards remaining. Largest-first keeps every remaining count <= the
  // number of clients still to serve, so the deal never gets stuck.
  PartitionPlan plan{std::vector<std::vector<std::size_t>>(n_clients), SkewKind::label_shard,
                     static_cast<double>(k)};
  std::vector<std::size_t> remaining = shard_count;
  std::vector<std::uint64_t> tie(ds.num_classes);
  for (std::size_t client = 0; client < n_clients; ++client) {
    for (auto& t : tie) t = rng();
    std::vector<std::size_t> order = classes;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (remaining[a] != remaining[b]) return remaining[a] > remaining[b];
      return tie[a] < tie[b];
    });
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t c = order[j];
      if (remaining[c] == 0) throw InternalError("label-shard deal ran out of shards");
      --remaining[c];
      const auto& shard = shards[c][remaining[c]];
      plan.assignments[client].insert(plan.assignments[client].end(), shard.begin(), shard.end());
    }
  }
  return plan;
}

PartitionPlan partition_dirichlet_quantity(numerics::Rng& rng, const Dataset& ds,
                                           std::size_t n_clients, double concentration) {
  require_clients(n_clients, ds);
  const auto p = numerics::sample_dirichlet(rng, concentration, n_clients);
  const auto sizes = largest_remainder(p, ds.size());
  auto idx = iota_indices(ds.size());
  numerics::shuffle(idx, rng);
  auto parts = cut(idx, sizes);
  repair_empty_clients(parts);
  return {std::move(parts), SkewKind::dirichlet_quantity, concentration};
}

PartitionPlan partition_dirichlet_label(numerics::Rng& rng, const Dataset& ds,
                                        std::size_t n_clients, double concentration) {
  require_clients(n_clients, ds);
  std::vector<std::vector<std::size_t>> by_class(ds.num_classes);
  for (std::size_t i = 0; i < ds.size(); ++i)
    by_class[static_cast<std::size_t>(ds.labels[i])].push_back(i);

  std::vector<std::vector<std::size_t>> parts(n_clients);
  for (auto& members : by_class) {
    if (members.empty()) continue;
    numerics::shuffle(members, rng);
    const auto p = numerics::sample_dirichlet(rng, concentration, n_clients);
    const auto chunks = cut(members, largest_remainder(p, members.size()));
    for (std::size_t c = 0; c < n_clients; ++c)
      parts[c].insert(parts[c].end(), chunks[c].begin(), chunks[c].end());
  }
  repair_empty_clients(parts);
  return {std::move(parts), SkewKind::dirichlet_label, concentration};
}

std::vector<std::vector<std::size_t>> label_histogram(const PartitionPlan& plan,
                                                      const Dataset& ds) {
  std::vector<std::vector<std::size_t>> h(plan.num_clients(),
                                          std::vector<std::size_t>(ds.num_classes, 0));
  for (std::size_t c = 0; c < plan.num_clients(); ++c)
    for (std::size_t i : plan.assignments[c]) ++h[c][static_cast<std::size_t>(ds.labels[i])];
  return h;
}

}  // namespace gmafed::data
