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

#include "gmafed/experiments/config.hpp"

#include <algorithm>
#include <numeric>

#include "gmafed/data/feature_skew.hpp"
#include "gmafed/errors.hpp"
#include "gmafed/numerics/sampling.hpp"

namespace gmafed::experiments {
namespace {

data::Dataset subsample(const data::Dataset& ds, std::size_t max, numerics::Rng& rng) {
  if (max == 0 || max >= ds.size()) return ds;
  auto idx = numerics::sample_without_replacement(rng, ds.size(), max);
  return ds.subset(idx);
}

}  // namespace

DataBundle load_data(const DatasetConfig& cfg, std::uint64_t seed,
                     const std::filesystem::path& data_root) {
  DataBundle b;
  if (cfg.kind == DataSourceKind::synthetic) {
    const auto& s = cfg.synthetic;
    b.train = data::synth_blobs(numerics::derive_stream(seed, numerics::Purpose::synthetic_data, 0),
                                s.num_classes, s.per_class, s.input_dim, s.separation);
    b.test = data::synth_blobs(numerics::derive_stream(seed, numerics::Purpose::synthetic_data, 1),
                               s.num_classes, s.test_per_class, s.input_dim, s.separation);
  } else {
    b.train = data::load_idx(data_root / cfg.idx.train_images, data_root / cfg.idx.train_labels);
    b.test = data::load_idx(data_root / cfg.idx.test_images, data_root / cfg.idx.test_labels);
    if (b.train.input_dim() != b.test.input_dim())
      throw DataError("train and test IDX images have different sizes");
    b.train.num_classes = b.test.num_classes = std::max(b.train.num_classes, b.test.num_classes);
  }
  numerics::Rng rng(numerics::derive_stream(seed, numerics::Purpose::data_split));
  b.train = subsample(b.train, cfg.max_train, rng);
  b.test = subsample(b.test, cfg.max_test, rng);
  return b;
}

data::PartitionPlan make_partition(const PartitionConfig& cfg, const data::Dataset& train,
                                   std::size_t n_clients, std::uint64_t seed) {
  numerics::Rng rng(numerics::derive_stream(seed, numerics::Purpose::partition));
  switch (cfg.kind) {
    case data::SkewKind::iid: return data::partition_iid(rng, train, n_clients);
    case data::SkewKind::label_shard:
      return data::partition_label_shards(rng, train, n_clients, cfg.classes_per_client);
    case data::SkewKind::dirichlet_quantity:
      return data::partition_dirichlet_quantity(rng, train, n_clients, cfg.concentration);
    case data::SkewKind::dirichlet_label:
      return data::partition_dirichlet_label(rng, train, n_clients, cfg.concentration);
  }
  throw InternalError("unhandled partition kind");
}

fedcore::TrainingSetup build_setup(const ExperimentConfig& cfg, const DataBundle& bundle) {
  const auto& train = bundle.train;
  models::ModelSpec spec{cfg.model.kind, train.input_dim(), cfg.model.hidden_dim,
                         std::max(train.num_classes, bundle.test.num_classes)};
  spec.validate();

  const auto plan = make_partition(cfg.partition, train, cfg.round.n_clients, cfg.seed);
  plan.validate(train.size());

  data::Dataset skewed_train = train;
  data::Dataset test = bundle.test;
  if (cfg.partition.feature_skew.enabled) {
    numerics::Rng rng(numerics::derive_stream(cfg.seed, numerics::Purpose::feature_skew));
    data::FeatureTransform transform{
        data::TransformKind::color_tint,
        data::make_tint_table(rng, plan.num_clients(), spec.num_classes,
                              cfg.partition.feature_skew.max_tint)};
    const auto state = numerics::derive_stream(cfg.seed, numerics::Purpose::feature_skew, 1);
    skewed_train =
        data::apply_feature_skew(plan, train, transform, cfg.partition.feature_skew.rho, state).data;
    // Held-out tints carry no label information at test time.
    test = data::apply_test_tint(test, transform, 0.0, state).data;
  }

  fedcore::TrainingSetup setup;
  setup.federation.spec = spec;
  std::vector<std::size_t> all;
  for (const auto& idx : plan.assignments) {
    setup.federation.clients.push_back(skewed_train.subset(idx));
    all.insert(all.end(), idx.begin(), idx.end());
  }
  std::sort(all.begin(), all.end());
  setup.train_eval = skewed_train.subset(all);
  setup.test = std::move(test);
  setup.round = cfg.round;
  setup.client = cfg.client;
  setup.server = cfg.server;
  setup.rounds = cfg.rounds;
  setup.seed = cfg.seed;
  return setup;
}

}  // namespace gmafed::experiments
