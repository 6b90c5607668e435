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
#include <filesystem>
#include <string>

#include "gmafed/data/dataset.hpp"
#include "gmafed/data/partition.hpp"
#include "gmafed/fedcore/training.hpp"
#include "gmafed/models/model.hpp"

namespace gmafed::experiments {

struct SyntheticSource {
  std::size_t num_classes = 10;
  std::size_t per_class = 200;
  std::size_t test_per_class = 100;
  std::size_t input_dim = 20;
  double separation = 2.0;

  friend bool operator==(const SyntheticSource&, const SyntheticSource&) = default;
};

// File names are resolved against the dataset root directory.
struct IdxSource {
  std::string train_images = "train-images-idx3-ubyte";
  std::string train_labels = "train-labels-idx1-ubyte";
  std::string test_images = "t10k-images-idx3-ubyte";
  std::string test_labels = "t10k-labels-idx1-ubyte";

  friend bool operator==(const IdxSource&, const IdxSource&) = default;
};

enum class DataSourceKind { synthetic, idx };

struct DatasetConfig {
  DataSourceKind kind = DataSourceKind::synthetic;
  SyntheticSource synthetic;
  IdxSource idx;
  // Seeded subsample sizes; 0 keeps everything.
  std::size_t max_train = 0;
  std::size_t max_test = 0;

  friend bool operator==(const DatasetConfig&, const DatasetConfig&) = default;
};

struct FeatureSkewConfig {
  bool enabled = false;
  double rho = 0.9;  // probability a sample gets its label's tint
  double max_tint = 0.5;

  friend bool operator==(const FeatureSkewConfig&, const FeatureSkewConfig&) = default;
};

struct PartitionConfig {
  data::SkewKind kind = data::SkewKind::iid;
  std::size_t classes_per_client = 2;
  double concentration = 0.5;
  FeatureSkewConfig feature_skew;

  friend bool operator==(const PartitionConfig&, const PartitionConfig&) = default;
};

struct ModelConfig {
  models::ModelKind kind = models::ModelKind::logistic_regression;
  std::size_t hidden_dim = 0;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Everything needed to rerun one experiment. Input dimension and class count
// come from the dataset.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t rounds = 50;
  std::string output_dir = "gmafed-out";
  ModelConfig model;
  DatasetConfig dataset;
  PartitionConfig partition;
  fedcore::RoundConfig round;
  fedcore::ClientConfig client;
  fedcore::ServerOptimizerConfig server;
  std::size_t trailing_window = 10;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct DataBundle {
  data::Dataset train;
  data::Dataset test;
};

// Loads (or generates) the train/test sets, subsampled per max_train/max_test.
// Synthetic sets share class centres; the test set uses its own substream.
DataBundle load_data(const DatasetConfig& cfg, std::uint64_t seed,
                     const std::filesystem::path& data_root);

// Partitions `bundle.train` across clients, applies feature skew if enabled
// and assembles the fedcore setup.
fedcore::TrainingSetup build_setup(const ExperimentConfig& cfg, const DataBundle& bundle);

data::PartitionPlan make_partition(const PartitionConfig& cfg, const data::Dataset& train,
                                   std::size_t n_clients, std::uint64_t seed);

}  // namespace gmafed::experiments
