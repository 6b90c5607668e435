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
#include <functional>
#include <vector>

#include "gmafed/fedcore/round.hpp"

namespace gmafed::fedcore {

struct TrainingSetup {
  Federation federation;
  data::Dataset train_eval;  // union of client data, for train metrics
  data::Dataset test;
  RoundConfig round;
  ClientConfig client;
  ServerOptimizerConfig server;
  std::size_t rounds = 1;
  std::uint64_t seed = 0;
  // Measure wall-clock time per round. Off by default so traces stay
  // byte-reproducible; wall_ms is then 0.
  bool record_timing = false;
};

struct RoundRecord {
  std::size_t round = 0;  // 1-based
  double train_acc = 0.0;
  double test_acc = 0.0;
  double train_loss = 0.0;
  double test_loss = 0.0;
  double frac_below_tau = 0.0;
  double mean_agreement = 0.0;
  double wall_ms = 0.0;
  RoundMetrics metrics;
};

struct TrainingTrace {
  std::vector<RoundRecord> rounds;
  ParamVector final_model;

  // Mean of the last `window` test (or train) accuracies.
  double trailing_test_acc(std::size_t window) const;
  double trailing_train_acc(std::size_t window) const;
};

// Called after every round with the updated state.
using RoundObserver = std::function<void(const RoundRecord&, const GlobalState&)>;

// Initialises w from substream (seed, model_init) and runs `rounds` rounds.
// Throws ParameterError for rounds == 0.
TrainingTrace run_training(const TrainingSetup& setup, const RoundObserver& observer = {});

}  // namespace gmafed::fedcore
