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

#include "gmafed/fedcore/training.hpp"

#include <algorithm>
#include <chrono>

#include "gmafed/errors.hpp"

namespace gmafed::fedcore {
namespace {

double trailing_mean(const std::vector<RoundRecord>& rounds, std::size_t window,
                     double RoundRecord::*field) {
  if (rounds.empty()) return 0.0;
  const std::size_t w = std::clamp<std::size_t>(window, 1, rounds.size());
  double sum = 0.0;
  for (std::size_t i = rounds.size() - w; i < rounds.size(); ++i) sum += rounds[i].*field;
  return sum / static_cast<double>(w);
}

}  // namespace

double TrainingTrace::trailing_test_acc(std::size_t window) const {
  return trailing_mean(rounds, window, &RoundRecord::test_acc);
}

double TrainingTrace::trailing_train_acc(std::size_t window) const {
  return trailing_mean(rounds, window, &RoundRecord::train_acc);
}

TrainingTrace run_training(const TrainingSetup& setup, const RoundObserver& observer) {
  if (setup.rounds == 0) throw ParameterError("rounds must be >= 1");
  setup.round.validate();
  setup.client.validate();
  setup.federation.spec.validate();

  const auto& spec = setup.federation.spec;
  GlobalState global{
      models::init_params(spec, numerics::derive_stream(setup.seed, numerics::Purpose::model_init)),
      ServerOptimizerState::init(setup.server, spec.param_count())};

  TrainingTrace trace;
  trace.rounds.reserve(setup.rounds);
  for (std::size_t t = 1; t <= setup.rounds; ++t) {
    const auto start = std::chrono::steady_clock::now();
    RoundRecord rec;
    rec.round = t;
    rec.metrics = run_round(global, setup.federation, setup.round, setup.client, setup.seed, t);
    const auto train = models::evaluate(spec, global.w, setup.train_eval.view());
    const auto test = models::evaluate(spec, global.w, setup.test.view());
    rec.train_acc = train.accuracy;
    rec.train_loss = train.loss;
    rec.test_acc = test.accuracy;
    rec.test_loss = test.loss;
    rec.frac_below_tau = rec.metrics.agreement.frac_below_tau;
    rec.mean_agreement = rec.metrics.agreement.mean_agreement;
    if (setup.record_timing)
      rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                        .count();
    if (observer) observer(rec, global);
    trace.rounds.push_back(std::move(rec));
  }
  trace.final_model = std::move(global.w);
  return trace;
}

}  // namespace gmafed::fedcore
