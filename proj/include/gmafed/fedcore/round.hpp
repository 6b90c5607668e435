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

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "gmafed/data/dataset.hpp"
#include "gmafed/fedcore/aggregation.hpp"
#include "gmafed/fedcore/client.hpp"
#include "gmafed/fedcore/server_optimizer.hpp"

namespace gmafed::fedcore {

struct RoundConfig {
  std::size_t n_clients = 10;
  std::size_t sample_size = 10;  // |C|, participants per round
  Aggregator aggregator = Aggregator::gma;
  double tau = 0.4;

  void validate() const;  // throws ParameterError
  friend bool operator==(const RoundConfig&, const RoundConfig&) = default;
};

// Client datasets of one simulated federation.
struct Federation {
  ModelSpec spec;
  std::vector<data::Dataset> clients;
};

struct GlobalState {
  ParamVector w;
  ServerOptimizerState server;
};

inline constexpr std::size_t kAgreementBins = 10;

struct AgreementStats {
  // Bin b counts coordinates with A in [b/10, (b+1)/10); A = 1 lands in the last bin.
  std::array<std::size_t, kAgreementBins> histogram{};
  // Share of moving coordinates (some participant's delta is nonzero) with
  // A < tau; 0 when nothing moved.
  double frac_below_tau = 0.0;
  // Mean agreement over moving coordinates; 0 when nothing moved.
  double mean_agreement = 0.0;
  std::size_t moving = 0;
};

AgreementStats agreement_stats(const AgreementMask& mask, std::span<const ClientUpdate> updates);

struct RoundMetrics {
  std::size_t round = 0;
  std::vector<std::size_t> participants;
  AgreementStats agreement;
  std::vector<double> client_losses;  // parallel to participants
};

// |C| distinct clients, uniformly without replacement, ascending ids. Uses the
// substream (seed, client_sampling, round).
std::vector<std::size_t> sample_participants(std::uint64_t seed, std::size_t round,
                                             std::size_t n_clients, std::size_t sample_size);

// Local training for every participant from the same global model. Each
// client draws from substream (seed, client_local, round, client id); errors
// are rethrown with the client id attached. Results are in participant order.
std::vector<ClientUpdate> run_clients(const Federation& fed, const ParamVector& w,
                                      std::span<const std::size_t> participants,
                                      const ClientConfig& cfg, std::uint64_t seed,
                                      std::size_t round, std::vector<double>* losses = nullptr);

// One communication round: sample, train locally, weight, aggregate, mask,
// server step.
RoundMetrics run_round(GlobalState& global, const Federation& fed, const RoundConfig& round_cfg,
                       const ClientConfig& client_cfg, std::uint64_t seed, std::size_t round);

}  // namespace gmafed::fedcore
