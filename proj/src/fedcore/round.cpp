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

#include "gmafed/fedcore/round.hpp"

#include <algorithm>

#include "gmafed/errors.hpp"
#include "gmafed/numerics/sampling.hpp"

namespace gmafed::fedcore {
namespace {

template <typename E>
[[noreturn]] void rethrow_for_client(const E& e, std::size_t client) {
  throw E("client " + std::to_string(client) + ": " + e.what());
}

}  // namespace

void RoundConfig::validate() const {
  if (n_clients < 1) throw ParameterError("round.n_clients must be >= 1");
  if (sample_size < 1 || sample_size > n_clients)
    throw ParameterError("round.sample_size must lie in [1, n_clients]");
  if (!(tau >= 0.0 && tau <= 1.0)) throw ParameterError("round.tau must lie in [0, 1]");
}

AgreementStats agreement_stats(const AgreementMask& mask, std::span<const ClientUpdate> updates) {
  AgreementStats s;
  const std::size_t d = mask.agreement.size();
  double sum = 0.0;
  std::size_t below = 0;
  for (std::size_t j = 0; j < d; ++j) {
    const double a = mask.agreement[j];
    const auto bin = std::min<std::size_t>(kAgreementBins - 1,
                                           static_cast<std::size_t>(a * kAgreementBins));
    ++s.histogram[bin];
    const bool moving = std::any_of(updates.begin(), updates.end(),
                                    [j](const ClientUpdate& u) { return u.raw_delta[j] != 0.0; });
    if (!moving) continue;
    ++s.moving;
    sum += a;
    if (a < mask.tau) ++below;
  }
  if (s.moving > 0) {
    s.frac_below_tau = static_cast<double>(below) / static_cast<double>(s.moving);
    s.mean_agreement = sum / static_cast<double>(s.moving);
  }
  return s;
}

std::vector<std::size_t> sample_participants(std::uint64_t seed, std::size_t round,
                                             std::size_t n_clients, std::size_t sample_size) {
  numerics::Rng rng(numerics::derive_stream(seed, numerics::Purpose::client_sampling, round));
  return numerics::sample_without_replacement(rng, n_clients, sample_size);
}

std::vector<ClientUpdate> run_clients(const Federation& fed, const ParamVector& w,
                                      std::span<const std::size_t> participants,
                                      const ClientConfig& cfg, std::uint64_t seed,
                                      std::size_t round, std::vector<double>* losses) {
  std::vector<RawUpdate> raw;
  raw.reserve(participants.size());
  if (losses) losses->clear();
  for (std::size_t id : participants) {
    if (id >= fed.clients.size()) throw InternalError("participant id out of range");
    numerics::Rng rng(numerics::derive_stream(seed, numerics::Purpose::client_local, round, id));
    try {
      LocalResult r = client_local_update(fed.spec, w, fed.clients[id], cfg, rng);
      if (losses) losses->push_back(r.mean_loss);
      raw.push_back({id, std::move(r.raw_delta), r.sample_count});
    } catch (const NumericalError& e) {
      throw NumericalError("client " + std::to_string(id) + ": " + e.what(),
                           static_cast<long>(round));
    } catch (const DataError& e) {
      rethrow_for_client(e, id);
    } catch (const ParameterError& e) {
      rethrow_for_client(e, id);
    }
  }
  return weight_updates(std::move(raw));
}

RoundMetrics run_round(GlobalState& global, const Federation& fed, const RoundConfig& round_cfg,
                       const ClientConfig& client_cfg, std::uint64_t seed, std::size_t round) {
  round_cfg.validate();
  if (fed.clients.size() != round_cfg.n_clients)
    throw ParameterError("federation has " + std::to_string(fed.clients.size()) +
                         " clients but round.n_clients is " + std::to_string(round_cfg.n_clients));
  RoundMetrics m;
  m.round = round;
  m.participants = sample_participants(seed, round, round_cfg.n_clients, round_cfg.sample_size);
  const auto updates =
      run_clients(fed, global.w, m.participants, client_cfg, seed, round, &m.client_losses);
  const ParamVector delta = aggregate(updates);
  const AgreementMask mask = compute_mask(round_cfg.aggregator, updates, round_cfg.tau);
  m.agreement = agreement_stats(mask, updates);
  server_step(global.server, global.w, delta, mask.mask, static_cast<long>(round));
  return m;
}

}  // namespace gmafed::fedcore
