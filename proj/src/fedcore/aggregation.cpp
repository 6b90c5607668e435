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

#include "gmafed/fedcore/aggregation.hpp"

#include <algorithm>

#include "gmafed/errors.hpp"
#include "gmafed/numerics/kernels.hpp"

namespace gmafed::fedcore {
namespace {

namespace k = numerics::kernels;

void check_updates(std::span<const ClientUpdate> updates) {
  if (updates.empty()) throw InternalError("aggregation needs at least one client update");
  const std::size_t d = updates.front().raw_delta.size();
  for (const auto& u : updates)
    if (u.delta.size() != d || u.raw_delta.size() != d)
      throw InternalError("client " + std::to_string(u.client_id) +
                          " sent an update of length " + std::to_string(u.raw_delta.size()) +
                          ", expected " + std::to_string(d));
}

std::vector<const ClientUpdate*> canonical_order(std::span<const ClientUpdate> updates) {
  std::vector<const ClientUpdate*> order;
  order.reserve(updates.size());
  for (const auto& u : updates) order.push_back(&u);
  std::stable_sort(order.begin(), order.end(),
                   [](const ClientUpdate* a, const ClientUpdate* b) { return a->client_id < b->client_id; });
  return order;
}

void check_tau(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ParameterError("tau must lie in [0, 1]");
}

}  // namespace

std::vector<ClientUpdate> weight_updates(std::vector<RawUpdate> raw) {
  double total = 0.0;
  for (const auto& r : raw) total += static_cast<double>(r.sample_count);
  if (raw.empty() || total <= 0.0) throw DataError("participants hold no samples");
  std::vector<ClientUpdate> out;
  out.reserve(raw.size());
  for (auto& r : raw) {
    const double w = static_cast<double>(r.sample_count) / total;
    ParamVector delta(r.raw_delta.size());
    k::active().scale(delta.data(), w, r.raw_delta.data(), delta.size());
    out.push_back({r.client_id, std::move(delta), std::move(r.raw_delta), r.sample_count, w});
  }
  return out;
}

ParamVector aggregate(std::span<const ClientUpdate> updates) {
  check_updates(updates);
  ParamVector sum(updates.front().delta.size());
  for (const ClientUpdate* u : canonical_order(updates))
    k::active().add(sum.data(), u->delta.data(), sum.size());
  return sum;
}

ParamVector agreement_score(std::span<const ClientUpdate> updates) {
  check_updates(updates);
  const std::size_t d = updates.front().raw_delta.size();
  ParamVector signs(d);
  for (const ClientUpdate* u : canonical_order(updates))
    k::active().sign_accumulate(signs.data(), u->raw_delta.data(), d);
  ParamVector a(d);
  k::active().abs_mean(a.data(), signs.data(), static_cast<double>(updates.size()), d);
  return a;
}

ParamVector gma_mask(const ParamVector& agreement, double tau) {
  check_tau(tau);
  ParamVector m(agreement.size());
  k::active().soft_mask(m.data(), agreement.data(), tau, m.size());
  return m;
}

ParamVector and_mask(const ParamVector& agreement, double tau) {
  check_tau(tau);
  ParamVector m(agreement.size());
  k::active().binary_mask(m.data(), agreement.data(), tau, m.size());
  return m;
}

std::string to_string(Aggregator a) {
  switch (a) {
    case Aggregator::avg: return "avg";
    case Aggregator::gma: return "gma";
    case Aggregator::and_mask: return "and-mask";
  }
  return "avg";
}

Aggregator aggregator_from_string(const std::string& name) {
  for (Aggregator a : {Aggregator::avg, Aggregator::gma, Aggregator::and_mask})
    if (to_string(a) == name) return a;
  throw ParameterError("unknown aggregator '" + name + "' (valid: avg, gma, and-mask)");
}

AgreementMask compute_mask(Aggregator aggregator, std::span<const ClientUpdate> updates,
                           double tau) {
  check_tau(tau);
  AgreementMask out{agreement_score(updates), ParamVector(), tau};
  switch (aggregator) {
    case Aggregator::avg: out.mask = ParamVector(out.agreement.size(), 1.0); break;
    case Aggregator::gma: out.mask = gma_mask(out.agreement, tau); break;
    case Aggregator::and_mask: out.mask = and_mask(out.agreement, tau); break;
  }
  return out;
}

}  // namespace gmafed::fedcore
