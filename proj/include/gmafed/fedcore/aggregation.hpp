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
#include <span>
#include <string>
#include <vector>

#include "gmafed/numerics/param_vector.hpp"

namespace gmafed::fedcore {

using numerics::ParamVector;

// One participant's contribution to a round.
struct ClientUpdate {
  std::size_t client_id = 0;
  ParamVector delta;      // weight * raw_delta, weight = s_n / sum of participant s
  ParamVector raw_delta;  // w_local - w_global
  std::size_t sample_count = 0;
  double weight = 0.0;
};

struct RawUpdate {
  std::size_t client_id = 0;
  ParamVector raw_delta;
  std::size_t sample_count = 0;
};

// Attaches sample-share weights (over the given participants) and the
// weighted deltas. Throws DataError when every sample count is zero.
std::vector<ClientUpdate> weight_updates(std::vector<RawUpdate> raw);

// Sum of weighted deltas, accumulated in ascending client-id order whatever
// the order of `updates`. Throws InternalError on length mismatch.
ParamVector aggregate(std::span<const ClientUpdate> updates);

// A[j] = |mean_n sign(raw_delta_n[j])|, in [0, 1].
ParamVector agreement_score(std::span<const ClientUpdate> updates);

// Soft mask: 1 where A >= tau, A elsewhere.
ParamVector gma_mask(const ParamVector& agreement, double tau);

// Binary mask: 1 where A >= tau, 0 elsewhere.
ParamVector and_mask(const ParamVector& agreement, double tau);

enum class Aggregator { avg, gma, and_mask };

std::string to_string(Aggregator a);
Aggregator aggregator_from_string(const std::string& name);  // throws ParameterError

struct AgreementMask {
  ParamVector agreement;
  ParamVector mask;
  double tau = 0.0;
};

// Agreement is always computed (it feeds the round metrics); the mask is
// all-ones for plain averaging.
AgreementMask compute_mask(Aggregator aggregator, std::span<const ClientUpdate> updates,
                           double tau);

}  // namespace gmafed::fedcore
