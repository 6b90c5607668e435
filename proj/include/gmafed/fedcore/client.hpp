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

#include "gmafed/data/dataset.hpp"
#include "gmafed/models/model.hpp"
#include "gmafed/numerics/rng.hpp"

namespace gmafed::fedcore {

using models::ModelSpec;
using numerics::ParamVector;

struct ClientConfig {
  double lr = 0.01;
  double momentum = 0.9;
  std::size_t epochs = 1;
  std::size_t batch_size = 32;
  // Proximal coefficient; 0 disables the FedProx term.
  double prox_mu = 0.0;

  void validate() const;  // throws ParameterError
  friend bool operator==(const ClientConfig&, const ClientConfig&) = default;
};

struct LocalResult {
  ParamVector raw_delta;  // w_final - w_global
  std::size_t sample_count = 0;
  double mean_loss = 0.0;  // mean mini-batch loss seen during local training
};

// `epochs` passes of mini-batch SGD with a heavy-ball buffer
//   m <- momentum * m + g,  w <- w - lr * m
// that starts at zero every call. With prox_mu > 0 each gradient gets
// prox_mu * (w - w_global) added. Mini-batch order is reshuffled each epoch,
// except when one batch covers the whole client set (natural order then).
// Throws DataError for an empty client set.
LocalResult client_local_update(const ModelSpec& spec, const ParamVector& w_global,
                                const data::Dataset& client_data, const ClientConfig& cfg,
                                numerics::Rng& rng);

namespace detail {
// `proximal_branch` forces the proximal code path even when prox_mu == 0.
LocalResult client_local_update(const ModelSpec& spec, const ParamVector& w_global,
                                const data::Dataset& client_data, const ClientConfig& cfg,
                                numerics::Rng& rng, bool proximal_branch);
}  // namespace detail

}  // namespace gmafed::fedcore
