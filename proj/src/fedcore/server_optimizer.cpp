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

#include "gmafed/fedcore/server_optimizer.hpp"

#include <cmath>

#include "gmafed/errors.hpp"
#include "gmafed/numerics/kernels.hpp"

namespace gmafed::fedcore {

std::string to_string(ServerOptimizerKind kind) {
  switch (kind) {
    case ServerOptimizerKind::fedavg: return "fedavg";
    case ServerOptimizerKind::fedadam: return "fedadam";
    case ServerOptimizerKind::fedyogi: return "fedyogi";
  }
  return "fedavg";
}

ServerOptimizerKind server_optimizer_from_string(const std::string& name) {
  for (auto k : {ServerOptimizerKind::fedavg, ServerOptimizerKind::fedadam,
                 ServerOptimizerKind::fedyogi})
    if (to_string(k) == name) return k;
  throw ParameterError("unknown server optimizer '" + name + "' (valid: fedavg, fedadam, fedyogi)");
}

void ServerOptimizerConfig::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ParameterError("server.lr must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ParameterError("server.beta1 must lie in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ParameterError("server.beta2 must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw ParameterError("server.epsilon must be positive");
}

ServerOptimizerState ServerOptimizerState::init(const ServerOptimizerConfig& config,
                                                std::size_t dim) {
  config.validate();
  return {config, ParamVector(dim), ParamVector(dim)};
}

void server_step(ServerOptimizerState& state, ParamVector& w, const ParamVector& delta,
                 const ParamVector& mask, long round) {
  const std::size_t d = w.size();
  if (delta.size() != d || mask.size() != d || state.z.size() != d || state.v.size() != d)
    throw InternalError("server_step: length mismatch");
  const auto& kt = numerics::kernels::active();
  const std::string where = round >= 0 ? " in round " + std::to_string(round) : std::string();
  if (!kt.all_finite(delta.data(), d))
    throw NumericalError("non-finite aggregated update" + where, round);

  const auto& c = state.config;
  if (c.kind == ServerOptimizerKind::fedavg) {
    kt.masked_axpy(w.data(), c.lr, mask.data(), delta.data(), d);
  } else {
    if (c.kind == ServerOptimizerKind::fedadam)
      kt.adam_moments(state.z.data(), state.v.data(), delta.data(), c.beta1, c.beta2, d);
    else
      kt.yogi_moments(state.z.data(), state.v.data(), delta.data(), c.beta1, c.beta2, d);
    ParamVector direction(d);
    kt.adaptive_direction(direction.data(), state.z.data(), state.v.data(), c.epsilon, d);
    kt.masked_axpy(w.data(), c.lr, mask.data(), direction.data(), d);
  }
  if (!kt.all_finite(w.data(), d))
    throw NumericalError("global model became non-finite" + where, round);
}

}  // namespace gmafed::fedcore
