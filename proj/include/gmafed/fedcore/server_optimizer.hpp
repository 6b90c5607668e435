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

#include <string>

#include "gmafed/numerics/param_vector.hpp"

namespace gmafed::fedcore {

using numerics::ParamVector;

enum class ServerOptimizerKind { fedavg, fedadam, fedyogi };

std::string to_string(ServerOptimizerKind kind);
ServerOptimizerKind server_optimizer_from_string(const std::string& name);

struct ServerOptimizerConfig {
  ServerOptimizerKind kind = ServerOptimizerKind::fedavg;
  double lr = 1.0;
  double beta1 = 0.9;
  double beta2 = 0.99;
  // Added to sqrt(v) in the adaptive step.
  double epsilon = 1e-3;

  void validate() const;  // throws ParameterError
  friend bool operator==(const ServerOptimizerConfig&, const ServerOptimizerConfig&) = default;
};

// First and second moment accumulators; both stay zero for fedavg.
struct ServerOptimizerState {
  ServerOptimizerConfig config;
  ParamVector z;
  ParamVector v;

  static ServerOptimizerState init(const ServerOptimizerConfig& config, std::size_t dim);
};

// Applies one server update in place.
//   fedavg:  w += lr * (mask * delta)
//   fedadam: z = b1 z + (1-b1) delta;  v = b2 v + (1-b2) delta^2
//   fedyogi: z as above;               v = v - (1-b2) delta^2 sign(v - delta^2)
//            then w += lr * (mask * z / (sqrt(v) + epsilon))
// The moments see the unmasked delta; the mask multiplies the final step.
// Throws NumericalError (carrying `round`) if delta or the new w is not finite.
void server_step(ServerOptimizerState& state, ParamVector& w, const ParamVector& delta,
                 const ParamVector& mask, long round = -1);

}  // namespace gmafed::fedcore
