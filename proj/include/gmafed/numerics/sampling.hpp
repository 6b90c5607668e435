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
#include <vector>

#include "gmafed/numerics/param_vector.hpp"
#include "gmafed/numerics/rng.hpp"

namespace gmafed::numerics {

// n proportions on the simplex drawn from a symmetric Dirichlet. Gamma draws
// are combined in log space so tiny concentrations do not underflow to an
// all-zero vector. Throws ParameterError for concentration <= 0 or n == 0.
std::vector<double> sample_dirichlet(Rng& rng, double concentration, std::size_t n);
std::vector<double> sample_dirichlet(RngState state, double concentration, std::size_t n);

// Throws ParameterError for std < 0 or n == 0.
ParamVector sample_gaussian(Rng& rng, double mean, double std, std::size_t n);
ParamVector sample_gaussian(RngState state, double mean, double std, std::size_t n);

// k distinct indices from [0, n), returned in ascending order.
std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k);

}  // namespace gmafed::numerics
