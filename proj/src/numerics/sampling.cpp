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

#include "gmafed/numerics/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gmafed/errors.hpp"

namespace gmafed::numerics {

std::vector<double> sample_dirichlet(Rng& rng, double concentration, std::size_t n) {
  if (!(concentration > 0.0) || !std::isfinite(concentration))
    throw ParameterError("Dirichlet concentration must be positive and finite");
  if (n == 0) throw ParameterError("Dirichlet dimension must be >= 1");

  std::vector<double> logs(n);
  for (auto& l : logs) l = rng.log_gamma_sample(concentration);
  const double top = *std::max_element(logs.begin(), logs.end());

  std::vector<double> p(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = std::exp(logs[i] - top);
    total += p[i];
  }
  for (auto& x : p) x /= total;
  return p;
}

std::vector<double> sample_dirichlet(RngState state, double concentration, std::size_t n) {
  Rng rng(state);
  return sample_dirichlet(rng, concentration, n);
}

ParamVector sample_gaussian(Rng& rng, double mean, double std, std::size_t n) {
  if (!(std >= 0.0)) throw ParameterError("Gaussian std must be non-negative");
  if (n == 0) throw ParameterError("sample count must be >= 1");
  ParamVector out(n);
  for (auto& x : out) x = std == 0.0 ? mean : mean + std * rng.normal();
  return out;
}

ParamVector sample_gaussian(RngState state, double mean, double std, std::size_t n) {
  Rng rng(state);
  return sample_gaussian(rng, mean, std, n);
}

std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k) {
  if (k > n) throw ParameterError("cannot sample more items than available");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  // Partial Fisher-Yates: the first k slots become the sample.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace gmafed::numerics
