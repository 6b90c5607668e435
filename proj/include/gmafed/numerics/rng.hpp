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

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace gmafed::numerics {

// Identifies one reproducible random substream. Equal states yield equal
// sample sequences on every platform: the engine is mt19937_64 (fully
// specified by the standard) and all distributions below are implemented
// here rather than taken from <random>, whose algorithms are unspecified.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const RngState&, const RngState&) = default;
};

// Purpose tags keep substreams for different consumers independent, so adding
// a new consumer never perturbs existing ones.
enum class Purpose : std::uint64_t {
  model_init = 1,
  partition = 2,
  client_sampling = 3,
  client_local = 4,
  synthetic_data = 5,
  feature_skew = 6,
  attacker = 7,
  monte_carlo = 8,
  data_split = 9,
  test = 10,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

RngState derive_stream(std::uint64_t seed, Purpose purpose, std::uint64_t a = 0,
                       std::uint64_t b = 0) noexcept;

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(RngState state);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  // Unbiased integer in [0, n); n must be > 0.
  std::uint64_t below(std::uint64_t n);
  // Standard normal (Marsaglia polar method).
  double normal();
  // log of a Gamma(shape, 1) draw (Marsaglia-Tsang; boosted for shape < 1).
  double log_gamma_sample(double shape);
  double gamma_sample(double shape);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

// Fisher-Yates with Rng::below, portable across standard libraries.
template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  shuffle(std::span<T>(items), rng);
}

}  // namespace gmafed::numerics
