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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "gmafed/errors.hpp"
#include "gmafed/numerics/param_vector.hpp"
#include "gmafed/numerics/rng.hpp"
#include "gmafed/numerics/sampling.hpp"
#include "gmafed/numerics/vector_ops.hpp"

using namespace gmafed;
using namespace gmafed::numerics;

TEST_CASE("ParamVector rejects zero length") {
  CHECK_THROWS_AS(ParamVector(0), ParameterError);
  CHECK_THROWS_AS(ParamVector(std::vector<double>{}), ParameterError);
  CHECK(ParamVector(3, 1.5).size() == 3);
}

TEST_CASE("bitwise_equal distinguishes signed zeros") {
  const ParamVector a{0.0, 1.0}, b{-0.0, 1.0};
  CHECK(a == b);
  CHECK_FALSE(a.bitwise_equal(b));
  CHECK(a.bitwise_equal(ParamVector{0.0, 1.0}));
}

TEST_CASE("elementwise_sign") {
  CHECK(elementwise_sign(ParamVector{-2.0, 0.0, 3.5}) == ParamVector{-1.0, 0.0, 1.0});
  CHECK(elementwise_sign(ParamVector(6, 0.0)) == ParamVector(6, 0.0));
  CHECK(elementwise_sign(ParamVector{1e-300}) == ParamVector{1.0});
  CHECK(elementwise_sign(ParamVector{-1e-300}) == ParamVector{-1.0});

  SUBCASE("sign is odd") {
    Rng rng(derive_stream(3, Purpose::test));
    for (int t = 0; t < 100; ++t) {
      const auto v = sample_gaussian(rng, 0.0, 1.0, 17);
      CHECK(elementwise_sign(scaled(-1.0, v)) == scaled(-1.0, elementwise_sign(v)));
    }
  }
}

TEST_CASE("vector ops check lengths") {
  ParamVector y{1.0, 2.0};
  CHECK_THROWS_AS(add_into(y, ParamVector{1.0}), InternalError);
  CHECK_THROWS_AS(difference(y, ParamVector{1.0, 2.0, 3.0}), InternalError);
  axpy_into(y, 2.0, ParamVector{1.0, -1.0});
  CHECK(y == ParamVector{3.0, 0.0});
  CHECK(dot(ParamVector{1.0, 2.0, 3.0}.span(), ParamVector{4.0, 5.0, 6.0}.span()) == 32.0);
  CHECK(max_abs(ParamVector{-7.0, 2.0}) == 7.0);
  CHECK_FALSE(all_finite(ParamVector{1.0, std::numeric_limits<double>::infinity()}));
}

TEST_CASE("rng streams are deterministic and independent") {
  const auto s = derive_stream(42, Purpose::client_local, 3, 7);
  Rng a(s), b(s);
  for (int i = 0; i < 1000; ++i) CHECK(a() == b());

  CHECK_FALSE(derive_stream(42, Purpose::client_local, 3, 7) ==
              derive_stream(42, Purpose::client_local, 7, 3));
  CHECK_FALSE(derive_stream(42, Purpose::partition) == derive_stream(42, Purpose::model_init));
  CHECK_FALSE(derive_stream(1, Purpose::partition) == derive_stream(2, Purpose::partition));
}

TEST_CASE("mt19937_64 engine matches the standard's reference value") {
  // The standard fixes the 10000th output of a default-seeded mt19937_64.
  std::mt19937_64 ref;
  ref.discard(9999);
  CHECK(ref() == 9981545732273789042ULL);
}

TEST_CASE("uniform, below and normal stay in range") {
  Rng rng(derive_stream(5, Purpose::test));
  double sum = 0.0, sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    const double o = rng.uniform_open();
    CHECK((o > 0.0 && o < 1.0));
    CHECK(rng.below(7) < 7);
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::fabs(sum / n) < 5.0 / std::sqrt(n));
  CHECK(std::fabs(sq / n - 1.0) < 0.02);
  CHECK_THROWS(rng.below(0));
}

TEST_CASE("below is unbiased over small ranges") {
  Rng rng(derive_stream(6, Purpose::test));
  std::vector<int> counts(6, 0);
  const int n = 60000;
  for (int i = 0; i < n; ++i) counts[rng.below(6)]++;
  // Chi-square with 5 dof; 20.5 is the 0.999 quantile.
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - n / 6.0) * (c - n / 6.0) / (n / 6.0);
  CHECK(chi2 < 20.5);
}

TEST_CASE("gamma draws have the right mean for small and large shapes") {
  Rng rng(derive_stream(8, Purpose::test));
  for (double shape : {0.05, 0.5, 1.0, 3.0, 50.0}) {
    CAPTURE(shape);
    double sum = 0.0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) sum += rng.gamma_sample(shape);
    // Var = shape, so the standard error is sqrt(shape / n).
    CHECK(std::fabs(sum / n - shape) < 5.0 * std::sqrt(shape / n));
  }
  CHECK(std::isfinite(rng.log_gamma_sample(1e-4)));
}

TEST_CASE("sample_dirichlet") {
  SUBCASE("simplex") {
    const auto p = sample_dirichlet(derive_stream(7, Purpose::test), 0.5, 4);
    REQUIRE(p.size() == 4);
    for (double x : p) CHECK(x >= 0.0);
    CHECK(std::fabs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) < 1e-12);
  }
  SUBCASE("determinism") {
    const auto s = derive_stream(7, Purpose::test);
    CHECK(sample_dirichlet(s, 0.5, 10) == sample_dirichlet(s, 0.5, 10));
  }
  SUBCASE("huge concentration is nearly uniform") {
    Rng rng(derive_stream(9, Purpose::test));
    std::vector<double> mean(10, 0.0);
    for (int t = 0; t < 1000; ++t) {
      const auto p = sample_dirichlet(rng, 1e6, 10);
      for (int i = 0; i < 10; ++i) {
        CHECK(std::fabs(p[i] - 0.1) < 0.01);
        mean[i] += p[i] / 1000.0;
      }
    }
    for (double m : mean) CHECK(std::fabs(m - 0.1) < 1e-3);
  }
  SUBCASE("tiny concentration does not underflow") {
    Rng rng(derive_stream(10, Purpose::test));
    for (int t = 0; t < 200; ++t) {
      const auto p = sample_dirichlet(rng, 1e-3, 20);
      const double s = std::accumulate(p.begin(), p.end(), 0.0);
      CHECK(std::fabs(s - 1.0) < 1e-12);
      for (double x : p) CHECK(std::isfinite(x));
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(sample_dirichlet(derive_stream(1, Purpose::test), 0.0, 3), ParameterError);
    CHECK_THROWS_AS(sample_dirichlet(derive_stream(1, Purpose::test), -1.0, 3), ParameterError);
    CHECK_THROWS_AS(sample_dirichlet(derive_stream(1, Purpose::test), 1.0, 0), ParameterError);
  }
}

TEST_CASE("sample_gaussian") {
  CHECK(sample_gaussian(derive_stream(1, Purpose::test), 3.0, 0.0, 5) == ParamVector(5, 3.0));
  const auto big = sample_gaussian(derive_stream(2, Purpose::test), 0.0, 1.0, 100000);
  const double mean = std::accumulate(big.begin(), big.end(), 0.0) / 1e5;
  CHECK(std::fabs(mean) < 0.02);
  const auto s = derive_stream(4, Purpose::test);
  CHECK(sample_gaussian(s, 1.0, 2.0, 50).bitwise_equal(sample_gaussian(s, 1.0, 2.0, 50)));
  CHECK_THROWS_AS(sample_gaussian(s, 0.0, -1.0, 5), ParameterError);
}

TEST_CASE("sample_without_replacement") {
  Rng rng(derive_stream(12, Purpose::test));
  for (int t = 0; t < 100; ++t) {
    const auto idx = sample_without_replacement(rng, 20, 7);
    REQUIRE(idx.size() == 7);
    CHECK(std::is_sorted(idx.begin(), idx.end()));
    CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == 7);
    CHECK(idx.back() < 20);
  }
  CHECK(sample_without_replacement(rng, 5, 5) == std::vector<std::size_t>{0, 1, 2, 3, 4});
}
