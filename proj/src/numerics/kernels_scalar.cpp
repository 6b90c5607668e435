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

#include <cmath>

#include "gmafed/numerics/kernels.hpp"
#include "kernels_impl.hpp"

namespace gmafed::numerics::kernels {
namespace {

void add(double* y, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += x[i];
}

void axpy(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(double* out, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
}

void sub(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

double dot(const double* x, const double* y, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) lane[i & 3] += x[i] * y[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

inline double sign_of(double x) {
  return static_cast<double>(x > 0.0) - static_cast<double>(x < 0.0);
}

void sign_accumulate(double* acc, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += sign_of(x[i]);
}

void abs_mean(double* out, const double* acc, double count, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(acc[i] / count);
}

void soft_mask(double* out, const double* a, double tau, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] >= tau ? 1.0 : a[i];
}

void binary_mask(double* out, const double* a, double tau, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] >= tau ? 1.0 : 0.0;
}

void masked_axpy(double* w, double eta, const double* mask, const double* dir,
                 std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) w[i] += eta * (mask[i] * dir[i]);
}

void momentum_step(double* w, double* m, const double* g, double lr, double rho,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = rho * m[i] + g[i];
    w[i] -= lr * m[i];
  }
}

void adam_moments(double* z, double* v, const double* d, double b1, double b2,
                  std::size_t n) {
  const double c1 = 1.0 - b1;
  const double c2 = 1.0 - b2;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = b1 * z[i] + c1 * d[i];
    v[i] = b2 * v[i] + c2 * (d[i] * d[i]);
  }
}

void yogi_moments(double* z, double* v, const double* d, double b1, double b2,
                  std::size_t n) {
  const double c1 = 1.0 - b1;
  const double c2 = 1.0 - b2;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = b1 * z[i] + c1 * d[i];
    const double d2 = d[i] * d[i];
    v[i] = v[i] - (c2 * d2) * sign_of(v[i] - d2);
  }
}

void adaptive_direction(double* out, const double* z, const double* v, double eps,
                        std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = z[i] / (std::sqrt(v[i]) + eps);
}

bool all_finite(const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(x[i])) return false;
  return true;
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{
      "scalar",     add,          axpy,         scale,        sub,
      dot,          sign_accumulate, abs_mean,  soft_mask,    binary_mask,
      masked_axpy,  momentum_step, adam_moments, yogi_moments, adaptive_direction,
      all_finite,
  };
  return table;
}

}  // namespace gmafed::numerics::kernels
