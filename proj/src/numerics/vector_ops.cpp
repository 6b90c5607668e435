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

#include "gmafed/numerics/vector_ops.hpp"

#include <cmath>
#include <string>

#include "gmafed/errors.hpp"
#include "gmafed/numerics/kernels.hpp"

namespace gmafed::numerics {
namespace {

void require_same_length(std::size_t a, std::size_t b, const char* op) {
  if (a != b)
    throw InternalError(std::string(op) + ": length mismatch (" + std::to_string(a) +
                        " vs " + std::to_string(b) + ")");
}

}  // namespace

ParamVector elementwise_sign(const ParamVector& v) {
  ParamVector out(v.size());
  kernels::active().sign_accumulate(out.data(), v.data(), v.size());
  return out;
}

void add_into(ParamVector& y, const ParamVector& x) {
  require_same_length(y.size(), x.size(), "add_into");
  kernels::active().add(y.data(), x.data(), y.size());
}

void axpy_into(ParamVector& y, double a, const ParamVector& x) {
  require_same_length(y.size(), x.size(), "axpy_into");
  kernels::active().axpy(y.data(), a, x.data(), y.size());
}

ParamVector scaled(double a, const ParamVector& x) {
  ParamVector out(x.size());
  kernels::active().scale(out.data(), a, x.data(), x.size());
  return out;
}

ParamVector difference(const ParamVector& a, const ParamVector& b) {
  require_same_length(a.size(), b.size(), "difference");
  ParamVector out(a.size());
  kernels::active().sub(out.data(), a.data(), b.data(), a.size());
  return out;
}

double dot(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size(), "dot");
  return kernels::active().dot(x.data(), y.data(), x.size());
}

bool all_finite(const ParamVector& v) { return kernels::active().all_finite(v.data(), v.size()); }

double max_abs(const ParamVector& v) {
  double m = 0.0;
  for (double x : v) m = std::fmax(m, std::fabs(x));
  return m;
}

}  // namespace gmafed::numerics
