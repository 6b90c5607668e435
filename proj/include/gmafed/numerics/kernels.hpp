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

// Data-parallel inner loops shared by the model, the aggregator and the
// server optimizers. Every kernel exists as a scalar reference and as an AVX2
// variant; both produce bitwise-identical results (no FMA contraction, and
// reductions use the same fixed 4-lane accumulation order).

#include <cstddef>
#include <string_view>

namespace gmafed::numerics::kernels {

struct KernelTable {
  const char* name;

  // y += x
  void (*add)(double* y, const double* x, std::size_t n);
  // y += a * x
  void (*axpy)(double* y, double a, const double* x, std::size_t n);
  // out = a * x
  void (*scale)(double* out, double a, const double* x, std::size_t n);
  // out = a - b
  void (*sub)(double* out, const double* a, const double* b, std::size_t n);
  // Lane k accumulates x[i]*y[i] for i % 4 == k; result (l0 + l1) + (l2 + l3).
  double (*dot)(const double* x, const double* y, std::size_t n);
  // acc += sign(x), sign(0) = 0
  void (*sign_accumulate)(double* acc, const double* x, std::size_t n);
  // out = |acc / count|
  void (*abs_mean)(double* out, const double* acc, double count, std::size_t n);
  // out = (A >= tau) ? 1 : A
  void (*soft_mask)(double* out, const double* agreement, double tau, std::size_t n);
  // out = (A >= tau) ? 1 : 0
  void (*binary_mask)(double* out, const double* agreement, double tau, std::size_t n);
  // w += eta * (mask * dir)
  void (*masked_axpy)(double* w, double eta, const double* mask, const double* dir,
                      std::size_t n);
  // m = rho * m + g; w -= lr * m
  void (*momentum_step)(double* w, double* m, const double* g, double lr, double rho,
                        std::size_t n);
  // z = b1 z + (1 - b1) d; v = b2 v + (1 - b2) d^2
  void (*adam_moments)(double* z, double* v, const double* d, double b1, double b2,
                       std::size_t n);
  // z = b1 z + (1 - b1) d; v = v - (1 - b2) d^2 sign(v - d^2)
  void (*yogi_moments)(double* z, double* v, const double* d, double b1, double b2,
                       std::size_t n);
  // out = z / (sqrt(v) + eps)
  void (*adaptive_direction)(double* out, const double* z, const double* v, double eps,
                             std::size_t n);
  bool (*all_finite)(const double* x, std::size_t n);
};

enum class Isa { scalar, avx2 };

const KernelTable& scalar_table() noexcept;

// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_table() noexcept;

// Table used by the library. Chosen once at first use: AVX2 when available,
// unless GMAFED_SIMD=scalar is set in the environment.
const KernelTable& active() noexcept;

// Overrides the active table (tests and benchmarks). Returns false if the
// requested ISA is unavailable on this machine.
bool select(Isa isa) noexcept;

std::string_view active_name() noexcept;

}  // namespace gmafed::numerics::kernels
