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

// Compiled with -mavx2 (and without -mfma). Keep this translation unit free of
// standard-library inline code so no AVX2-encoded copy of a shared inline
// function can be picked by the linker for use on a non-AVX2 machine.

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace gmafed::numerics::kernels {
namespace {

inline __m256d sign_v(__m256d x) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d pos = _mm256_and_pd(_mm256_cmp_pd(x, zero, _CMP_GT_OQ), one);
  const __m256d neg = _mm256_and_pd(_mm256_cmp_pd(x, zero, _CMP_LT_OQ), one);
  return _mm256_sub_pd(pos, neg);
}

inline double sign_s(double x) {
  return static_cast<double>(x > 0.0) - static_cast<double>(x < 0.0);
}

inline double abs_s(double x) { return x < 0.0 ? -x : (x == 0.0 ? 0.0 : x); }

inline __m256d abs_v(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

void add(double* y, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] += x[i];
}

void axpy(double* y, double a, const double* x, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ax = _mm256_mul_pd(av, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), ax));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale(double* out, double a, const double* x, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = a * x[i];
}

void sub(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (; i < n; ++i) lane[i & 3] += x[i] * y[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void sign_accumulate(double* acc, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(acc + i,
                     _mm256_add_pd(_mm256_loadu_pd(acc + i), sign_v(_mm256_loadu_pd(x + i))));
  for (; i < n; ++i) acc[i] += sign_s(x[i]);
}

void abs_mean(double* out, const double* acc, double count, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(count);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, abs_v(_mm256_div_pd(_mm256_loadu_pd(acc + i), cv)));
  for (; i < n; ++i) out[i] = abs_s(acc[i] / count);
}

void soft_mask(double* out, const double* a, double tau, std::size_t n) {
  const __m256d tv = _mm256_set1_pd(tau);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d av = _mm256_loadu_pd(a + i);
    const __m256d keep = _mm256_cmp_pd(av, tv, _CMP_GE_OQ);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(av, one, keep));
  }
  for (; i < n; ++i) out[i] = a[i] >= tau ? 1.0 : a[i];
}

void binary_mask(double* out, const double* a, double tau, std::size_t n) {
  const __m256d tv = _mm256_set1_pd(tau);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d keep = _mm256_cmp_pd(_mm256_loadu_pd(a + i), tv, _CMP_GE_OQ);
    _mm256_storeu_pd(out + i, _mm256_and_pd(keep, one));
  }
  for (; i < n; ++i) out[i] = a[i] >= tau ? 1.0 : 0.0;
}

void masked_axpy(double* w, double eta, const double* mask, const double* dir,
                 std::size_t n) {
  const __m256d ev = _mm256_set1_pd(eta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d md = _mm256_mul_pd(_mm256_loadu_pd(mask + i), _mm256_loadu_pd(dir + i));
    _mm256_storeu_pd(w + i, _mm256_add_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(ev, md)));
  }
  for (; i < n; ++i) w[i] += eta * (mask[i] * dir[i]);
}

void momentum_step(double* w, double* m, const double* g, double lr, double rho,
                   std::size_t n) {
  const __m256d lv = _mm256_set1_pd(lr);
  const __m256d rv = _mm256_set1_pd(rho);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mv = _mm256_add_pd(_mm256_mul_pd(rv, _mm256_loadu_pd(m + i)),
                                     _mm256_loadu_pd(g + i));
    _mm256_storeu_pd(m + i, mv);
    _mm256_storeu_pd(w + i, _mm256_sub_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(lv, mv)));
  }
  for (; i < n; ++i) {
    m[i] = rho * m[i] + g[i];
    w[i] -= lr * m[i];
  }
}

void adam_moments(double* z, double* v, const double* d, double b1, double b2,
                  std::size_t n) {
  const double c1 = 1.0 - b1;
  const double c2 = 1.0 - b2;
  const __m256d b1v = _mm256_set1_pd(b1), b2v = _mm256_set1_pd(b2);
  const __m256d c1v = _mm256_set1_pd(c1), c2v = _mm256_set1_pd(c2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dv = _mm256_loadu_pd(d + i);
    _mm256_storeu_pd(z + i, _mm256_add_pd(_mm256_mul_pd(b1v, _mm256_loadu_pd(z + i)),
                                          _mm256_mul_pd(c1v, dv)));
    _mm256_storeu_pd(v + i, _mm256_add_pd(_mm256_mul_pd(b2v, _mm256_loadu_pd(v + i)),
                                          _mm256_mul_pd(c2v, _mm256_mul_pd(dv, dv))));
  }
  for (; i < n; ++i) {
    z[i] = b1 * z[i] + c1 * d[i];
    v[i] = b2 * v[i] + c2 * (d[i] * d[i]);
  }
}

void yogi_moments(double* z, double* v, const double* d, double b1, double b2,
                  std::size_t n) {
  const double c1 = 1.0 - b1;
  const double c2 = 1.0 - b2;
  const __m256d b1v = _mm256_set1_pd(b1);
  const __m256d c1v = _mm256_set1_pd(c1), c2v = _mm256_set1_pd(c2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dv = _mm256_loadu_pd(d + i);
    _mm256_storeu_pd(z + i, _mm256_add_pd(_mm256_mul_pd(b1v, _mm256_loadu_pd(z + i)),
                                          _mm256_mul_pd(c1v, dv)));
    const __m256d vv = _mm256_loadu_pd(v + i);
    const __m256d d2 = _mm256_mul_pd(dv, dv);
    const __m256d step = _mm256_mul_pd(_mm256_mul_pd(c2v, d2), sign_v(_mm256_sub_pd(vv, d2)));
    _mm256_storeu_pd(v + i, _mm256_sub_pd(vv, step));
  }
  for (; i < n; ++i) {
    z[i] = b1 * z[i] + c1 * d[i];
    const double d2 = d[i] * d[i];
    v[i] = v[i] - (c2 * d2) * sign_s(v[i] - d2);
  }
}

void adaptive_direction(double* out, const double* z, const double* v, double eps,
                        std::size_t n) {
  const __m256d ev = _mm256_set1_pd(eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d den = _mm256_add_pd(_mm256_sqrt_pd(_mm256_loadu_pd(v + i)), ev);
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_loadu_pd(z + i), den));
  }
  for (; i < n; ++i) {
    const __m256d s = _mm256_sqrt_pd(_mm256_set1_pd(v[i]));
    out[i] = z[i] / (_mm256_cvtsd_f64(s) + eps);
  }
}

bool all_finite(const double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d ok = _mm256_cmp_pd(_mm256_sub_pd(xv, xv), zero, _CMP_EQ_OQ);
    if (_mm256_movemask_pd(ok) != 0xF) return false;
  }
  for (; i < n; ++i)
    if (!(x[i] - x[i] == 0.0)) return false;
  return true;
}

}  // namespace

namespace detail {

const KernelTable& avx2_table_unchecked() noexcept {
  static const KernelTable table{
      "avx2",       add,          axpy,         scale,        sub,
      dot,          sign_accumulate, abs_mean,  soft_mask,    binary_mask,
      masked_axpy,  momentum_step, adam_moments, yogi_moments, adaptive_direction,
      all_finite,
  };
  return table;
}

}  // namespace detail
}  // namespace gmafed::numerics::kernels
