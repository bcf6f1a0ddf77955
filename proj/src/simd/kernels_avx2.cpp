// Copyright 2026 The commlab Authors
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

#include <immintrin.h>

#include <cmath>

#include "kernel_tables.hpp"

namespace commlab::simd::detail {

namespace {

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

double cauchy(double acc, const double* x, const double* u, std::size_t count, double xi,
              double scale) {
  const __m256d vxi = _mm256_set1_pd(xi);
  const __m256d vscale = _mm256_set1_pd(scale);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d sum = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    const __m256d d = _mm256_sub_pd(vxi, _mm256_loadu_pd(x + j));
    const __m256d k = _mm256_div_pd(one, _mm256_mul_pd(vscale, d));
    sum = _mm256_add_pd(sum, _mm256_mul_pd(k, _mm256_loadu_pd(u + j)));
  }
  double tail = 0.0;
  for (; j < count; ++j) tail += (1.0 / (scale * (xi - x[j]))) * u[j];
  return acc + (horizontal_sum(sum) + tail);
}

double riesz(double acc, const double* x, const double* u, std::size_t count, double xi,
             double d) {
  const double dd = d * d;
  const __m256d vxi = _mm256_set1_pd(xi);
  const __m256d vd = _mm256_set1_pd(d);
  const __m256d vdd = _mm256_set1_pd(dd);
  __m256d sum = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    const __m256d e = _mm256_sub_pd(vxi, _mm256_loadu_pd(x + j));
    const __m256d s = _mm256_add_pd(vdd, _mm256_mul_pd(e, e));
    const __m256d k = _mm256_div_pd(vd, _mm256_mul_pd(s, _mm256_sqrt_pd(s)));
    sum = _mm256_add_pd(sum, _mm256_mul_pd(k, _mm256_loadu_pd(u + j)));
  }
  double tail = 0.0;
  for (; j < count; ++j) {
    const double e = xi - x[j];
    const double s = dd + e * e;
    tail += (d / (s * std::sqrt(s))) * u[j];
  }
  return acc + (horizontal_sum(sum) + tail);
}

double abs_pow_sum(const double* y, const double* x, std::size_t count, double c0, double c1,
                   double q) {
  // Exponents without a vector form use the scalar loop.
  if (q != 1.0 && q != 2.0 && q != 0.5) return kScalarTable.abs_pow_sum(y, x, count, c0, c1, q);
  const __m256d vc0 = _mm256_set1_pd(c0);
  const __m256d vc1 = _mm256_set1_pd(c1);
  __m256d sum = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d r = _mm256_sub_pd(_mm256_sub_pd(_mm256_loadu_pd(y + i), vc0),
                                    _mm256_mul_pd(vc1, _mm256_loadu_pd(x + i)));
    __m256d t;
    if (q == 1.0) {
      t = abs_pd(r);
    } else if (q == 2.0) {
      t = _mm256_mul_pd(r, r);
    } else {
      t = _mm256_sqrt_pd(abs_pd(r));
    }
    sum = _mm256_add_pd(sum, t);
  }
  double tail = 0.0;
  for (; i < count; ++i) {
    const double r = (y[i] - c0) - c1 * x[i];
    tail += q == 1.0 ? std::abs(r) : q == 2.0 ? r * r : std::sqrt(std::abs(r));
  }
  return horizontal_sum(sum) + tail;
}

}  // namespace

const KernelTable kAvx2Table{&cauchy, &riesz, &abs_pow_sum};

}  // namespace commlab::simd::detail
