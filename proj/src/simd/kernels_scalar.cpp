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

#include <cmath>

#include "kernel_tables.hpp"

namespace commlab::simd::detail {

namespace {

double cauchy(double acc, const double* x, const double* u, std::size_t count, double xi,
              double scale) {
  for (std::size_t j = 0; j < count; ++j) acc += (1.0 / (scale * (xi - x[j]))) * u[j];
  return acc;
}

double riesz(double acc, const double* x, const double* u, std::size_t count, double xi,
             double d) {
  const double dd = d * d;
  for (std::size_t j = 0; j < count; ++j) {
    const double e = xi - x[j];
    const double s = dd + e * e;
    acc += (d / (s * std::sqrt(s))) * u[j];
  }
  return acc;
}

double abs_pow_sum(const double* y, const double* x, std::size_t count, double c0, double c1,
                   double q) {
  double sum = 0.0;
  if (q == 1.0) {
    for (std::size_t i = 0; i < count; ++i) sum += std::abs((y[i] - c0) - c1 * x[i]);
  } else if (q == 2.0) {
    for (std::size_t i = 0; i < count; ++i) {
      const double r = (y[i] - c0) - c1 * x[i];
      sum += r * r;
    }
  } else if (q == 0.5) {
    for (std::size_t i = 0; i < count; ++i) sum += std::sqrt(std::abs((y[i] - c0) - c1 * x[i]));
  } else {
    for (std::size_t i = 0; i < count; ++i) sum += std::pow(std::abs((y[i] - c0) - c1 * x[i]), q);
  }
  return sum;
}

}  // namespace

const KernelTable kScalarTable{&cauchy, &riesz, &abs_pow_sum};

}  // namespace commlab::simd::detail
