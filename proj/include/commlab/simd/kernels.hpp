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

#pragma once

#include <cstddef>
#include <string_view>

/// Data-parallel inner loops. Every kernel has a scalar reference variant
/// and, where the CPU allows, an AVX2 variant selected at runtime. The
/// scalar variants sum strictly in index order; vector variants keep four
/// partial sums and agree with the scalar ones to rounding.
namespace commlab::simd {

enum class Isa { scalar, avx2 };

std::string_view name(Isa isa);
bool supported(Isa isa);
Isa best_isa();
Isa active_isa();
/// Throws commlab::Error if the ISA is not available on this CPU/build.
void set_active_isa(Isa isa);

struct KernelTable {
  /// acc + sum_j (1 / (scale * (xi - x[j]))) * u[j]
  double (*cauchy)(double acc, const double* x, const double* u, std::size_t count, double xi,
                   double scale);
  /// acc + sum_j d / (s_j * sqrt(s_j)) * u[j],  s_j = d^2 + (xi - x[j])^2
  double (*riesz)(double acc, const double* x, const double* u, std::size_t count, double xi,
                  double d);
  /// sum_i |(y[i] - c0) - c1 * x[i]|^q
  double (*abs_pow_sum)(const double* y, const double* x, std::size_t count, double c0, double c1,
                        double q);
};

const KernelTable& kernels();
const KernelTable& kernels(Isa isa);

}  // namespace commlab::simd
