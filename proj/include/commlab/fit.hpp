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
#include <span>

/// Inner infima over constants and over affine combinations:
///
///   inf_c      (avg |y - c|^q)^(1/q)
///   inf_{c0,c1} (avg |y - c0 - c1 x|^q)^(1/q)
///
/// For q <= 1 every term |.|^q is concave between its breakpoints, so the
/// first infimum is attained at a data value and the second at a vertex of
/// the line arrangement {c0 + c1 x_i = y_i}. The solvers search those finite
/// candidate sets.
namespace commlab::fit {

/// (avg |y - c0 - c1 x|^q)^(1/q).
double objective(std::span<const double> y, std::span<const double> x, double c0, double c1,
                 double q);
/// (avg |y - c|^q)^(1/q).
double objective(std::span<const double> y, double c, double q);

struct ConstantFit {
  double constant = 0.0;
  double value = 0.0;
};

/// q = 2: mean. q = 1: lower median. q < 1: best data value. Other q > 1:
/// bisection on the monotone derivative.
ConstantFit best_constant(std::span<const double> y, double q);

enum class Method {
  degenerate,          // x numerically constant; fell back to best_constant
  closed_form,         // q = 2 normal equations
  irls_vertex_walk,    // q = 1: IRLS start, exact vertex polish
  irls,                // q > 1, q != 2
  exhaustive_vertices, // q < 1, every vertex of the arrangement
  vertex_walk,         // q < 1, multi-start local vertex descent
};

struct AffineSolution {
  double intercept = 0.0;
  double slope = 0.0;
  double value = 0.0;
  Method method = Method::closed_form;
  /// True only when the result is a provable global minimum.
  bool exact = true;
  int iterations = 0;
};

struct AffineOptions {
  /// Samples up to which q < 1 enumerates all O(m^2) vertices.
  std::size_t exhaustive_limit = 256;
  int irls_max_iterations = 200;
  /// Extra start for the q < 1 vertex walk (e.g. a fixed-slope solution).
  bool has_hint = false;
  double hint_intercept = 0.0;
  double hint_slope = 0.0;
};

AffineSolution best_affine(std::span<const double> y, std::span<const double> x, double q,
                           const AffineOptions& options = {});

/// Least-squares line via centered sums.
AffineSolution least_squares(std::span<const double> y, std::span<const double> x);

}  // namespace commlab::fit
