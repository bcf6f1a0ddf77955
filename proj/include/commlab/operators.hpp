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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "commlab/grid.hpp"

namespace commlab {

/// Smoothness modulus omega(t). Power form c * t^gamma, or a nondecreasing
/// table interpolated linearly in t and held constant past the last node.
class Modulus {
 public:
  static Modulus power(double coefficient, double gamma);
  static Modulus tabulated(std::vector<double> t, std::vector<double> values);

  double operator()(double t) const;
  /// sum_{j=1}^{terms} omega(2^-j)
  double dyadic_sum(int terms) const;
  /// Nondecreasing and subadditive on the sampled points t_k = 2^-k, k < 40.
  bool admissible() const;

 private:
  bool tabulated_ = false;
  double coefficient_ = 1.0;
  double gamma_ = 1.0;
  std::vector<double> t_;
  std::vector<double> values_;
};

enum class KernelKind { hilbert, power_dini };

/// Linear kernel K(x, y) with size constant c_k and modulus omega.
///   hilbert:        1 / (pi (x - y))
///   power_dini(g):  m(x) m(y) / (pi (x - y)),  m(x) = 1 + |sin x|^g / 2
struct KernelSpec {
  KernelKind kind = KernelKind::hilbert;
  double gamma = 1.0;
  double c_k = 0.0;
  Modulus omega = Modulus::power(1.0, 1.0);
  std::string name;

  static KernelSpec hilbert();
  /// The modulus constant depends on the diameter of the domain.
  static KernelSpec power_dini(double gamma, double diameter = 16.0);
  /// "hilbert" or "power_dini(0.5)".
  static KernelSpec parse(std::string_view name, double diameter = 16.0);

  double operator()(double x, double y) const;
  double multiplier(double x) const;
};

enum class BilinearKind { tensor_hilbert, bilinear_riesz };

/// Bilinear kernel K(x, y1, y2).
///   tensor_hilbert:  1 / (pi^2 (x - y1)(x - y2)); T(f, g) = Hf * Hg
///   bilinear_riesz:  (x - y1) / ((x - y1)^2 + (x - y2)^2)^(3/2)
/// The tensor kernel fails the size bound near the axes, so its c_k is
/// infinite; `measured_size_constant` reports the grid value.
struct BilinearKernelSpec {
  BilinearKind kind = BilinearKind::tensor_hilbert;
  double c_k = 0.0;
  Modulus omega = Modulus::power(1.0, 1.0);
  std::string name;

  static BilinearKernelSpec tensor_hilbert();
  static BilinearKernelSpec bilinear_riesz();
  static BilinearKernelSpec parse(std::string_view name);

  double operator()(double x, double y1, double y2) const;
};

/// Principal-value truncation: pairs with |x_i - y_j| <= epsilon are dropped.
/// epsilon = 0 selects the grid step.
struct TruncationRule {
  double epsilon = 0.0;

  double resolve(const Grid& grid) const;
  /// Pairs with |i - j| <= k are dropped.
  std::size_t excluded_offset(const Grid& grid) const;
};

/// max |K(x_i, x_j)| |x_i - x_j| over the evaluated pairs.
double measured_size_constant(const KernelSpec& k, const Grid& grid, const TruncationRule& trunc);
/// max |K(x, y1, y2)| (|x - y1| + |x - y2|)^2 over a strided subset of triples.
double measured_size_constant(const BilinearKernelSpec& k, const Grid& grid,
                              const TruncationRule& trunc, std::size_t stride = 8);
/// Largest ratio of the two-variable smoothness difference to
/// omega(|x - z| / |x - y|) / |x - y| over sample triples with |x - z| <= |x - y| / 2.
double measured_smoothness_ratio(const KernelSpec& k, const Grid& grid, std::size_t stride = 8);

/// T_eps f on `window` (zero elsewhere).
GridFn cz_apply(const KernelSpec& k, const GridFn& f, const TruncationRule& trunc = {});
GridFn cz_apply(const KernelSpec& k, const GridFn& f, const TruncationRule& trunc,
                IndexRange window);
double cz_apply_at(const KernelSpec& k, const GridFn& f, std::size_t i,
                   const TruncationRule& trunc = {});
/// Naive h * sum_j K(x_i, x_j) f_j in index order.
GridFn cz_apply_reference(const KernelSpec& k, const GridFn& f, const TruncationRule& trunc = {});

/// h 2^k, k = 0 .. count - 1.
std::vector<double> dyadic_epsilons(const Grid& grid, int count);
/// max over eps of |T_eps f|.
GridFn cz_maximal_truncation(const KernelSpec& k, const GridFn& f, std::span<const double> eps_set);

/// b T f - T(b f) on `window`.
GridFn commutator(const GridFn& b, const KernelSpec& k, const GridFn& f,
                  const TruncationRule& trunc = {});
GridFn commutator(const GridFn& b, const KernelSpec& k, const GridFn& f,
                  const TruncationRule& trunc, IndexRange window);

/// sup over B containing x of max_{z in B} |T(f chi_{(2B)^c})(z)|.
GridFn grand_maximal(const KernelSpec& k, const GridFn& f, const BallFamily& family,
                     const TruncationRule& trunc = {});

/// h^2 sum K(x_i, y1, y2) f(y1) g(y2) with both |x_i - y| > eps.
GridFn bilinear_apply(const BilinearKernelSpec& k, const GridFn& f, const GridFn& g,
                      const TruncationRule& trunc = {});
GridFn bilinear_apply(const BilinearKernelSpec& k, const GridFn& f, const GridFn& g,
                      const TruncationRule& trunc, IndexRange window);
double bilinear_apply_at(const BilinearKernelSpec& k, const GridFn& f, const GridFn& g,
                         std::size_t i, const TruncationRule& trunc = {});
/// Naive triple loop, index order.
GridFn bilinear_apply_reference(const BilinearKernelSpec& k, const GridFn& f, const GridFn& g,
                                const TruncationRule& trunc, IndexRange window);

/// b T(f, g) - T(b f, g).
GridFn bilinear_commutator(const GridFn& b, const BilinearKernelSpec& k, const GridFn& f,
                           const GridFn& g, const TruncationRule& trunc = {});
GridFn bilinear_commutator(const GridFn& b, const BilinearKernelSpec& k, const GridFn& f,
                           const GridFn& g, const TruncationRule& trunc, IndexRange window);

/// sup over B containing x of max_{z in B} |T(f chi_{(2B)^c}, g chi_{(2B)^c})(z)|.
GridFn bilinear_grand_maximal(const BilinearKernelSpec& k, const GridFn& f, const GridFn& g,
                              const BallFamily& family, const TruncationRule& trunc = {});

}  // namespace commlab
