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

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "commlab/grid.hpp"

namespace commlab {

/// Positive weight; samples are clamped below at floor = 1e-12 * max.
class Weight {
 public:
  explicit Weight(const GridFn& raw);

  const GridFn& fn() const { return w_; }
  double floor() const { return floor_; }
  const Grid& grid() const { return w_.grid(); }

 private:
  GridFn w_;
  double floor_;
};

enum class WeightKind { power, product_of_powers, perturbed_power, constant };

/// power:            |x|^a
/// product_of_powers: prod_k |x - center_k|^(a_k)
/// perturbed_power:  |x|^a (1 + amplitude sin(frequency x + phase)),
///                   phase = 2 pi u with u the first SplitMix64(seed) uniform
/// constant:         value
struct WeightFamilySpec {
  WeightKind kind = WeightKind::power;
  double a = 0.0;
  std::vector<std::pair<double, double>> factors;  // (center, exponent)
  double amplitude = 0.0;
  double frequency = 1.0;
  std::uint64_t seed = 0;
  double value = 1.0;

  Weight build(const Grid& grid) const;
  std::string label() const;
};

/// max over samples x of M_F w(x) / w(x).
double a1_constant(const Weight& w, const BallFamily& family);
double a1_constant(const Weight& w, AllIntervals);

/// Per-ball avg(w) avg(w^(-1/(p-1)))^(p-1), in family order.
std::vector<double> ap_per_ball(const Weight& w, double p, const BallFamily& family);
double ap_constant(const Weight& w, double p, const BallFamily& family);

/// max over F of avg(w^p)^(1/p) prod_i avg(w_i^(-p_i'))^(1/p_i'),
/// w = prod w_i, 1/p = sum 1/p_i.
double ap_vec_constant(std::span<const Weight> weights, std::span<const double> p,
                       const BallFamily& family);
/// max over F of avg(w) prod_i exp(avg(log(1/w_i))).
double a_infty_vec_constant(std::span<const Weight> weights, const BallFamily& family);
std::vector<double> a_infty_vec_per_ball(std::span<const Weight> weights,
                                         const BallFamily& family);

/// (M_F(w^r))^(1/r).
GridFn m_r_weight(const Weight& w, double r, const BallFamily& family);
GridFn m_r_weight(const Weight& w, double r, AllIntervals);

/// sigma = w^(-1/(p-1)).
Weight dual_weight(const Weight& w, double p);

}  // namespace commlab
