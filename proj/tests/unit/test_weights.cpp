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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support/oracles.hpp"
#include "commlab/error.hpp"
#include "commlab/rng.hpp"
#include "commlab/weights.hpp"

using namespace commlab;

namespace {

Weight power_weight(const Grid& g, double a) {
  WeightFamilySpec spec;
  spec.a = a;
  return spec.build(g);
}

}  // namespace

TEST_SUITE("weights") {

TEST_CASE("samples are clamped below relative to the maximum") {
  const Grid g(-1.0, 1.0, 16);
  std::vector<double> v(16, 2.0);
  v[3] = 0.0;
  const Weight w(GridFn(g, v));
  CHECK(w.floor() == 2e-12);
  CHECK(w.fn()[3] == 2e-12);
  CHECK(w.fn()[4] == 2.0);
  CHECK_THROWS_AS(Weight(GridFn::zeros(g)), Error);
  v[0] = -1.0;
  CHECK_THROWS_AS(Weight(GridFn(g, v)), Error);
}

TEST_CASE("constant weight has unit characteristics") {
  const Grid g(-1.0, 1.0, 64);
  WeightFamilySpec spec;
  spec.kind = WeightKind::constant;
  spec.value = 3.0;
  const Weight w = spec.build(g);
  const BallFamily fam = dyadic_family(g, 4, 3, MarginRule::clip_to_domain, 0.1);
  CHECK(a1_constant(w, AllIntervals{}) == doctest::Approx(1.0));
  CHECK(a1_constant(w, fam) == doctest::Approx(1.0));
  for (double p : {1.5, 2.0, 4.0}) CHECK(ap_constant(w, p, fam) == doctest::Approx(1.0));
  const Weight ws[2] = {w, w};
  const double ps[2] = {2.0, 2.0};
  CHECK(ap_vec_constant(ws, ps, fam) == doctest::Approx(1.0));
  CHECK(a_infty_vec_constant(ws, fam) == doctest::Approx(1.0));
}

TEST_CASE("A_p against brute force over index ranges") {
  const Grid g(-2.0, 2.0, 200);
  const Weight w = power_weight(g, -0.4);
  const BallFamily fam = dyadic_family(g, 10, 5, MarginRule::clip_to_domain, 0.05);
  for (double p : {1.5, 2.0, 3.0}) {
    CAPTURE(p);
    const auto per = ap_per_ball(w, p, fam);
    REQUIRE(per.size() == fam.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < fam.size(); ++k) {
      // Strict membership computed here rather than through Grid::range.
      const Ball& b = fam[k];
      std::size_t lo = g.size();
      std::size_t hi = 0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (std::abs(g.x(i) - b.center) < b.radius) {
          lo = std::min(lo, i);
          hi = i + 1;
        }
      }
      const double expect = oracle::ap_on_range(w.fn().values(), lo, hi, p);
      CHECK(per[k] == doctest::Approx(expect).epsilon(1e-12));
      worst = std::max(worst, expect);
    }
    CHECK(ap_constant(w, p, fam) == doctest::Approx(worst).epsilon(1e-12));
  }
}

TEST_CASE("duality [sigma]_{p'} = [w]_p^(p'-1)") {
  const Grid g(-3.0, 3.0, 300);
  const BallFamily fam = dyadic_family(g, 12, 5, MarginRule::clip_to_domain, 0.05);
  for (double a : {-0.5, 0.3, 0.7}) {
    const Weight w = power_weight(g, a);
    for (double p : {1.5, 2.0, 3.0}) {
      const double pp = p / (p - 1.0);
      const double lhs = ap_constant(dual_weight(w, p), pp, fam);
      CHECK(lhs == doctest::Approx(std::pow(ap_constant(w, p, fam), pp - 1.0)).epsilon(1e-10));
    }
  }
}

TEST_CASE("characteristics grow with the family") {
  const Grid g(-2.0, 2.0, 256);
  const Weight w = power_weight(g, -0.5);
  const BallFamily small = dyadic_family(g, 4, 2, MarginRule::clip_to_domain, 0.25);
  const BallFamily big = dyadic_family(g, 16, 6, MarginRule::clip_to_domain, 0.03);
  CHECK(ap_constant(w, 2.0, small) <= ap_constant(w, 2.0, big));
  CHECK(a1_constant(w, big) <= a1_constant(w, AllIntervals{}) * (1.0 + 1e-12));
  // |x|^a with -1 < a <= 0 is A_1 with constant about 1 / (1 + a); a > 0 is not A_1.
  CHECK(a1_constant(w, AllIntervals{}) <= 2.5);
  const Weight up = power_weight(g, 0.5);
  CHECK(a1_constant(up, AllIntervals{}) > 10.0);
}

TEST_CASE("weight builders") {
  const Grid g(-1.0, 1.0, 32);
  WeightFamilySpec prod;
  prod.kind = WeightKind::product_of_powers;
  prod.factors = {{0.0, -0.2}, {0.5, 0.3}};
  const Weight pw = prod.build(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    CHECK(pw.fn()[i] == doctest::Approx(std::pow(std::abs(x), -0.2) * std::pow(std::abs(x - 0.5), 0.3)));
  }
  WeightFamilySpec pert;
  pert.kind = WeightKind::perturbed_power;
  pert.a = 0.1;
  pert.amplitude = 0.5;
  pert.frequency = 3.0;
  pert.seed = 99;
  const Weight p1 = pert.build(g);
  const Weight p2 = pert.build(g);
  CHECK(p1.fn().values()[7] == p2.fn().values()[7]);
  SplitMix64 rng(99);
  const double phase = 2.0 * std::numbers::pi * rng.uniform();
  const double x = g.x(7);
  CHECK(p1.fn()[7] == doctest::Approx(std::pow(std::abs(x), 0.1) * (1.0 + 0.5 * std::sin(3.0 * x + phase))));
  CHECK(pert.label() == "perturbed(0.1,0.5,3,99)");
  CHECK_THROWS_AS(power_weight(g, -1.0), Error);
}

TEST_CASE("vector A_p of a split power weight") {
  const Grid g(-2.0, 2.0, 128);
  const BallFamily fam = dyadic_family(g, 8, 4, MarginRule::clip_to_domain, 0.1);
  const Weight w1 = power_weight(g, 0.2);
  const Weight w2 = power_weight(g, -0.3);
  const Weight ws[2] = {w1, w2};
  const double ps[2] = {4.0, 4.0};
  // Direct: p = 2, p_i' = 4/3.
  double worst = 0.0;
  for (const Ball& b : fam.balls()) {
    double s = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    int c = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (std::abs(g.x(i) - b.center) >= b.radius) continue;
      const double a = w1.fn()[i];
      const double bb = w2.fn()[i];
      s += std::pow(a * bb, 2.0);
      t1 += std::pow(a, -4.0 / 3.0);
      t2 += std::pow(bb, -4.0 / 3.0);
      ++c;
    }
    const double v = std::sqrt(s / c) * std::pow(t1 / c, 0.75) * std::pow(t2 / c, 0.75);
    worst = std::max(worst, v);
  }
  CHECK(ap_vec_constant(ws, ps, fam) == doctest::Approx(worst).epsilon(1e-12));
  // Exponential average form for A_infinity.
  double worst_inf = 0.0;
  for (double v : a_infty_vec_per_ball(ws, fam)) worst_inf = std::max(worst_inf, v);
  CHECK(a_infty_vec_constant(ws, fam) == worst_inf);
  CHECK(worst_inf >= 1.0 - 1e-12);
}

}  // TEST_SUITE
