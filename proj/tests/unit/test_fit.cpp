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

#include "../support/oracles.hpp"
#include "commlab/error.hpp"
#include "commlab/fit.hpp"
#include "commlab/rng.hpp"

using namespace commlab;

namespace {

struct Sample {
  std::vector<double> x;
  std::vector<double> y;
};

Sample noisy_line(std::size_t m, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Sample s;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(rng.uniform(0.05, 2.0));
    s.x.push_back(x);
    s.y.push_back(0.3 - 0.7 * x + rng.uniform(-1.0, 1.0));
  }
  return s;
}

// Every line through two samples, objective evaluated from scratch.
double brute_vertices(const Sample& s, double q) {
  double best = 1e300;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    for (std::size_t j = i + 1; j < s.x.size(); ++j) {
      if (s.x[i] == s.x[j]) continue;
      const double t = (s.y[j] - s.y[i]) / (s.x[j] - s.x[i]);
      best = std::min(best, oracle::affine_objective(s.y, s.x, s.y[i] - t * s.x[i], t, q));
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("fit") {

TEST_CASE("best constant for the standard exponents") {
  const std::vector<double> y{4.0, -1.0, 2.5, 7.0, 0.0, 2.0};
  const fit::ConstantFit two = fit::best_constant(y, 2.0);
  CHECK(two.constant == doctest::Approx(14.5 / 6.0));
  const fit::ConstantFit one = fit::best_constant(y, 1.0);
  CHECK(one.constant == 2.0);  // lower median
  CHECK(one.value == doctest::Approx(oracle::constant_objective(y, 2.25, 1.0)));
  for (double q : {0.5, 1.0 / 3.0, 1.5, 3.0}) {
    CAPTURE(q);
    const fit::ConstantFit c = fit::best_constant(y, q);
    CHECK(c.value == doctest::Approx(oracle::grid_search_constant(y, q)).epsilon(1e-7));
    CHECK(c.value == doctest::Approx(fit::objective(y, c.constant, q)).epsilon(1e-12));
  }
  CHECK(fit::best_constant(std::vector<double>{3.0, 3.0}, 0.5).value == 0.0);
  CHECK_THROWS_AS(fit::best_constant(std::vector<double>{}, 1.0), Error);
  CHECK_THROWS_AS(fit::best_constant(y, 0.0), Error);
}

TEST_CASE("exact line has zero residual for every exponent") {
  std::vector<double> x;
  std::vector<double> y;
  for (int i = 0; i < 40; ++i) {
    x.push_back(0.1 * i);
    y.push_back(1.5 - 2.0 * x.back());
  }
  for (double q : {1.0 / 3.0, 0.5, 1.0, 1.5, 2.0}) {
    CAPTURE(q);
    const fit::AffineSolution s = fit::best_affine(y, x, q);
    CHECK(s.value <= 1e-9);
    CHECK(s.slope == doctest::Approx(-2.0).epsilon(1e-6));
  }
}

TEST_CASE("least squares matches the normal equations") {
  const Sample s = noisy_line(50, 1);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    sx += s.x[i];
    sy += s.y[i];
    sxx += s.x[i] * s.x[i];
    sxy += s.x[i] * s.y[i];
  }
  const double slope = (50 * sxy - sx * sy) / (50 * sxx - sx * sx);
  const fit::AffineSolution ls = fit::best_affine(s.y, s.x, 2.0);
  CHECK(ls.method == fit::Method::closed_form);
  CHECK(ls.slope == doctest::Approx(slope).epsilon(1e-10));
  CHECK(ls.intercept == doctest::Approx((sy - slope * sx) / 50).epsilon(1e-10));
}

TEST_CASE("q < 1 enumeration agrees with a brute-force vertex scan") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Sample s = noisy_line(24 + 7 * seed, seed);
    for (double q : {1.0 / 3.0, 0.5, 0.8}) {
      CAPTURE(seed);
      CAPTURE(q);
      const fit::AffineSolution a = fit::best_affine(s.y, s.x, q);
      CHECK(a.method == fit::Method::exhaustive_vertices);
      CHECK(a.exact);
      CHECK(a.value == doctest::Approx(brute_vertices(s, q)).epsilon(1e-6));
    }
  }
}

TEST_CASE("q = 1 and q = 1.5 against the profiled grid search") {
  for (std::uint64_t seed = 10; seed < 14; ++seed) {
    const Sample s = noisy_line(60, seed);
    CAPTURE(seed);
    const fit::AffineSolution one = fit::best_affine(s.y, s.x, 1.0);
    CHECK(one.method == fit::Method::irls_vertex_walk);
    CHECK(one.value == doctest::Approx(oracle::grid_search_affine(s.y, s.x, 1.0)).epsilon(1e-7));
    const fit::AffineSolution mid = fit::best_affine(s.y, s.x, 1.5);
    CHECK(mid.value == doctest::Approx(oracle::grid_search_affine(s.y, s.x, 1.5)).epsilon(1e-7));
  }
}

TEST_CASE("vertex walk on large samples stays close to full enumeration") {
  const Sample s = noisy_line(300, 77);
  for (double q : {0.5, 1.0 / 3.0}) {
    CAPTURE(q);
    const fit::AffineSolution walk = fit::best_affine(s.y, s.x, q);
    CHECK(walk.method == fit::Method::vertex_walk);
    CHECK_FALSE(walk.exact);
    fit::AffineOptions all;
    all.exhaustive_limit = 1000;
    const fit::AffineSolution full = fit::best_affine(s.y, s.x, q, all);
    CHECK(full.method == fit::Method::exhaustive_vertices);
    CHECK(walk.value >= full.value * (1.0 - 1e-12));
    CHECK(walk.value <= full.value * 1.01);
  }
}

TEST_CASE("constant x falls back to the constant fit") {
  const std::vector<double> x(10, 2.0);
  const std::vector<double> y{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const fit::AffineSolution s = fit::best_affine(y, x, 2.0);
  CHECK(s.method == fit::Method::degenerate);
  CHECK(s.slope == 0.0);
  CHECK(s.value == doctest::Approx(fit::best_constant(y, 2.0).value));
  CHECK_THROWS_AS(fit::best_affine(y, std::vector<double>(9, 0.0), 2.0), Error);
}

}  // TEST_SUITE
