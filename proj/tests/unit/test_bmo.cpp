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

#include "commlab/bmo.hpp"
#include "commlab/error.hpp"

using namespace commlab;

namespace {

const Grid& log_grid() {
  static const Grid g(-1.0, 1.0, 1 << 16);
  return g;
}

GridFn log_abs(const Grid& g) {
  return GridFn::sample(g, [](double x) { return std::log(std::abs(x)); });
}

BallFamily centered(const Grid& g, int kmax) {
  std::vector<Ball> balls;
  for (int k = 1; k <= kmax; ++k) balls.push_back({0.0, std::exp2(-k)});
  return BallFamily(g, std::move(balls), MarginRule::clip_to_domain);
}

}  // namespace

TEST_SUITE("bmo") {

TEST_CASE("mean oscillation of log|x| on centered balls is 2/e") {
  const GridFn b = log_abs(log_grid());
  for (int k = 1; k <= 6; ++k) {
    CHECK(mean_oscillation(b, Ball{0.0, std::exp2(-k)}) ==
          doctest::Approx(2.0 / std::numbers::e).epsilon(1e-3));
  }
  CHECK(bmo_norm(b, centered(log_grid(), 6)) == doctest::Approx(2.0 / std::numbers::e).epsilon(1e-3));
  CHECK(mean_oscillation(GridFn::constant(log_grid(), 5.0), Ball{0.1, 0.3}) == 0.0);
}

TEST_CASE("John-Nirenberg ratio") {
  const GridFn b = log_abs(log_grid());
  const BallFamily fam = centered(log_grid(), 6);
  CHECK(jn_check(b, 1.0, fam) == doctest::Approx(1.0));
  // L^2 deviation of log t on (0, 1) is 1.
  CHECK(jn_check(b, 2.0, fam) == doctest::Approx(std::numbers::e / 4.0).epsilon(2e-3));
  CHECK(jn_check(GridFn::constant(log_grid(), 1.0), 2.0, fam) == 0.0);
}

TEST_CASE("dyadic drift of log|x| grows like j log 2") {
  const GridFn b = log_abs(log_grid());
  const DriftResult d = dyadic_drift_check(b, Ball{0.0, 1.0 / 64.0}, 8, centered(log_grid(), 6));
  CHECK(d.truncated);
  REQUIRE(d.rows.size() == 7);  // 2^6 / 64 = 1 still fits, 2^7 does not
  CHECK(d.rows[0].drift == 0.0);
  for (std::size_t j = 1; j < d.rows.size(); ++j) {
    CHECK(d.rows[j].drift == doctest::Approx(j * std::numbers::ln2).epsilon(1e-3));
    CHECK(d.rows[j].normalized ==
          doctest::Approx(std::numbers::ln2 * std::numbers::e / 2.0).epsilon(2e-3));
  }
}

TEST_CASE("affine fit reports f approximated by c0 - c1 b") {
  const Grid g(-1.0, 1.0, 512);
  const GridFn b = log_abs(g);
  const GridFn f = GridFn::sample(g, [](double x) { return 2.0 - 3.0 * std::log(std::abs(x)); });
  const Ball ball{0.2, 0.5};
  for (double q : {0.5, 1.0, 2.0}) {
    CAPTURE(q);
    const AffineFit fit = bmo_b_q_fit(f, b, ball, q);
    CHECK(fit.c0 == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(fit.c1 == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(fit.value <= 1e-9);
  }
}

TEST_CASE("norm over a family picks the worst ball") {
  const Grid g(-1.0, 1.0, 2048);
  const GridFn b = log_abs(g);
  const GridFn f = b * b;
  const BallFamily fam = centered(g, 5);
  const BmoBqResult r = bmo_b_q_norm(f, b, 2.0, fam);
  REQUIRE(r.per_ball.size() == fam.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < fam.size(); ++k) {
    const double v = bmo_b_q_fit(f, b, fam[k], 2.0).value;
    CHECK(r.per_ball[k] == v);
    worst = std::max(worst, v);
  }
  CHECK(r.value == worst);
  CHECK_FALSE(r.nonconvex);
  // On centered balls the continuum residual is scale-free: with E = -log t
  // exponential, the L^2 residual of E^2 against 1, E is sqrt(20 - 16) = 2.
  // The grid loses the tail near 0, so smaller balls sit further below.
  for (std::size_t k = 1; k < fam.size(); ++k) CHECK(r.per_ball[k] < r.per_ball[k - 1]);
  CHECK(r.per_ball.front() < 2.0);
  CHECK_THROWS_AS(bmo_b_q_fit(f, b, Ball{5.0, 0.1}, 2.0), Error);
}

}  // TEST_SUITE
