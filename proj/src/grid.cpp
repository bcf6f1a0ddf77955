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

#include "commlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "commlab/error.hpp"

namespace commlab {

Grid::Grid(double left, double right, std::size_t n) : left_(left), right_(right), n_(n) {
  require(std::isfinite(left) && std::isfinite(right) && left < right,
          "grid: left must be < right");
  require(n >= 8, "grid: n must be >= 8");
  h_ = (right - left) / static_cast<double>(n);
  auto pts = std::make_shared<std::vector<double>>(n);
  for (std::size_t i = 0; i < n; ++i) (*pts)[i] = left + (static_cast<double>(i) + 0.5) * h_;
  points_ = std::move(pts);
}

IndexRange Grid::range(const Ball& ball) const {
  const double c = ball.center;
  const double r = ball.radius;
  auto inside = [&](std::size_t i) { return std::abs(x(i) - c) < r; };
  auto clamp_index = [&](double v) -> std::size_t {
    if (!(v > 0.0)) return 0;
    if (v >= static_cast<double>(n_)) return n_;
    return static_cast<std::size_t>(v);
  };

  std::size_t i = clamp_index(std::floor((c - r - left_) / h_ - 0.5) - 1.0);
  while (i < n_ && !inside(i) && x(i) < c) ++i;
  if (i == n_ || !inside(i)) return {i, i};
  const std::size_t begin = i;
  std::size_t j = std::max(begin + 1, clamp_index(std::floor((c + r - left_) / h_ - 0.5) + 2.0));
  j = std::min(j, n_);
  while (j > begin + 1 && !inside(j - 1)) --j;
  return {begin, j};
}

std::size_t Grid::nearest(double xv) const {
  const double v = std::floor((xv - left_) / h_);
  if (!(v > 0.0)) return 0;
  if (v >= static_cast<double>(n_ - 1)) return n_ - 1;
  return static_cast<std::size_t>(v);
}

GridFn::GridFn(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  require(values_.size() == grid_.size(), "grid function: sample count does not match grid");
  for (double v : values_) require(std::isfinite(v), "grid function: non-finite sample");
}

GridFn GridFn::zeros(const Grid& grid) { return GridFn(grid, std::vector<double>(grid.size(), 0.0)); }

GridFn GridFn::constant(const Grid& grid, double value) {
  return GridFn(grid, std::vector<double>(grid.size(), value));
}

GridFn GridFn::sample(const Grid& grid, const std::function<double(double)>& fn) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = fn(grid.x(i));
  return GridFn(grid, std::move(v));
}

double GridFn::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void require_same_grid(const GridFn& a, const GridFn& b) {
  require(a.grid() == b.grid(), "grid functions live on different grids");
}

namespace {

template <class Op>
GridFn zip(const GridFn& a, const GridFn& b, Op op) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
  return GridFn(a.grid(), std::move(v));
}

}  // namespace

GridFn operator+(const GridFn& a, const GridFn& b) { return zip(a, b, std::plus<>{}); }
GridFn operator-(const GridFn& a, const GridFn& b) { return zip(a, b, std::minus<>{}); }
GridFn operator*(const GridFn& a, const GridFn& b) { return zip(a, b, std::multiplies<>{}); }

GridFn operator*(double scalar, const GridFn& a) {
  return transform(a, [scalar](double v) { return scalar * v; });
}

GridFn operator+(const GridFn& a, double shift) {
  return transform(a, [shift](double v) { return v + shift; });
}

GridFn abs(const GridFn& a) {
  return transform(a, [](double v) { return std::abs(v); });
}

GridFn transform(const GridFn& a, const std::function<double(double)>& fn) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(a[i]);
  return GridFn(a.grid(), std::move(v));
}

double average(std::span<const double> values) {
  require(!values.empty(), "empty ball");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double average(const GridFn& f, const Ball& ball) {
  const IndexRange r = f.grid().range(ball);
  return average(f.values().subspan(r.begin, r.size()));
}

double lq_mean(std::span<const double> values, double q) {
  require(q > 0.0, "lq_mean: q must be positive");
  require(!values.empty(), "empty ball");
  double sum = 0.0;
  if (q == 1.0) {
    for (double v : values) sum += std::abs(v);
    return sum / static_cast<double>(values.size());
  }
  for (double v : values) sum += std::pow(std::abs(v), q);
  return std::pow(sum / static_cast<double>(values.size()), 1.0 / q);
}

double lq_mean(const GridFn& f, const Ball& ball, double q) {
  const IndexRange r = f.grid().range(ball);
  return lq_mean(f.values().subspan(r.begin, r.size()), q);
}

GridFn restrict_inside(const GridFn& f, const Ball& ball) {
  const IndexRange r = f.grid().range(ball);
  std::vector<double> v(f.size(), 0.0);
  for (std::size_t i = r.begin; i < r.end; ++i) v[i] = f[i];
  return GridFn(f.grid(), std::move(v));
}

GridFn restrict_outside(const GridFn& f, const Ball& ball) {
  const IndexRange r = f.grid().range(ball);
  std::vector<double> v(f.values().begin(), f.values().end());
  for (std::size_t i = r.begin; i < r.end; ++i) v[i] = 0.0;
  return GridFn(f.grid(), std::move(v));
}

double ess_inf(const GridFn& f, const Ball& ball) {
  const IndexRange r = f.grid().range(ball);
  require(!r.empty(), "empty ball");
  return *std::min_element(f.values().begin() + static_cast<std::ptrdiff_t>(r.begin),
                           f.values().begin() + static_cast<std::ptrdiff_t>(r.end));
}

double ess_sup(const GridFn& f, const Ball& ball) {
  const IndexRange r = f.grid().range(ball);
  require(!r.empty(), "empty ball");
  return *std::max_element(f.values().begin() + static_cast<std::ptrdiff_t>(r.begin),
                           f.values().begin() + static_cast<std::ptrdiff_t>(r.end));
}

BallFamily::BallFamily(const Grid& grid, std::vector<Ball> balls, MarginRule rule) : rule_(rule) {
  for (const Ball& b : balls) {
    require(b.radius > 0.0 && std::isfinite(b.radius) && std::isfinite(b.center),
            "ball radius must be positive");
    if (grid.range(b).empty()) continue;
    if (rule == MarginRule::require_2B_inside && !grid.contains(b.dilate(2.0))) continue;
    balls_.push_back(b);
  }
  require(!balls_.empty(), "empty family");
}

BallFamily dyadic_family(const Grid& grid, int centers, int scales, MarginRule rule,
                         double r_min, int per_octave) {
  return dyadic_family(grid, centers, scales, rule, r_min, grid.left(), grid.right(), per_octave);
}

BallFamily dyadic_family(const Grid& grid, int centers, int scales, MarginRule rule,
                         double r_min, double center_lo, double center_hi, int per_octave) {
  require(centers >= 1 && scales >= 1, "dyadic_family: centers and scales must be >= 1");
  require(r_min > 0.0, "dyadic_family: r_min must be positive");
  require(per_octave >= 1, "dyadic_family: per_octave must be >= 1");
  require(center_lo <= center_hi, "dyadic_family: empty center range");
  std::vector<Ball> balls;
  const double span = (center_hi - center_lo) / static_cast<double>(centers);
  for (int c = 0; c < centers; ++c) {
    const double center = center_lo + (static_cast<double>(c) + 0.5) * span;
    for (int k = 0; k < scales; ++k) {
      const double radius = r_min * std::exp2(static_cast<double>(k) / per_octave);
      balls.push_back({center, radius});
    }
  }
  return BallFamily(grid, std::move(balls), rule);
}

BallFamily dense_family(const Grid& grid, std::size_t stride, double ratio, MarginRule rule) {
  require(stride >= 1, "dense_family: stride must be >= 1");
  require(ratio > 1.0, "dense_family: ratio must exceed 1");
  const double length = grid.right() - grid.left();
  std::vector<double> radii;
  for (double r = grid.step(); r <= length; r *= ratio) radii.push_back(r);
  std::vector<Ball> balls;
  for (std::size_t i = 0; i < grid.size(); i += stride) {
    for (double r : radii) balls.push_back({grid.x(i), r});
  }
  return BallFamily(grid, std::move(balls), rule);
}

}  // namespace commlab
