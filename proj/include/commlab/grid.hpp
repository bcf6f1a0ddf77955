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
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace commlab {

/// Half-open range [begin, end) of sample indices.
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return end <= begin; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
  bool covers(const IndexRange& other) const {
    return other.empty() || (other.begin >= begin && other.end <= end);
  }
  bool operator==(const IndexRange&) const = default;
};

/// An interval (center - radius, center + radius). Side length is 2 * radius.
struct Ball {
  double center = 0.0;
  double radius = 1.0;

  double left() const { return center - radius; }
  double right() const { return center + radius; }
  double side_length() const { return 2.0 * radius; }
  Ball dilate(double factor) const { return Ball{center, factor * radius}; }
  bool operator==(const Ball&) const = default;
};

/// Uniform grid on (left, right) with n cells; samples sit at cell midpoints
/// x_i = left + (i + 1/2) h, h = (right - left) / n.
class Grid {
 public:
  Grid(double left, double right, std::size_t n);

  double left() const { return left_; }
  double right() const { return right_; }
  std::size_t size() const { return n_; }
  double step() const { return h_; }
  double x(std::size_t i) const { return (*points_)[i]; }
  std::span<const double> points() const { return *points_; }

  /// Samples strictly inside the ball: |x_i - center| < radius.
  IndexRange range(const Ball& ball) const;
  IndexRange all() const { return {0, n_}; }
  std::size_t nearest(double x) const;
  bool contains(const Ball& ball) const {
    return ball.left() >= left_ && ball.right() <= right_;
  }

  bool operator==(const Grid& other) const {
    return left_ == other.left_ && right_ == other.right_ && n_ == other.n_;
  }

 private:
  double left_;
  double right_;
  std::size_t n_;
  double h_;
  std::shared_ptr<const std::vector<double>> points_;
};

/// Real-valued samples on a grid. All samples are finite.
class GridFn {
 public:
  GridFn(Grid grid, std::vector<double> values);
  static GridFn zeros(const Grid& grid);
  static GridFn constant(const Grid& grid, double value);
  static GridFn sample(const Grid& grid, const std::function<double(double)>& fn);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  double sup_norm() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

void require_same_grid(const GridFn& a, const GridFn& b);

GridFn operator+(const GridFn& a, const GridFn& b);
GridFn operator-(const GridFn& a, const GridFn& b);
GridFn operator*(const GridFn& a, const GridFn& b);
GridFn operator*(double scalar, const GridFn& a);
GridFn operator+(const GridFn& a, double shift);
GridFn abs(const GridFn& a);
GridFn transform(const GridFn& a, const std::function<double(double)>& fn);

/// Mean of samples in B, i.e. (sum over samples of f h) / (count h).
/// Summation is index-ascending. Throws "empty ball" if B holds no sample.
double average(const GridFn& f, const Ball& ball);
double average(std::span<const double> values);

/// (average of |f|^q over B)^(1/q), q > 0.
double lq_mean(const GridFn& f, const Ball& ball, double q);
double lq_mean(std::span<const double> values, double q);

GridFn restrict_inside(const GridFn& f, const Ball& ball);
GridFn restrict_outside(const GridFn& f, const Ball& ball);

double ess_inf(const GridFn& f, const Ball& ball);
double ess_sup(const GridFn& f, const Ball& ball);

enum class MarginRule { require_2B_inside, clip_to_domain };

/// Finite set of balls over which sups and infs are taken.
class BallFamily {
 public:
  /// Filters `balls` by the margin rule; throws "empty family" if none remain.
  BallFamily(const Grid& grid, std::vector<Ball> balls, MarginRule rule);

  std::span<const Ball> balls() const { return balls_; }
  std::size_t size() const { return balls_.size(); }
  MarginRule rule() const { return rule_; }
  const Ball& operator[](std::size_t i) const { return balls_[i]; }

 private:
  std::vector<Ball> balls_;
  MarginRule rule_;
};

/// Tag selecting the brute-force "every grid-aligned interval" family.
struct AllIntervals {};

/// `centers` equispaced centers over the domain (or over [center_lo, center_hi]
/// when given), radii r_min * 2^(k / per_octave) for k < scales.
/// Order: center-major, then increasing radius.
BallFamily dyadic_family(const Grid& grid, int centers, int scales, MarginRule rule,
                         double r_min, int per_octave = 1);
BallFamily dyadic_family(const Grid& grid, int centers, int scales, MarginRule rule,
                         double r_min, double center_lo, double center_hi,
                         int per_octave = 1);

/// Centers at every `stride`-th sample, radii h * ratio^k up to the domain length.
BallFamily dense_family(const Grid& grid, std::size_t stride, double ratio,
                        MarginRule rule = MarginRule::clip_to_domain);

}  // namespace commlab
