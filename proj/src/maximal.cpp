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

#include "commlab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "commlab/error.hpp"
#include "commlab/fit.hpp"
#include "commlab/parallel.hpp"

namespace commlab {

namespace {

// Per-ball values broadcast to the samples of each ball with max.
GridFn broadcast_max(const Grid& grid, const BallFamily& family, std::span<const double> per_ball) {
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t k = 0; k < family.size(); ++k) {
    const IndexRange r = grid.range(family[k]);
    for (std::size_t i = r.begin; i < r.end; ++i) out[i] = std::max(out[i], per_ball[k]);
  }
  return GridFn(grid, std::move(out));
}

std::vector<double> prefix_abs(std::span<const double> v) {
  std::vector<double> s(v.size() + 1, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) s[i + 1] = s[i] + std::abs(v[i]);
  return s;
}

// out[x] = max over a <= x <= b of value(a, b).
template <class Value>
std::vector<double> sup_over_intervals(std::size_t n, Value value) {
  std::vector<double> out(n, 0.0);
  std::vector<double> suffix(n + 1);
  for (std::size_t a = 0; a < n; ++a) {
    suffix[n] = 0.0;
    for (std::size_t b = n; b-- > a;) suffix[b] = std::max(value(a, b), suffix[b + 1]);
    for (std::size_t x = a; x < n; ++x) out[x] = std::max(out[x], suffix[x]);
  }
  return out;
}

}  // namespace

double inverse_power(double v, double s) {
  if (s == 1.0) return v;
  if (s == 0.5) return v * v;
  return std::pow(v, 1.0 / s);
}

GridFn maximal(const GridFn& f, const BallFamily& family) {
  const Grid& grid = f.grid();
  std::vector<double> per_ball(family.size());
  parallel_for(family.size(), [&](std::size_t k) {
    const IndexRange r = grid.range(family[k]);
    double sum = 0.0;
    for (std::size_t i = r.begin; i < r.end; ++i) sum += std::abs(f[i]);
    per_ball[k] = sum / static_cast<double>(r.size());
  });
  return broadcast_max(grid, family, per_ball);
}

GridFn maximal(const GridFn& f, AllIntervals) {
  const auto s = prefix_abs(f.values());
  auto out = sup_over_intervals(f.size(), [&](std::size_t a, std::size_t b) {
    if (a == b) return std::abs(f[a]);
    return (s[b + 1] - s[a]) / static_cast<double>(b + 1 - a);
  });
  return GridFn(f.grid(), std::move(out));
}

GridFn maximal_power(const GridFn& f, double s, const BallFamily& family) {
  require(s > 0.0, "maximal_power: s must be positive");
  const GridFn powered = s == 1.0 ? f : transform(f, [s](double v) { return std::pow(std::abs(v), s); });
  return transform(maximal(powered, family), [s](double v) { return inverse_power(v, s); });
}

GridFn maximal_power(const GridFn& f, double s, AllIntervals) {
  require(s > 0.0, "maximal_power: s must be positive");
  const GridFn powered = s == 1.0 ? f : transform(f, [s](double v) { return std::pow(std::abs(v), s); });
  return transform(maximal(powered, AllIntervals{}), [s](double v) { return inverse_power(v, s); });
}

GridFn multi_maximal(const GridFn& f, const GridFn& g, AllIntervals) {
  require_same_grid(f, g);
  const auto sf = prefix_abs(f.values());
  const auto sg = prefix_abs(g.values());
  auto out = sup_over_intervals(f.size(), [&](std::size_t a, std::size_t b) {
    if (a == b) return std::abs(f[a]) * std::abs(g[a]);
    const double len = static_cast<double>(b + 1 - a);
    return ((sf[b + 1] - sf[a]) / len) * ((sg[b + 1] - sg[a]) / len);
  });
  return GridFn(f.grid(), std::move(out));
}

GridFn multi_maximal(const GridFn& f, const GridFn& g, const BallFamily& family) {
  require_same_grid(f, g);
  const GridFn af = abs(f);
  const GridFn ag = abs(g);
  std::vector<double> per_ball(family.size());
  parallel_for(family.size(), [&](std::size_t k) {
    per_ball[k] = average(af, family[k]) * average(ag, family[k]);
  });
  return broadcast_max(f.grid(), family, per_ball);
}

GridFn sharp_maximal(const GridFn& f, double delta, const BallFamily& family) {
  require(delta > 0.0 && delta <= 1.0, "sharp_maximal: delta must lie in (0, 1]");
  const Grid& grid = f.grid();
  std::vector<double> per_ball(family.size());
  parallel_for(family.size(), [&](std::size_t k) {
    const IndexRange r = grid.range(family[k]);
    per_ball[k] = fit::best_constant(f.values().subspan(r.begin, r.size()), delta).value;
  });
  return broadcast_max(grid, family, per_ball);
}

}  // namespace commlab
