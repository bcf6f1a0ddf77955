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

// Slow, direct reference computations shared by the unit tests and the
// acceptance runner. Nothing here calls into the library's solvers.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace commlab::oracle {

inline double abs_pow(double v, double e) {
  const double a = std::abs(v);
  if (e == 1.0) return a;
  if (e == 2.0) return a * a;
  if (e == 0.5) return std::sqrt(a);
  if (e == 1.0 / 3.0) return std::cbrt(a);
  return std::pow(a, e);
}

inline double finish(double sum, std::size_t m, double e) {
  const double mean = sum / static_cast<double>(m);
  if (e == 1.0) return mean;
  if (e == 2.0) return std::sqrt(mean);
  if (e == 1.0 / 3.0) return mean * mean * mean;
  return std::pow(mean, 1.0 / e);
}

inline double constant_objective(std::span<const double> y, double c, double e) {
  double s = 0.0;
  for (double v : y) s += abs_pow(v - c, e);
  return finish(s, y.size(), e);
}

inline double affine_objective(std::span<const double> y, std::span<const double> x, double c0,
                               double c1, double e) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += abs_pow(y[i] - c0 - c1 * x[i], e);
  return finish(s, y.size(), e);
}

// Indices of the `keep` smallest local minima of v (edges included).
inline std::vector<std::size_t> local_minima(const std::vector<double>& v, std::size_t keep) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool left = i == 0 || v[i] <= v[i - 1];
    const bool right = i + 1 == v.size() || v[i] <= v[i + 1];
    if (left && right) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  if (idx.size() > keep) idx.resize(keep);
  return idx;
}

// Zooms a 1-D search around `c`, starting at lattice step `step`. Each round
// refines around the `beam` best points seen in the previous round, so two
// minima closer than the current step are both followed.
template <class F>
double zoom_1d(const F& fn, double c, double step, std::size_t beam) {
  std::vector<std::pair<double, double>> front{{fn(c), c}};
  double best = front.front().first;
  for (int round = 0; round < 48; ++round) {
    std::vector<std::pair<double, double>> next;
    for (const auto& [value, center] : front) {
      for (int k = -5; k <= 5; ++k) {
        const double t = center + step * k / 2.5;
        next.emplace_back(k == 0 ? value : fn(t), t);
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end(),
                           [](const auto& a, const auto& b) { return a.second == b.second; }),
               next.end());
    if (next.size() > beam) next.resize(beam);
    best = std::min(best, next.front().first);
    front = std::move(next);
    step /= 2.5;
  }
  return best;
}

// Dense scan of [lo, hi], then a zoom from the `keep` lowest local minima.
template <class F>
double scan_and_zoom(const F& fn, double lo, double hi, std::size_t n, std::size_t keep,
                     std::size_t beam) {
  std::vector<double> v(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) v[i] = fn(lo + step * static_cast<double>(i));
  double best = *std::min_element(v.begin(), v.end());
  for (std::size_t i : local_minima(v, keep)) {
    best = std::min(best, zoom_1d(fn, lo + step * static_cast<double>(i), step, beam));
  }
  return best;
}

/// inf over c of (avg |y - c|^e)^(1/e) by grid search over [min y, max y].
inline double grid_search_constant(std::span<const double> y, double e) {
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  if (*hi == *lo) return 0.0;
  return scan_and_zoom([&](double c) { return constant_objective(y, c, e); }, *lo, *hi, 20001, 20001, 6);
}

// inf over the intercept for fixed residuals r. For e < 1 each |r_i - c|^e is
// concave between breakpoints, so the infimum sits at some r_j; for e >= 1 the
// objective is convex and a ternary search suffices.
inline double profile_constant(std::span<const double> r, double e) {
  if (e < 1.0) {
    // Pairwise |r_i - r_j|^e, each pair computed once.
    const std::size_t m = r.size();
    std::vector<double> sums(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const double t = abs_pow(r[i] - r[j], e);
        sums[i] += t;
        sums[j] += t;
      }
    }
    return finish(*std::min_element(sums.begin(), sums.end()), m, e);
  }
  auto [lo_it, hi_it] = std::minmax_element(r.begin(), r.end());
  double lo = *lo_it;
  double hi = *hi_it;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (constant_objective(r, m1, e) <= constant_objective(r, m2, e)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return constant_objective(r, 0.5 * (lo + hi), e);
}

/// inf over (c0, c1) of (avg |y - c0 - c1 x|^e)^(1/e): grid search over the
/// slope on a box sized from the data spread, intercept profiled out.
inline double grid_search_affine(std::span<const double> y, std::span<const double> x, double e) {
  const auto [ylo, yhi] = std::minmax_element(y.begin(), y.end());
  const auto [xlo, xhi] = std::minmax_element(x.begin(), x.end());
  const double xspan = *xhi - *xlo;
  if (xspan == 0.0) return grid_search_constant(y, e);
  const double slope_range = 2.0 * (*yhi - *ylo) / xspan;
  std::vector<double> r(y.size());
  auto profile = [&](double c1) {
    for (std::size_t i = 0; i < y.size(); ++i) r[i] = y[i] - c1 * x[i];
    return profile_constant(r, e);
  };
  return scan_and_zoom(profile, -slope_range, slope_range, 4001, 8, 6);
}

/// h sum over |i - j| > k of f_j / (pi (x_i - x_j)), k from the exclusion rule.
inline std::vector<double> hilbert_direct(std::span<const double> xs, std::span<const double> f,
                                          double h, double epsilon) {
  const double eps = epsilon == 0.0 ? h : epsilon;
  const auto k = static_cast<std::ptrdiff_t>(std::floor(eps / h * (1.0 + 1e-12)));
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
  std::vector<double> out(xs.size(), 0.0);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      if (std::abs(i - j) <= k) continue;
      s += f[j] / (std::numbers::pi * (xs[i] - xs[j]));
    }
    out[i] = h * s;
  }
  return out;
}

/// Uncentered maximal function over every index interval [a, b], O(n^3).
inline std::vector<double> maximal_all_intervals(std::span<const double> f) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      double s = 0.0;
      for (std::size_t i = a; i <= b; ++i) s += std::abs(f[i]);
      const double avg = s / static_cast<double>(b - a + 1);
      for (std::size_t i = a; i <= b; ++i) out[i] = std::max(out[i], avg);
    }
  }
  return out;
}

/// avg(w) avg(w^(-1/(p-1)))^(p-1) on samples [a, b).
inline double ap_on_range(std::span<const double> w, std::size_t a, std::size_t b, double p) {
  double s = 0.0;
  double t = 0.0;
  for (std::size_t i = a; i < b; ++i) {
    s += w[i];
    t += std::pow(w[i], -1.0 / (p - 1.0));
  }
  const double m = static_cast<double>(b - a);
  return (s / m) * std::pow(t / m, p - 1.0);
}

}  // namespace commlab::oracle
