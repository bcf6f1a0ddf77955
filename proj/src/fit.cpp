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

#include "commlab/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "commlab/error.hpp"
#include "commlab/simd/kernels.hpp"

namespace commlab::fit {

namespace {

double power_sum(std::span<const double> y, std::span<const double> x, double c0, double c1,
                 double q) {
  return simd::kernels().abs_pow_sum(y.data(), x.data(), y.size(), c0, c1, q);
}

double term(double y, double x, double c0, double c1, double q) {
  const double r = (y - c0) - c1 * x;
  if (q == 1.0) return std::abs(r);
  if (q == 2.0) return r * r;
  if (q == 0.5) return std::sqrt(std::abs(r));
  return std::pow(std::abs(r), q);
}

double root_mean(double sum, std::size_t m, double q) {
  const double mean = sum / static_cast<double>(m);
  if (q == 1.0) return mean;
  if (q == 2.0) return std::sqrt(mean);
  if (q == 0.5) return mean * mean;
  return std::pow(mean, 1.0 / q);
}

void check_inputs(std::span<const double> y, double q) {
  require(!y.empty(), "empty ball");
  require(q > 0.0 && std::isfinite(q), "fit: exponent must be positive");
}

// Lines through sample a and sample b have their residuals zero by
// construction; drop the rounding residue of those two terms.
double vertex_sum(std::span<const double> y, std::span<const double> x, double q, double c0,
                  double c1, std::size_t a, std::size_t b) {
  double s = power_sum(y, x, c0, c1, q);
  s -= term(y[a], x[a], c0, c1, q);
  if (b != a) s -= term(y[b], x[b], c0, c1, q);
  return std::max(s, 0.0);
}

struct Vertex {
  double c0 = 0.0;
  double c1 = 0.0;
  double sum = std::numeric_limits<double>::infinity();
  std::size_t a = 0;
  std::size_t b = 0;
};

bool distinct(double u, double v) {
  return std::abs(u - v) > 1e-14 * std::max({1.0, std::abs(u), std::abs(v)});
}

// Minimises along the line through sample `anchor` (residual held at zero).
// Every breakpoint of the restricted objective is a vertex (anchor, k).
Vertex line_search(std::span<const double> y, std::span<const double> x, double q,
                   std::size_t anchor) {
  const std::size_t m = y.size();
  Vertex best;
  if (q == 1.0) {
    // Weighted median of slopes rho_k with weights |x_k - x_anchor|.
    std::vector<std::pair<double, std::size_t>> slopes;
    slopes.reserve(m);
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (!distinct(x[k], x[anchor])) continue;
      slopes.emplace_back((y[k] - y[anchor]) / (x[k] - x[anchor]), k);
      total += std::abs(x[k] - x[anchor]);
    }
    if (slopes.empty()) return best;
    std::sort(slopes.begin(), slopes.end());
    double cumulative = 0.0;
    std::size_t pick = slopes.size() - 1;
    for (std::size_t s = 0; s < slopes.size(); ++s) {
      cumulative += std::abs(x[slopes[s].second] - x[anchor]);
      if (cumulative >= 0.5 * total) {
        pick = s;
        break;
      }
    }
    // The median set may be an interval; check the neighbour too.
    for (std::size_t s = pick; s < std::min(pick + 2, slopes.size()); ++s) {
      const double t = slopes[s].first;
      const double c0 = y[anchor] - t * x[anchor];
      const double sum = vertex_sum(y, x, q, c0, t, anchor, slopes[s].second);
      if (sum < best.sum) best = {c0, t, sum, anchor, slopes[s].second};
    }
    return best;
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (!distinct(x[k], x[anchor])) continue;
    const double t = (y[k] - y[anchor]) / (x[k] - x[anchor]);
    const double c0 = y[anchor] - t * x[anchor];
    const double sum = vertex_sum(y, x, q, c0, t, anchor, k);
    if (sum < best.sum) best = {c0, t, sum, anchor, k};
  }
  return best;
}

std::vector<std::size_t> incident_lines(std::span<const double> y, std::span<const double> x,
                                        const Vertex& v) {
  std::vector<std::size_t> lines{v.a};
  if (v.b != v.a) lines.push_back(v.b);
  for (std::size_t k = 0; k < y.size() && lines.size() < 8; ++k) {
    if (k == v.a || k == v.b) continue;
    const double r = (y[k] - v.c0) - v.c1 * x[k];
    if (std::abs(r) <= 1e-12 * (1.0 + std::abs(y[k]) + std::abs(v.c1 * x[k]))) lines.push_back(k);
  }
  return lines;
}

// Local descent over vertices for q <= 1. Only the start slope matters: the
// intercept is re-fitted for it first.
Vertex vertex_walk(std::span<const double> y, std::span<const double> x, double q, double c1,
                   int& iterations) {
  const std::size_t m = y.size();
  // Snap the intercept for the given slope; the optimum lies on a data line.
  std::vector<double> shifted(m);
  for (std::size_t i = 0; i < m; ++i) shifted[i] = y[i] - c1 * x[i];
  const ConstantFit snap = best_constant(shifted, q);
  std::size_t anchor = 0;
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const double r = std::abs(shifted[i] - snap.constant);
    if (r < closest) {
      closest = r;
      anchor = i;
    }
  }
  Vertex current{y[anchor] - c1 * x[anchor], c1, 0.0, anchor, anchor};
  current.sum = vertex_sum(y, x, q, current.c0, current.c1, anchor, anchor);

  for (int it = 0; it < 500; ++it) {
    ++iterations;
    bool improved = false;
    for (std::size_t line : incident_lines(y, x, current)) {
      const Vertex candidate = line_search(y, x, q, line);
      if (candidate.sum < current.sum * (1.0 - 1e-14) - 1e-300) {
        current = candidate;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return current;
}

struct Irls {
  double c0;
  double c1;
  int iterations;
};

Irls irls(std::span<const double> y, std::span<const double> x, double q, int max_iterations) {
  const std::size_t m = y.size();
  AffineSolution ls = least_squares(y, x);
  double c0 = ls.intercept;
  double c1 = ls.slope;
  double mean_abs = 0.0;
  for (std::size_t i = 0; i < m; ++i) mean_abs += std::abs((y[i] - c0) - c1 * x[i]);
  mean_abs /= static_cast<double>(m);
  double eps = std::max(1e-2 * mean_abs, 1e-12);
  double prev = power_sum(y, x, c0, c1, q);
  int it = 0;
  for (; it < max_iterations; ++it) {
    double sw = 0.0, sx = 0.0, sy = 0.0;
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double r = std::max(std::abs((y[i] - c0) - c1 * x[i]), eps);
      w[i] = q == 1.0 ? 1.0 / r : std::pow(r, q - 2.0);
      sw += w[i];
      sx += w[i] * x[i];
      sy += w[i] * y[i];
    }
    const double xm = sx / sw;
    const double ym = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sxx += w[i] * (x[i] - xm) * (x[i] - xm);
      sxy += w[i] * (x[i] - xm) * (y[i] - ym);
    }
    if (!(sxx > 0.0)) break;
    const double n1 = sxy / sxx;
    const double n0 = ym - n1 * xm;
    const double next = power_sum(y, x, n0, n1, q);
    const bool at_floor = eps <= 1e-12;
    if (next <= prev) {
      c0 = n0;
      c1 = n1;
    }
    const double decrease = (prev - next) / std::max(prev, 1e-300);
    prev = std::min(prev, next);
    if (at_floor && decrease < 1e-11) break;
    eps = std::max(0.5 * eps, 1e-12);
  }
  return {c0, c1, it};
}

}  // namespace

double objective(std::span<const double> y, std::span<const double> x, double c0, double c1,
                 double q) {
  check_inputs(y, q);
  require(x.size() == y.size(), "fit: x and y lengths differ");
  return root_mean(power_sum(y, x, c0, c1, q), y.size(), q);
}

double objective(std::span<const double> y, double c, double q) {
  check_inputs(y, q);
  return root_mean(power_sum(y, y, c, 0.0, q), y.size(), q);
}

ConstantFit best_constant(std::span<const double> y, double q) {
  check_inputs(y, q);
  const std::size_t m = y.size();
  if (q == 2.0) {
    double s = 0.0;
    for (double v : y) s += v;
    const double c = s / static_cast<double>(m);
    return {c, objective(y, c, q)};
  }
  if (q == 1.0) {
    std::vector<double> sorted(y.begin(), y.end());
    const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>((m - 1) / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    return {*mid, objective(y, *mid, q)};
  }
  if (q < 1.0) {
    std::vector<double> candidates(y.begin(), y.end());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    double best_sum = std::numeric_limits<double>::infinity();
    double best_c = candidates.front();
    for (double c : candidates) {
      const double s = power_sum(y, y, c, 0.0, q);
      if (s < best_sum) {
        best_sum = s;
        best_c = c;
      }
    }
    return {best_c, root_mean(best_sum, m, q)};
  }
  // q > 1: sum sign(y - c) |y - c|^(q-1) is nonincreasing in c.
  double lo = *std::min_element(y.begin(), y.end());
  double hi = *std::max_element(y.begin(), y.end());
  for (int it = 0; it < 200 && lo < hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double g = 0.0;
    for (double v : y) g += std::copysign(std::pow(std::abs(v - mid), q - 1.0), v - mid);
    if (g > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double c = 0.5 * (lo + hi);
  return {c, objective(y, c, q)};
}

AffineSolution least_squares(std::span<const double> y, std::span<const double> x) {
  require(!y.empty(), "empty ball");
  require(x.size() == y.size(), "fit: x and y lengths differ");
  const double m = static_cast<double>(y.size());
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= m;
  ym /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  AffineSolution s;
  s.method = Method::closed_form;
  s.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  s.intercept = ym - s.slope * xm;
  s.value = root_mean(power_sum(y, x, s.intercept, s.slope, 2.0), y.size(), 2.0);
  return s;
}

AffineSolution best_affine(std::span<const double> y, std::span<const double> x, double q,
                           const AffineOptions& options) {
  check_inputs(y, q);
  require(x.size() == y.size(), "fit: x and y lengths differ");
  const std::size_t m = y.size();

  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  const double xscale = std::max({1.0, std::abs(*xmin), std::abs(*xmax)});
  if (*xmax - *xmin <= 1e-12 * xscale) {
    const ConstantFit c = best_constant(y, q);
    AffineSolution s;
    s.intercept = c.constant;
    s.slope = 0.0;
    s.value = c.value;
    s.method = Method::degenerate;
    s.exact = q <= 2.0;
    return s;
  }

  if (q == 2.0) return least_squares(y, x);

  AffineSolution s;
  if (q > 1.0) {
    const Irls r = irls(y, x, q, options.irls_max_iterations);
    s.intercept = r.c0;
    s.slope = r.c1;
    s.iterations = r.iterations;
    s.method = Method::irls;
    s.exact = false;
    s.value = objective(y, x, s.intercept, s.slope, q);
    return s;
  }

  if (q == 1.0) {
    const Irls r = irls(y, x, q, options.irls_max_iterations);
    int walk_iterations = 0;
    const Vertex v = vertex_walk(y, x, q, r.c1, walk_iterations);
    s.intercept = v.c0;
    s.slope = v.c1;
    s.value = root_mean(v.sum, m, q);
    s.method = Method::irls_vertex_walk;
    s.iterations = r.iterations + walk_iterations;
    s.exact = true;
    return s;
  }

  if (m <= options.exhaustive_limit) {
    Vertex best;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        if (!distinct(x[i], x[j])) continue;
        const double t = (y[j] - y[i]) / (x[j] - x[i]);
        const double c0 = y[i] - t * x[i];
        const double sum = vertex_sum(y, x, q, c0, t, i, j);
        if (sum < best.sum) best = {c0, t, sum, i, j};
      }
    }
    s.intercept = best.c0;
    s.slope = best.c1;
    s.value = root_mean(best.sum, m, q);
    s.method = Method::exhaustive_vertices;
    s.exact = true;
    return s;
  }

  // Multi-start: least squares, least absolute deviations, an optional hint,
  // and lines through data-quantile pairs.
  std::vector<std::pair<double, double>> starts;
  const AffineSolution ls = least_squares(y, x);
  starts.emplace_back(ls.intercept, ls.slope);
  const AffineSolution lad = best_affine(y, x, 1.0, options);
  starts.emplace_back(lad.intercept, lad.slope);
  if (options.has_hint) starts.emplace_back(options.hint_intercept, options.hint_slope);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  constexpr double kQuantiles[][2] = {{0.05, 0.95}, {0.1, 0.9}, {0.2, 0.8}, {0.3, 0.7},
                                      {0.05, 0.5},  {0.5, 0.95}, {0.25, 0.5}, {0.5, 0.75}};
  for (const auto& qp : kQuantiles) {
    const std::size_t a = order[static_cast<std::size_t>(qp[0] * static_cast<double>(m - 1))];
    const std::size_t b = order[static_cast<std::size_t>(qp[1] * static_cast<double>(m - 1))];
    if (!distinct(x[a], x[b])) continue;
    const double t = (y[b] - y[a]) / (x[b] - x[a]);
    starts.emplace_back(y[a] - t * x[a], t);
  }
  Vertex best;
  int iterations = 0;
  for (const auto& start : starts) {
    const Vertex v = vertex_walk(y, x, q, start.second, iterations);
    if (v.sum < best.sum) best = v;
  }
  s.intercept = best.c0;
  s.slope = best.c1;
  s.value = root_mean(best.sum, m, q);
  s.method = Method::vertex_walk;
  s.exact = false;
  s.iterations = iterations;
  return s;
}

}  // namespace commlab::fit
