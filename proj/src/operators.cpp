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

#include "commlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <regex>
#include <string>

#include "commlab/error.hpp"
#include "commlab/parallel.hpp"
#include "commlab/simd/kernels.hpp"

namespace commlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Nonzero samples in index order. Skipping exact zeros leaves an
// index-ordered sum bit-identical.
struct Support {
  std::vector<std::size_t> index;
  std::vector<double> x;
  std::vector<double> u;

  // [lo, hi) positions whose index lies in [i - k, i + k].
  std::pair<std::size_t, std::size_t> excluded(std::size_t i, std::size_t k) const {
    const std::size_t from = i >= k ? i - k : 0;
    const auto lo = std::lower_bound(index.begin(), index.end(), from);
    const auto hi = std::upper_bound(lo, index.end(), i + k);
    return {static_cast<std::size_t>(lo - index.begin()),
            static_cast<std::size_t>(hi - index.begin())};
  }
};

Support gather(const Grid& grid, std::span<const double> u) {
  Support s;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j] == 0.0) continue;
    s.index.push_back(j);
    s.x.push_back(grid.x(j));
    s.u.push_back(u[j]);
  }
  return s;
}

double cauchy_sum(const Support& s, std::size_t i, double xi, std::size_t k) {
  const auto& table = simd::kernels();
  const auto [lo, hi] = s.excluded(i, k);
  double acc = table.cauchy(0.0, s.x.data(), s.u.data(), lo, xi, kPi);
  return table.cauchy(acc, s.x.data() + hi, s.u.data() + hi, s.x.size() - hi, xi, kPi);
}

double riesz_sum(const Support& s, std::size_t i, double xi, double d, std::size_t k) {
  const auto& table = simd::kernels();
  const auto [lo, hi] = s.excluded(i, k);
  double acc = table.riesz(0.0, s.x.data(), s.u.data(), lo, xi, d);
  return table.riesz(acc, s.x.data() + hi, s.u.data() + hi, s.x.size() - hi, xi, d);
}

// Input of the Cauchy sum: f scaled by the right multiplier of the kernel.
std::vector<double> weighted_input(const KernelSpec& k, const GridFn& f) {
  std::vector<double> u(f.values().begin(), f.values().end());
  if (k.kind == KernelKind::power_dini) {
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (u[j] != 0.0) u[j] *= k.multiplier(f.grid().x(j));
    }
  }
  return u;
}

double linear_at(const KernelSpec& k, const Support& s, const Grid& grid, std::size_t i,
                 std::size_t offset) {
  const double xi = grid.x(i);
  const double v = grid.step() * cauchy_sum(s, i, xi, offset);
  return k.kind == KernelKind::power_dini ? k.multiplier(xi) * v : v;
}

double bilinear_at(const BilinearKernelSpec& k, const Support& sf, const Support& sg,
                   const Grid& grid, std::size_t i, std::size_t offset) {
  const double h = grid.step();
  const double xi = grid.x(i);
  if (k.kind == BilinearKind::tensor_hilbert) {
    return (h * cauchy_sum(sf, i, xi, offset)) * (h * cauchy_sum(sg, i, xi, offset));
  }
  const auto [lo, hi] = sf.excluded(i, offset);
  double acc = 0.0;
  for (std::size_t a = 0; a < sf.x.size(); ++a) {
    if (a == lo) a = hi;
    if (a >= sf.x.size()) break;
    acc += sf.u[a] * riesz_sum(sg, i, xi, xi - sf.x[a], offset);
  }
  return h * h * acc;
}

IndexRange checked_window(const Grid& grid, IndexRange window) {
  require(window.begin <= window.end && window.end <= grid.size(), "window outside the grid");
  return window;
}

double max_abs(const GridFn& f, IndexRange r) {
  double m = 0.0;
  for (std::size_t i = r.begin; i < r.end; ++i) m = std::max(m, std::abs(f[i]));
  return m;
}

GridFn broadcast_max(const Grid& grid, const BallFamily& family, const std::vector<double>& v) {
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t b = 0; b < family.size(); ++b) {
    const IndexRange r = grid.range(family[b]);
    for (std::size_t i = r.begin; i < r.end; ++i) out[i] = std::max(out[i], v[b]);
  }
  return GridFn(grid, std::move(out));
}

}  // namespace

Modulus Modulus::power(double coefficient, double gamma) {
  require(coefficient > 0.0, "modulus: coefficient must be positive");
  require(gamma > 0.0 && gamma <= 1.0, "modulus: exponent must lie in (0, 1]");
  Modulus m;
  m.coefficient_ = coefficient;
  m.gamma_ = gamma;
  return m;
}

Modulus Modulus::tabulated(std::vector<double> t, std::vector<double> values) {
  require(t.size() == values.size() && t.size() >= 2, "modulus: table needs >= 2 matching nodes");
  for (std::size_t i = 1; i < t.size(); ++i) {
    require(t[i] > t[i - 1], "modulus: table nodes must increase");
    require(values[i] >= values[i - 1], "modulus: table must be nondecreasing");
  }
  require(t.front() >= 0.0 && values.front() >= 0.0, "modulus: table must be nonnegative");
  Modulus m;
  m.tabulated_ = true;
  m.t_ = std::move(t);
  m.values_ = std::move(values);
  return m;
}

double Modulus::operator()(double t) const {
  if (!tabulated_) return coefficient_ * (gamma_ == 1.0 ? t : std::pow(t, gamma_));
  if (t <= t_.front()) return t_.front() > 0.0 ? values_.front() * t / t_.front() : values_.front();
  if (t >= t_.back()) return values_.back();
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - t_.begin());
  const double s = (t - t_[j - 1]) / (t_[j] - t_[j - 1]);
  return values_[j - 1] + s * (values_[j] - values_[j - 1]);
}

double Modulus::dyadic_sum(int terms) const {
  double s = 0.0;
  for (int j = 1; j <= terms; ++j) s += (*this)(std::exp2(-j));
  return s;
}

bool Modulus::admissible() const {
  std::vector<double> t;
  for (int k = 0; k < 40; ++k) t.push_back(std::exp2(-k));
  for (std::size_t a = 0; a < t.size(); ++a) {
    if (a + 1 < t.size() && (*this)(t[a + 1]) > (*this)(t[a])) return false;
    for (std::size_t b = a; b < t.size(); ++b) {
      const double sum = t[a] + t[b];
      if (sum <= 1.0 && (*this)(sum) > ((*this)(t[a]) + (*this)(t[b])) * (1.0 + 1e-12)) return false;
    }
  }
  return true;
}

KernelSpec KernelSpec::hilbert() {
  KernelSpec k;
  k.kind = KernelKind::hilbert;
  k.c_k = 1.0 / kPi;
  // |K(x,y) - K(z,y)| <= 2 t / (pi |x - y|) for t = |x - z| / |x - y| <= 1/2,
  // and the same for the second variable.
  k.omega = Modulus::power(4.0 / kPi, 1.0);
  k.name = "hilbert";
  return k;
}

KernelSpec KernelSpec::power_dini(double gamma, double diameter) {
  require(gamma > 0.0 && gamma <= 1.0, "power_dini: exponent must lie in (0, 1]");
  require(diameter > 0.0, "power_dini: diameter must be positive");
  KernelSpec k;
  k.kind = KernelKind::power_dini;
  k.gamma = gamma;
  k.c_k = 2.25 / kPi;
  // Per variable: 1.5 |x - z|^g / (2 pi |x - y|) from the multiplier and
  // 2.25 * 2t / (pi |x - y|) from the Cauchy factor; |x - z| <= diameter * t
  // and t <= 2^(g - 1) t^g for t <= 1/2.
  const double c = 0.75 / kPi * std::pow(diameter, gamma) + 4.5 / kPi * std::pow(0.5, 1.0 - gamma);
  k.omega = Modulus::power(2.0 * c, gamma);
  k.name = "power_dini(" + std::to_string(gamma) + ")";
  return k;
}

KernelSpec KernelSpec::parse(std::string_view name, double diameter) {
  const std::string s(name);
  if (s == "hilbert") return hilbert();
  static const std::regex pd(R"(power_dini\(\s*([0-9.eE+-]+)\s*\))");
  std::smatch m;
  if (std::regex_match(s, m, pd)) return power_dini(std::stod(m[1].str()), diameter);
  throw Error("unknown kernel \"" + s + "\"");
}

double KernelSpec::multiplier(double x) const {
  if (kind == KernelKind::hilbert) return 1.0;
  return 1.0 + 0.5 * std::pow(std::abs(std::sin(x)), gamma);
}

double KernelSpec::operator()(double x, double y) const {
  if (kind == KernelKind::hilbert) return 1.0 / (kPi * (x - y));
  return multiplier(x) * multiplier(y) / (kPi * (x - y));
}

BilinearKernelSpec BilinearKernelSpec::tensor_hilbert() {
  BilinearKernelSpec k;
  k.kind = BilinearKind::tensor_hilbert;
  k.c_k = std::numeric_limits<double>::infinity();
  k.omega = Modulus::power(4.0 / kPi, 1.0);
  k.name = "tensor_hilbert";
  return k;
}

BilinearKernelSpec BilinearKernelSpec::bilinear_riesz() {
  BilinearKernelSpec k;
  k.kind = BilinearKind::bilinear_riesz;
  // rho^2 = a^2 + b^2 >= (a + b)^2 / 2 and |x - y1| <= rho.
  k.c_k = 2.0;
  // |grad_x K| <= 3 / rho^3 and rho >= max |x - y_i| >= (a + b) / 2.
  k.omega = Modulus::power(24.0, 1.0);
  k.name = "bilinear_riesz";
  return k;
}

BilinearKernelSpec BilinearKernelSpec::parse(std::string_view name) {
  if (name == "tensor_hilbert") return tensor_hilbert();
  if (name == "bilinear_riesz") return bilinear_riesz();
  throw Error("unknown bilinear kernel \"" + std::string(name) + "\"");
}

double BilinearKernelSpec::operator()(double x, double y1, double y2) const {
  if (kind == BilinearKind::tensor_hilbert) return 1.0 / (kPi * kPi * (x - y1) * (x - y2));
  const double a = x - y1;
  const double b = x - y2;
  const double s = a * a + b * b;
  return a / (s * std::sqrt(s));
}

double TruncationRule::resolve(const Grid& grid) const {
  const double eps = epsilon == 0.0 ? grid.step() : epsilon;
  require(eps >= 0.5 * grid.step() && std::isfinite(eps), "truncation: epsilon must be >= h/2");
  return eps;
}

std::size_t TruncationRule::excluded_offset(const Grid& grid) const {
  return static_cast<std::size_t>(std::floor(resolve(grid) / grid.step() * (1.0 + 1e-12)));
}

double measured_size_constant(const KernelSpec& k, const Grid& grid, const TruncationRule& trunc) {
  const std::size_t off = trunc.excluded_offset(grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if ((i > j ? i - j : j - i) <= off) continue;
      worst = std::max(worst, std::abs(k(grid.x(i), grid.x(j))) * std::abs(grid.x(i) - grid.x(j)));
    }
  }
  return worst;
}

double measured_size_constant(const BilinearKernelSpec& k, const Grid& grid,
                              const TruncationRule& trunc, std::size_t stride) {
  require(stride >= 1, "stride must be >= 1");
  const std::size_t off = trunc.excluded_offset(grid);
  auto far = [off](std::size_t a, std::size_t b) { return (a > b ? a - b : b - a) > off; };
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); i += stride) {
    for (std::size_t a = 0; a < grid.size(); ++a) {
      if (!far(i, a)) continue;
      for (std::size_t b = 0; b < grid.size(); b += stride) {
        if (!far(i, b)) continue;
        const double x = grid.x(i);
        const double s = std::abs(x - grid.x(a)) + std::abs(x - grid.x(b));
        worst = std::max(worst, std::abs(k(x, grid.x(a), grid.x(b))) * s * s);
      }
    }
  }
  return worst;
}

double measured_smoothness_ratio(const KernelSpec& k, const Grid& grid, std::size_t stride) {
  require(stride >= 1, "stride must be >= 1");
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); i += stride) {
    for (std::size_t j = 0; j < grid.size(); j += stride) {
      if (i == j) continue;
      const double x = grid.x(i);
      const double y = grid.x(j);
      const double d = std::abs(x - y);
      for (std::size_t l = 0; l < grid.size(); ++l) {
        const double z = grid.x(l);
        if (l == i || l == j || std::abs(x - z) > 0.5 * d) continue;
        const double diff = std::abs(k(x, y) - k(z, y)) + std::abs(k(y, x) - k(y, z));
        worst = std::max(worst, diff * d / k.omega(std::abs(x - z) / d));
      }
    }
  }
  return worst;
}

GridFn cz_apply(const KernelSpec& k, const GridFn& f, const TruncationRule& trunc) {
  return cz_apply(k, f, trunc, f.grid().all());
}

GridFn cz_apply(const KernelSpec& k, const GridFn& f, const TruncationRule& trunc,
                IndexRange window) {
  const Grid& grid = f.grid();
  checked_window(grid, window);
  const std::size_t off = trunc.excluded_offset(grid);
  const Support s = gather(grid, weighted_input(k, f));
  std::vector<double> out(grid.size(), 0.0);
  parallel_for(window.size(), [&](std::size_t t) {
    const std::size_t i = window.begin + t;
    out[i] = linear_at(k, s, grid, i, off);
  });
  return GridFn(grid, std::move(out));
}

double cz_apply_at(const KernelSpec& k, const GridFn& f, std::size_t i, const TruncationRule& trunc) {
  require(i < f.size(), "sample index outside the grid");
  const Support s = gather(f.grid(), weighted_input(k, f));
  return linear_at(k, s, f.grid(), i, trunc.excluded_offset(f.grid()));
}

GridFn cz_apply_reference(const KernelSpec& k, const GridFn& f, const TruncationRule& trunc) {
  const Grid& grid = f.grid();
  const std::size_t off = trunc.excluded_offset(grid);
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if ((i > j ? i - j : j - i) <= off) continue;
      acc += k(grid.x(i), grid.x(j)) * f[j];
    }
    out[i] = grid.step() * acc;
  }
  return GridFn(grid, std::move(out));
}

std::vector<double> dyadic_epsilons(const Grid& grid, int count) {
  require(count >= 1, "dyadic_epsilons: count must be >= 1");
  std::vector<double> eps;
  for (int k = 0; k < count; ++k) eps.push_back(grid.step() * std::exp2(k));
  return eps;
}

GridFn cz_maximal_truncation(const KernelSpec& k, const GridFn& f, std::span<const double> eps_set) {
  require(!eps_set.empty(), "cz_maximal_truncation: empty epsilon set");
  std::vector<double> out(f.size(), 0.0);
  for (double eps : eps_set) {
    const GridFn t = cz_apply(k, f, TruncationRule{eps});
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], std::abs(t[i]));
  }
  return GridFn(f.grid(), std::move(out));
}

GridFn commutator(const GridFn& b, const KernelSpec& k, const GridFn& f,
                  const TruncationRule& trunc) {
  return commutator(b, k, f, trunc, f.grid().all());
}

GridFn commutator(const GridFn& b, const KernelSpec& k, const GridFn& f,
                  const TruncationRule& trunc, IndexRange window) {
  require_same_grid(b, f);
  const GridFn tf = cz_apply(k, f, trunc, window);
  const GridFn tbf = cz_apply(k, b * f, trunc, window);
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = window.begin; i < window.end; ++i) out[i] = b[i] * tf[i] - tbf[i];
  return GridFn(f.grid(), std::move(out));
}

GridFn grand_maximal(const KernelSpec& k, const GridFn& f, const BallFamily& family,
                     const TruncationRule& trunc) {
  const Grid& grid = f.grid();
  std::vector<double> per_ball(family.size());
  parallel_for(family.size(), [&](std::size_t b) {
    const IndexRange r = grid.range(family[b]);
    const GridFn far = restrict_outside(f, family[b].dilate(2.0));
    per_ball[b] = max_abs(cz_apply(k, far, trunc, r), r);
  });
  return broadcast_max(grid, family, per_ball);
}

GridFn bilinear_apply(const BilinearKernelSpec& k, const GridFn& f, const GridFn& g,
                      const TruncationRule& trunc) {
  return bilinear_apply(k, f, g, trunc, f.grid().all());
}

GridFn bilinear_apply(const BilinearKernelSpec& k, const GridFn& f, const GridFn& g,
                      const TruncationRule& trunc, IndexRange window) {
  require_same_grid(f, g);
  const Grid& grid = f.grid();
  checked_window(grid, window);
  const std::size_t off = trunc.excluded_offset(grid);
  const Support sf = gather(grid, f.values());
  const Support sg = gather(grid, g.values());
  std::vector<double> out(grid.size(), 0.0);
  parallel_for(window.size(), [&](std::size_t t) {
    const std::size_t i = window.begin + t;
    out[i] = bilinear_at(k, sf, sg, grid, i, off);
  });
  return GridFn(grid, std::move(out));
}

double bilinear_apply_at(const BilinearKernelSpec& k, const GridFn& f, const GridFn& g,
                         std::size_t i, const TruncationRule& trunc) {
  require_same_grid(f, g);
  require(i < f.size(), "sample index outside the grid");
  const Support sf = gather(f.grid(), f.values());
  const Support sg = gather(f.grid(), g.values());
  return bilinear_at(k, sf, sg, f.grid(), i, trunc.excluded_offset(f.grid()));
}

GridFn bilinear_apply_reference(const BilinearKernelSpec& k, const GridFn& f, const GridFn& g,
                                const TruncationRule& trunc, IndexRange window) {
  require_same_grid(f, g);
  const Grid& grid = f.grid();
  checked_window(grid, window);
  const std::size_t off = trunc.excluded_offset(grid);
  const double h = grid.step();
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = window.begin; i < window.end; ++i) {
    double acc = 0.0;
    for (std::size_t a = 0; a < grid.size(); ++a) {
      if ((i > a ? i - a : a - i) <= off) continue;
      for (std::size_t b = 0; b < grid.size(); ++b) {
        if ((i > b ? i - b : b - i) <= off) continue;
        acc += k(grid.x(i), grid.x(a), grid.x(b)) * f[a] * g[b];
      }
    }
    out[i] = h * h * acc;
  }
  return GridFn(grid, std::move(out));
}

GridFn bilinear_commutator(const GridFn& b, const BilinearKernelSpec& k, const GridFn& f,
                           const GridFn& g, const TruncationRule& trunc) {
  return bilinear_commutator(b, k, f, g, trunc, f.grid().all());
}

GridFn bilinear_commutator(const GridFn& b, const BilinearKernelSpec& k, const GridFn& f,
                           const GridFn& g, const TruncationRule& trunc, IndexRange window) {
  require_same_grid(b, f);
  const GridFn t = bilinear_apply(k, f, g, trunc, window);
  const GridFn tb = bilinear_apply(k, b * f, g, trunc, window);
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = window.begin; i < window.end; ++i) out[i] = b[i] * t[i] - tb[i];
  return GridFn(f.grid(), std::move(out));
}

GridFn bilinear_grand_maximal(const BilinearKernelSpec& k, const GridFn& f, const GridFn& g,
                              const BallFamily& family, const TruncationRule& trunc) {
  require_same_grid(f, g);
  const Grid& grid = f.grid();
  std::vector<double> per_ball(family.size());
  parallel_for(family.size(), [&](std::size_t b) {
    const IndexRange r = grid.range(family[b]);
    const Ball twice = family[b].dilate(2.0);
    per_ball[b] = max_abs(
        bilinear_apply(k, restrict_outside(f, twice), restrict_outside(g, twice), trunc, r), r);
  });
  return broadcast_max(grid, family, per_ball);
}

}  // namespace commlab
