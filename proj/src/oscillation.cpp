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

#include "commlab/oscillation.hpp"

#include <algorithm>
#include <cmath>

#include "commlab/bmo.hpp"
#include "commlab/error.hpp"
#include "commlab/fit.hpp"
#include "commlab/maximal.hpp"
#include "commlab/parallel.hpp"

namespace commlab {

namespace {

template <class Fn>
double delta_mean(IndexRange r, double delta, Fn value) {
  std::vector<double> v(r.size());
  for (std::size_t t = 0; t < v.size(); ++t) v[t] = value(r.begin + t);
  return lq_mean(v, delta);
}

double min_on(const GridFn& g, IndexRange r) {
  double m = g[r.begin];
  for (std::size_t i = r.begin; i < r.end; ++i) m = std::min(m, g[i]);
  return m;
}

OscTerm make_term(std::string name, double value, double rhs) {
  return {std::move(name), value, rhs, safe_ratio(value, rhs)};
}

IndexRange ball_range(const Grid& grid, const Ball& ball) {
  const IndexRange r = grid.range(ball);
  require(!r.empty(), "empty ball");
  return r;
}

// Largest j >= 1 with 2^(j+1) B inside the domain, or 0.
int dyadic_depth(const Grid& grid, const Ball& ball) {
  int j = 0;
  while (j < 60 && grid.contains(ball.dilate(std::exp2(j + 2)))) ++j;
  return j;
}

IndexRange with_index(IndexRange r, std::size_t c) {
  return {std::min(r.begin, c), std::max(r.end, c + 1)};
}

}  // namespace

double classical_osc(const GridFn& g, const Ball& ball) { return mean_oscillation(g, ball); }

const OscTerm* OscReport::term(const std::string& name) const {
  for (const OscTerm& t : terms) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

double safe_ratio(double lhs, double rhs) { return lhs / std::max(rhs, 1e-300); }

CommutatorContext::CommutatorContext(GridFn b, KernelSpec k, GridFn f, TruncationRule trunc)
    : CommutatorContext(b, std::move(k), f, trunc, f.grid().all()) {}

CommutatorContext::CommutatorContext(GridFn b, KernelSpec k, GridFn f, TruncationRule trunc,
                                     IndexRange window)
    : b_(std::move(b)),
      k_(std::move(k)),
      f_(std::move(f)),
      trunc_(trunc),
      window_(window),
      comm_(commlab::commutator(b_, k_, f_, trunc_, window_)) {}

std::size_t CommutatorContext::center_index(const Ball& ball) const {
  return grid().nearest(ball.center);
}

double CommutatorContext::far_value_at_center(const Ball& ball) const {
  return cz_apply_at(k_, restrict_outside(f_, ball.dilate(2.0)), center_index(ball), trunc_);
}

OscReport modified_osc_fixed_c2(const CommutatorContext& ctx, const Ball& ball, double delta) {
  require(delta > 0.0 && delta <= 1.0, "delta must lie in (0, 1]");
  const IndexRange r = ball_range(ctx.grid(), ball);
  require(ctx.window().covers(r), "ball outside the evaluated window");
  OscReport rep;
  rep.ball = ball;
  rep.c2 = ctx.far_value_at_center(ball);
  std::vector<double> y(r.size());
  for (std::size_t t = 0; t < y.size(); ++t) {
    const std::size_t i = r.begin + t;
    y[t] = ctx.commutator()[i] - rep.c2 * ctx.b()[i];
  }
  const fit::ConstantFit c = fit::best_constant(y, delta);
  rep.c1 = c.constant;
  rep.lhs = c.value;
  rep.fixed_c2 = true;
  return rep;
}

OscReport double_inf_osc(const CommutatorContext& ctx, const Ball& ball, double delta) {
  const OscReport fixed = modified_osc_fixed_c2(ctx, ball, delta);
  const IndexRange r = ball_range(ctx.grid(), ball);
  fit::AffineOptions opt;
  opt.has_hint = true;
  opt.hint_intercept = fixed.c1;
  opt.hint_slope = fixed.c2;
  const auto s = fit::best_affine(ctx.commutator().values().subspan(r.begin, r.size()),
                                  ctx.b().values().subspan(r.begin, r.size()), delta, opt);
  OscReport rep;
  rep.ball = ball;
  rep.fixed_c2 = false;
  if (s.value <= fixed.lhs) {
    rep.c1 = s.intercept;
    rep.c2 = s.slope;
    rep.lhs = s.value;
  } else {
    rep.c1 = fixed.c1;
    rep.c2 = fixed.c2;
    rep.lhs = fixed.lhs;
  }
  if (!s.exact) rep.flags.push_back("nonconvex");
  return rep;
}

LinearRhsContext LinearRhsContext::build(const GridFn& f, const Weight& w, const GridFn& b,
                                         double r, const BallFamily& family) {
  require(r > 1.0, "rhs_linear: r must exceed 1");
  require_same_grid(f, w.fn());
  LinearRhsContext c{0.0, bmo_norm(b, family), r, maximal(w.fn(), AllIntervals{}),
                     m_r_weight(w, r, AllIntervals{})};
  for (std::size_t i = 0; i < f.size(); ++i) c.f_over_w = std::max(c.f_over_w, std::abs(f[i]) / w.fn()[i]);
  return c;
}

double LinearRhsContext::rhs(const Ball& ball) const {
  const IndexRange r = ball_range(m_r_w.grid(), ball);
  return conjugate() * f_over_w * b_norm * min_on(m_r_w, r);
}

double rhs_linear(const GridFn& f, const Weight& w, const GridFn& b, const Ball& ball, double r,
                  const BallFamily& family) {
  return LinearRhsContext::build(f, w, b, r, family).rhs(ball);
}

OscReport proof_decomposition_linear(const CommutatorContext& ctx, const Ball& ball, double delta,
                                     double epsilon, const LinearRhsContext& rhs) {
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  require(epsilon > delta && epsilon < 1.0, "epsilon must lie in (delta, 1)");
  const Grid& grid = ctx.grid();
  const IndexRange r = ball_range(grid, ball);
  require(ctx.window().covers(r), "ball outside the evaluated window");
  const KernelSpec& k = ctx.kernel();
  const TruncationRule& tr = ctx.truncation();
  const GridFn& b = ctx.b();
  const Ball twice = ball.dilate(2.0);
  const std::size_t c = ctx.center_index(ball);
  const IndexRange w = with_index(r, c);

  const double lambda = average(b, twice);
  const GridFn bl = b + (-lambda);
  const GridFn f1 = restrict_inside(ctx.f(), twice);
  const GridFn f2 = restrict_outside(ctx.f(), twice);
  const GridFn tf1 = cz_apply(k, f1, tr, w);
  const GridFn tf2 = cz_apply(k, f2, tr, w);
  const GridFn tbf1 = cz_apply(k, bl * f1, tr, w);
  const GridFn tbf2 = cz_apply(k, bl * f2, tr, w);

  OscReport rep;
  rep.ball = ball;
  rep.fixed_c2 = true;
  rep.c2 = tf2[c];
  rep.c1 = -lambda * rep.c2 - tbf2[c];
  const GridFn& comm = ctx.commutator();
  rep.lhs = delta_mean(r, delta, [&](std::size_t i) { return comm[i] - rep.c1 - rep.c2 * b[i]; });

  const double l11 = delta_mean(r, delta, [&](std::size_t i) { return (b[i] - lambda) * tf1[i]; });
  const double l12 = delta_mean(r, delta, [&](std::size_t i) {
    return (b[i] - lambda) * tf2[i] + lambda * rep.c2 - rep.c2 * b[i];
  });
  const double l21 = delta_mean(r, delta, [&](std::size_t i) { return tbf1[i]; });
  const double l22 = delta_mean(r, delta, [&](std::size_t i) { return tbf2[i] - tbf2[c]; });

  std::vector<double> dev(r.size());
  std::vector<double> t1(r.size());
  for (std::size_t t = 0; t < r.size(); ++t) {
    dev[t] = b[r.begin + t] - lambda;
    t1[t] = tf1[r.begin + t];
  }
  const double s = delta * epsilon / (epsilon - delta);
  const double holder = lq_mean(dev, s) * lq_mean(t1, epsilon);

  rep.truncation_depth = dyadic_depth(grid, ball);
  if (rep.truncation_depth == 0) rep.flags.push_back("no_dyadic_shell");
  const double base = rhs.b_norm * rhs.f_over_w * min_on(rhs.m_w, r);
  const double omega_sum = k.omega.dyadic_sum(std::max(rep.truncation_depth, 1));
  rep.rhs = rhs.rhs(ball);
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  rep.terms = {make_term("L11", l11, base), make_term("L12", l12, omega_sum * base),
               make_term("L21", l21, rep.rhs), make_term("L22", l22, rep.rhs),
               make_term("L11_holder", holder, base)};
  return rep;
}

double SharpPointwise::ratio(std::size_t i) const {
  return safe_ratio(lhs[i], g[i] + m_t[i] * b_norm);
}

SharpPointwise sharp_pointwise_table(const CommutatorContext& ctx, double delta,
                                     const BallFamily& family) {
  const Grid& grid = ctx.grid();
  const std::size_t nb = family.size();
  std::vector<double> sharp(nb), fixed(nb), grand(nb);
  parallel_for(nb, [&](std::size_t k) {
    const Ball& ball = family[k];
    const IndexRange r = ball_range(grid, ball);
    require(ctx.window().covers(r), "ball outside the evaluated window");
    sharp[k] = fit::best_constant(ctx.commutator().values().subspan(r.begin, r.size()), delta).value;
    fixed[k] = modified_osc_fixed_c2(ctx, ball, delta).lhs;
    const GridFn far = cz_apply(ctx.kernel(), restrict_outside(ctx.f(), ball.dilate(2.0)),
                                ctx.truncation(), r);
    double m = 0.0;
    for (std::size_t i = r.begin; i < r.end; ++i) m = std::max(m, std::abs(far[i]));
    grand[k] = m;
  });
  auto spread = [&](const std::vector<double>& v) {
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t k = 0; k < nb; ++k) {
      const IndexRange r = grid.range(family[k]);
      for (std::size_t i = r.begin; i < r.end; ++i) out[i] = std::max(out[i], v[k]);
    }
    return GridFn(grid, std::move(out));
  };
  return {spread(sharp), spread(fixed), spread(grand), bmo_norm(ctx.b(), family)};
}

BilinearRhsContext BilinearRhsContext::build(const BilinearSetup& s, const Weight& w1,
                                             const Weight& w2, const BallFamily& family) {
  require_same_grid(s.f, w1.fn());
  require_same_grid(s.g, w2.fn());
  const Weight both[] = {w1, w2};
  BilinearRhsContext c{bmo_norm(s.b, family), a_infty_vec_constant(both, family), 0.0,
                       GridFn::zeros(s.f.grid())};
  double fw = 0.0;
  double gw = 0.0;
  std::vector<double> inv(s.f.size());
  for (std::size_t i = 0; i < s.f.size(); ++i) {
    fw = std::max(fw, std::abs(s.f[i]) * w1.fn()[i]);
    gw = std::max(gw, std::abs(s.g[i]) * w2.fn()[i]);
    inv[i] = 1.0 / (w1.fn()[i] * w2.fn()[i]);
  }
  c.fw_product = fw * gw;
  c.inv_w = GridFn(s.f.grid(), std::move(inv));
  return c;
}

double BilinearRhsContext::rhs(const Ball& ball) const {
  return b_norm * a_infty * fw_product * min_on(inv_w, ball_range(inv_w.grid(), ball));
}

OscReport modified_osc_multilinear(const BilinearSetup& s, const Ball& ball, double delta,
                                   TruncationMode mode, const BilinearRhsContext& rhs) {
  require(delta > 0.0 && delta < 0.5, "delta must lie in (0, 1/2)");
  require_same_grid(s.b, s.f);
  require_same_grid(s.f, s.g);
  const Grid& grid = s.f.grid();
  const IndexRange r = ball_range(grid, ball);
  const std::size_t c = grid.nearest(ball.center);
  const IndexRange w = with_index(r, c);
  const Ball twice = ball.dilate(2.0);
  const GridFn& b = s.b;

  auto t_b = [&](const GridFn& h1, const GridFn& h2) {
    if (mode == TruncationMode::vector_outside_truncation) {
      return bilinear_apply(s.k, restrict_outside(h1, twice), restrict_outside(h2, twice), s.trunc, w);
    }
    return bilinear_apply(s.k, h1, h2, s.trunc, w) -
           bilinear_apply(s.k, restrict_inside(h1, twice), restrict_inside(h2, twice), s.trunc, w);
  };

  const double lambda = average(b, twice);
  const GridFn blf = (b + (-lambda)) * s.f;
  const GridFn tfg = bilinear_apply(s.k, s.f, s.g, s.trunc, w);
  const GridFn tbfg = t_b(s.f, s.g);
  const GridFn tbl = bilinear_apply(s.k, blf, s.g, s.trunc, w);
  const GridFn tbbl = t_b(blf, s.g);
  const GridFn comm = bilinear_commutator(b, s.k, s.f, s.g, s.trunc, w);

  OscReport rep;
  rep.ball = ball;
  rep.fixed_c2 = true;
  rep.c2 = tbfg[c];
  rep.c1 = -lambda * rep.c2 - tbbl[c];
  rep.flags.push_back(mode == TruncationMode::difference_truncation ? "difference_truncation"
                                                                    : "vector_outside_truncation");
  rep.lhs = delta_mean(r, delta, [&](std::size_t i) { return comm[i] - rep.c1 - rep.c2 * b[i]; });
  const double i1 = delta_mean(r, delta, [&](std::size_t i) {
    return (b[i] - lambda) * tfg[i] - (b[i] - lambda) * rep.c2;
  });
  const double i2 = delta_mean(r, delta, [&](std::size_t i) { return tbl[i] - tbbl[c]; });
  const double i21 = delta_mean(r, delta, [&](std::size_t i) { return tbbl[i] - tbbl[c]; });
  const double i22 = delta_mean(r, delta, [&](std::size_t i) { return tbl[i] - tbbl[i]; });

  fit::AffineOptions opt;
  opt.has_hint = true;
  opt.hint_intercept = rep.c1;
  opt.hint_slope = rep.c2;
  const auto oracle = fit::best_affine(comm.values().subspan(r.begin, r.size()),
                                       b.values().subspan(r.begin, r.size()), delta, opt);
  if (!oracle.exact) rep.flags.push_back("nonconvex");

  rep.rhs = rhs.rhs(ball);
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  rep.terms = {make_term("I1", i1, rep.rhs), make_term("I2", i2, rep.rhs),
               make_term("I21", i21, rep.rhs), make_term("I22", i22, rep.rhs),
               make_term("double_inf", oracle.value, rep.rhs)};
  return rep;
}

}  // namespace commlab
