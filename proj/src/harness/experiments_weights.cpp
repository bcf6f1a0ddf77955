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

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "common.hpp"
#include "commlab/bmo.hpp"
#include "commlab/error.hpp"
#include "commlab/harness/experiments.hpp"
#include "commlab/operators.hpp"
#include "commlab/weights.hpp"

namespace commlab::harness {

using detail::format_number;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<WeightFamilySpec> weight_list(const Node& root) {
  std::vector<WeightFamilySpec> out;
  const Node list = root.at("weights");
  for (std::size_t i = 0; i < list.size(); ++i) out.push_back(parse_weight(list.at(i)));
  if (out.empty()) list.fail("needs at least one weight");
  return out;
}

double a1_of(const Weight& w, const std::optional<BallFamily>& family) {
  return family ? a1_constant(w, *family) : a1_constant(w, AllIntervals{});
}

// ----- constants ---------------------------------------------------------

// One row per (weight, p): lhs = [w]_{A_p}, rhs = [sigma]_{A_p'}^(p - 1).
void constants_level(const Node& root, const Grid& grid, const std::string& prefix,
                     std::vector<RatioRow>& rows) {
  const BallFamily family = parse_family(root.at("family"), grid);
  const std::vector<double> ps = root.numbers("ps", {1.5, 2.0, 3.0});
  for (const WeightFamilySpec& spec : weight_list(root)) {
    const Weight w = spec.build(grid);
    const double a1 = a1_constant(w, family);
    for (double p : ps) {
      if (!(p > 1.0)) root.at("ps").fail("exponents must exceed 1");
      const double ap = ap_constant(w, p, family);
      const double dual = ap_constant(dual_weight(w, p), p / (p - 1.0), family);
      const double dual_side = std::pow(dual, p - 1.0);
      RatioRow row = make_row(prefix + "w=" + spec.label() + "/p=" + format_number(p),
                              std::nullopt, ap, dual_side);
      row.extras = {{"p", p},
                    {"a1", a1},
                    {"ap", ap},
                    {"dual_ap", dual},
                    {"duality_error", std::abs(ap - dual_side) / ap}};
      rows.push_back(std::move(row));
    }
  }
}

// ----- endpoint ----------------------------------------------------------

std::vector<double> t_values(const Node& root) {
  if (root.has("ts")) return root.numbers("ts");
  const Node tg = root.at("t_grid");
  const double lo = tg.number("lo");
  const double hi = tg.number("hi");
  const long long count = tg.integer("count");
  if (!(lo > 0.0 && hi > lo)) tg.fail("needs 0 < lo < hi");
  if (count < 2) tg.at("count").fail("must be >= 2");
  std::vector<double> ts;
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (long long i = 0; i < count; ++i) ts.push_back(lo * std::exp(step * static_cast<double>(i)));
  return ts;
}

double orlicz(double t) { return t * std::log(std::exp(1.0) + t); }

void endpoint_level(const Node& root, const Grid& grid, const std::string& prefix,
                    std::vector<RatioRow>& rows) {
  const KernelSpec k = parse_kernel(root.at("kernel"), grid);
  const TruncationRule trunc = parse_truncation(root);
  const GridFn b = parse_function(root.at("b"), grid);
  const GridFn f = parse_function(root.at("f"), grid);
  std::optional<BallFamily> family;
  if (root.has("family")) family.emplace(parse_family(root.at("family"), grid));
  const std::vector<double> ts = t_values(root);
  const GridFn comm = commutator(b, k, f, trunc);
  const double h = grid.step();
  for (const WeightFamilySpec& spec : weight_list(root)) {
    const Weight w = spec.build(grid);
    const double a1 = a1_of(w, family);
    const double factor = a1 * a1 * std::log(std::exp(1.0) + a1);
    for (double t : ts) {
      if (!(t > 0.0)) root.fail("t values must be positive");
      double level = 0.0;
      double modular = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(comm[i]) > t) level += w.fn()[i];
        modular += orlicz(std::abs(f[i]) / t) * w.fn()[i];
      }
      RatioRow row = make_row(prefix + "w=" + spec.label() + "/t=" + format_number(t),
                              std::nullopt, h * level, factor * h * modular);
      row.extras = {{"t", t}, {"a1", a1}};
      rows.push_back(std::move(row));
    }
  }
}

// ----- extrapolate -------------------------------------------------------

double weighted_lp(const GridFn& g, const GridFn& factor, double p) {
  return lp_norm(g * factor, GridFn::constant(g.grid(), 1.0), p);
}

void extrapolation_level(const Node& root, const Grid& grid, const std::string& prefix,
                         std::vector<RatioRow>& rows) {
  const std::vector<double> ps = root.numbers("ps", {1.5, 2.0, 3.0});
  const std::vector<WeightFamilySpec> weights = weight_list(root);
  for (double p : ps) {
    if (!(p > 1.0)) root.at("ps").fail("exponents must exceed 1");
  }

  {
    const KernelSpec k = parse_kernel(root.at("kernel"), grid);
    const TruncationRule trunc = parse_truncation(root);
    const GridFn b = parse_function(root.at("b"), grid);
    const BallFamily family = parse_family(root.at("family"), grid);
    const double b_norm = bmo_norm(b, family);
    const Node functions = root.at("functions");
    for (std::size_t fi = 0; fi < functions.size(); ++fi) {
      const GridFn f = parse_function(functions.at(fi), grid);
      const GridFn comm = commutator(b, k, f, trunc);
      for (const WeightFamilySpec& spec : weights) {
        const Weight v = spec.build(grid);
        for (double p : ps) {
          const double f_norm = lp_norm(f, v.fn(), p);
          RatioRow row = make_row(prefix + "linear/f=" + function_label(functions.at(fi)) +
                                      "/v=" + spec.label() + "/p=" + format_number(p),
                                  std::nullopt, lp_norm(comm, v.fn(), p), b_norm * f_norm);
          row.extras = {{"p", p}, {"ap", ap_constant(v, p, family)}, {"linear", 1.0}};
          if (f_norm == 0.0) row.flags.push_back("zero_norm");
          rows.push_back(std::move(row));
        }
      }
    }
  }

  if (!root.has("bilinear")) return;
  // The bilinear block runs on its own (coarser) grid, refined by the same ratio.
  const Node bl = root.at("bilinear");
  const Grid base = parse_grid(bl.at("grid"));
  const Grid top = parse_grid(root.at("grid"));
  const double scale = static_cast<double>(grid.size()) / static_cast<double>(top.size());
  const Grid bgrid(base.left(), base.right(),
                   static_cast<std::size_t>(std::llround(static_cast<double>(base.size()) * scale)));
  const BilinearKernelSpec k = parse_bilinear_kernel(bl.at("kernel"));
  const TruncationRule trunc = parse_truncation(bl);
  const GridFn b = parse_function(bl.at("b"), bgrid);
  const GridFn f = parse_function(bl.at("f"), bgrid);
  const GridFn g = parse_function(bl.at("g"), bgrid);
  const BallFamily family = parse_family(bl.at("family"), bgrid);
  const double b_norm = bmo_norm(b, family);
  const GridFn comm = bilinear_commutator(b, k, f, g, trunc);
  for (const WeightFamilySpec& spec : weights) {
    // w1 = w2 = v, target weight v^2, exponents p_i = 2p.
    const Weight v = spec.build(bgrid);
    const GridFn target = v.fn() * v.fn();
    std::vector<Weight> pair{v, v};
    for (double p : ps) {
      const double pi = 2.0 * p;
      const double rhs_norms = weighted_lp(f, v.fn(), pi) * weighted_lp(g, v.fn(), pi);
      const std::vector<double> pvec{pi, pi};
      RatioRow row = make_row(prefix + "bilinear/v=" + spec.label() + "/p=" + format_number(p),
                              std::nullopt, weighted_lp(comm, target, p), b_norm * rhs_norms);
      row.extras = {{"p", p}, {"ap_vec", ap_vec_constant(pair, pvec, family)}, {"linear", 0.0}};
      if (rhs_norms == 0.0) row.flags.push_back("zero_norm");
      rows.push_back(std::move(row));
    }
  }
}

double max_ratio_where(const std::vector<RatioRow>& rows, double linear) {
  double m = kNan;
  for (const RatioRow& r : rows) {
    if (r.extra("linear") != linear || r.has_flag("zero_norm") || r.has_flag("degenerate")) continue;
    if (std::isnan(m) || r.ratio > m) m = r.ratio;
  }
  return m;
}

}  // namespace

namespace detail {

LevelMetrics constants_metrics(const Json&) {
  return [](const std::vector<RatioRow>& rows) {
    return Metrics{{"max_a1", max_extra(rows, "a1")},
                   {"max_ap", max_extra(rows, "ap")},
                   {"max_duality_error", max_extra(rows, "duality_error")}};
  };
}

LevelMetrics endpoint_metrics(const Json&) {
  return [](const std::vector<RatioRow>& rows) {
    Metrics m = ratio_metrics(rows);
    double sup = 0.0;
    for (const RatioRow& r : rows) {
      if (!r.has_flag("degenerate") && std::isfinite(r.ratio)) sup = std::max(sup, r.ratio);
    }
    m.emplace_back("sup_ratio", sup);
    return m;
  };
}

LevelMetrics extrapolation_metrics(const Json&) {
  return [](const std::vector<RatioRow>& rows) {
    Metrics m = ratio_metrics(rows);
    m.emplace_back("linear_max_ratio", max_ratio_where(rows, 1.0));
    m.emplace_back("bilinear_max_ratio", max_ratio_where(rows, 0.0));
    return m;
  };
}

}  // namespace detail

Report run_constants(const Json& config) {
  return detail::run_levels("constants", config, constants_level, detail::constants_metrics(config));
}

Report run_endpoint_orlicz(const Json& config) {
  return detail::run_levels("endpoint", config, endpoint_level, detail::endpoint_metrics(config));
}

Report run_extrapolation_check(const Json& config) {
  return detail::run_levels("extrapolate", config, extrapolation_level,
                            detail::extrapolation_metrics(config));
}

}  // namespace commlab::harness
