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

#include "common.hpp"
#include "commlab/error.hpp"
#include "commlab/harness/experiments.hpp"
#include "commlab/maximal.hpp"
#include "commlab/operators.hpp"
#include "commlab/weights.hpp"

namespace commlab::harness {

using detail::format_number;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Grid for a sub-block with its own "grid", refined by the same factor as `level`.
Grid scaled_grid(const Node& block, const Node& root, const Grid& level) {
  const Grid base = parse_grid(block.at("grid"));
  const Grid top = parse_grid(root.at("grid"));
  const double scale = static_cast<double>(level.size()) / static_cast<double>(top.size());
  return Grid(base.left(), base.right(),
              static_cast<std::size_t>(std::llround(static_cast<double>(base.size()) * scale)));
}

void pointwise_rows(const std::string& prefix, const GridFn& lhs, const GridFn& rhs, double linear,
                    std::size_t stride, std::vector<RatioRow>& rows) {
  for (std::size_t i = 0; i < lhs.size(); i += stride) {
    // Samples outside every ball of the family carry no information.
    if (lhs[i] == 0.0 && rhs[i] == 0.0) continue;
    RatioRow row = make_row(prefix + "i=" + std::to_string(i), std::nullopt, lhs[i], rhs[i]);
    row.extras = {{"x", lhs.grid().x(i)}, {"linear", linear}};
    rows.push_back(std::move(row));
  }
}

void grand_maximal_level(const Node& root, const Grid& grid, const std::string& prefix,
                         std::vector<RatioRow>& rows) {
  const long long stride = root.integer("stride", 1);
  if (stride < 1) root.at("stride").fail("must be >= 1");
  const long long eps_count = root.integer("epsilon_count", 0);
  {
    const KernelSpec k = parse_kernel(root.at("kernel"), grid);
    const TruncationRule trunc = parse_truncation(root);
    const GridFn f = parse_function(root.at("f"), grid);
    const BallFamily family = parse_family(root.at("family"), grid);
    // T* over the dyadic truncation levels h 2^k up to the domain length.
    int count = static_cast<int>(eps_count);
    if (count == 0) {
      count = static_cast<int>(std::ceil(std::log2(static_cast<double>(grid.size())))) + 1;
    }
    const std::vector<double> eps = dyadic_epsilons(grid, count);
    const GridFn lhs = grand_maximal(k, f, family, trunc);
    const GridFn rhs = maximal(f, family) + cz_maximal_truncation(k, f, eps);
    pointwise_rows(prefix + "linear/", lhs, rhs, 1.0, static_cast<std::size_t>(stride), rows);
  }
  if (!root.has("bilinear")) return;
  const Node bl = root.at("bilinear");
  const Grid bgrid = scaled_grid(bl, root, grid);
  const BilinearKernelSpec k = parse_bilinear_kernel(bl.at("kernel"));
  const TruncationRule trunc = parse_truncation(bl);
  const GridFn f = parse_function(bl.at("f"), bgrid);
  const GridFn g = parse_function(bl.at("g"), bgrid);
  const BallFamily family = parse_family(bl.at("family"), bgrid);
  const GridFn lhs = bilinear_grand_maximal(k, f, g, family, trunc);
  const GridFn rhs =
      multi_maximal(f, g, family) + maximal_power(bilinear_apply(k, f, g, trunc), 0.5, family);
  pointwise_rows(prefix + "bilinear/", lhs, rhs, 0.0, 1, rows);
}

double max_ratio_where(const std::vector<RatioRow>& rows, double linear) {
  double m = kNan;
  for (const RatioRow& r : rows) {
    if (r.extra("linear") != linear || r.has_flag("degenerate") || !std::isfinite(r.ratio)) continue;
    if (std::isnan(m) || r.ratio > m) m = r.ratio;
  }
  return m;
}

void opnorm_level(const Node& root, const Grid& grid, const std::string& prefix,
                  std::vector<RatioRow>& rows) {
  const BallFamily family = parse_family(root.at("family"), grid);
  const std::vector<double> ps = root.numbers("ps", {1.5, 2.0, 3.0});
  const Node functions = root.at("functions");
  std::vector<GridFn> tests;
  for (std::size_t i = 0; i < functions.size(); ++i) tests.push_back(parse_function(functions.at(i), grid));
  const Node weights = root.at("weights");
  for (std::size_t wi = 0; wi < weights.size(); ++wi) {
    const WeightFamilySpec spec = parse_weight(weights.at(wi));
    const Weight w = spec.build(grid);
    for (double p : ps) {
      if (!(p > 1.0)) root.at("ps").fail("exponents must exceed 1");
      const double ap = ap_constant(w, p, family);
      const double lower = estimate_maximal_opnorm(p, w, tests);
      const double envelope = std::pow(ap, 1.0 / (p - 1.0));
      RatioRow row = make_row(prefix + "w=" + spec.label() + "/p=" + format_number(p),
                              std::nullopt, lower, envelope);
      row.extras = {{"p", p}, {"ap", ap}, {"lower_bound", lower}, {"envelope", envelope}};
      rows.push_back(std::move(row));
    }
  }
}

}  // namespace

double estimate_maximal_opnorm(double p, const Weight& w, std::span<const GridFn> tests) {
  require(p > 1.0, "opnorm: p must exceed 1");
  double best = 0.0;
  for (const GridFn& f : tests) {
    const double denom = lp_norm(f, w.fn(), p);
    if (denom == 0.0) continue;
    best = std::max(best, lp_norm(maximal(f, AllIntervals{}), w.fn(), p) / denom);
  }
  return best;
}

namespace detail {

LevelMetrics grand_maximal_metrics(const Json&) {
  return [](const std::vector<RatioRow>& rows) {
    return Metrics{{"linear_C", max_ratio_where(rows, 1.0)},
                   {"bilinear_C", max_ratio_where(rows, 0.0)}};
  };
}

LevelMetrics opnorm_metrics(const Json&) {
  return [](const std::vector<RatioRow>& rows) {
    Metrics m = ratio_metrics(rows);
    m.emplace_back("max_lower_bound", max_extra(rows, "lower_bound"));
    return m;
  };
}

}  // namespace detail

Report run_grand_maximal_domination(const Json& config) {
  return detail::run_levels("grand-maximal", config, grand_maximal_level,
                            detail::grand_maximal_metrics(config));
}

Report run_opnorm(const Json& config) {
  return detail::run_levels("opnorm", config, opnorm_level, detail::opnorm_metrics(config));
}

}  // namespace commlab::harness
