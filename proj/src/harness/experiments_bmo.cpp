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
#include "commlab/bmo.hpp"
#include "commlab/error.hpp"
#include "commlab/harness/experiments.hpp"
#include "commlab/parallel.hpp"

namespace commlab::harness {

using detail::format_number;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string experiment(const Node& root) {
  const std::string e = root.string("experiment", "separation");
  if (e != "separation" && e != "john_nirenberg" && e != "drift" && e != "norm") {
    root.at("experiment").fail("unknown experiment \"" + e + "\"");
  }
  return e;
}

// Rows in family order: lhs = mean oscillation of f, rhs = the BMO_b^q
// value of f on the same ball.
void separation_level(const Node& root, const Grid& grid, const std::string& prefix,
                      std::vector<RatioRow>& rows) {
  const GridFn f = parse_function(root.at("f"), grid);
  const GridFn b = parse_function(root.at("b"), grid);
  const BallFamily family = parse_family(root.at("family"), grid);
  const double q = root.number("q", 2.0);
  std::vector<RatioRow> block(family.size());
  parallel_for(family.size(), [&](std::size_t i) {
    const Ball& ball = family[i];
    const double osc = mean_oscillation(f, ball);
    const AffineFit fit = bmo_b_q_fit(f, b, ball, q);
    RatioRow row = make_row(prefix + "ball=" + std::to_string(i), ball, osc, fit.value);
    row.extras = {{"osc", osc}, {"bmo_b_q", fit.value}, {"c0", fit.c0}, {"c1", fit.c1}};
    if (!fit.exact) row.flags.push_back("nonconvex");
    block[i] = std::move(row);
  });
  rows.insert(rows.end(), block.begin(), block.end());
}

void jn_level(const Node& root, const Grid& grid, const std::string& prefix,
              std::vector<RatioRow>& rows) {
  const GridFn b = parse_function(root.at("b"), grid);
  const BallFamily family = parse_family(root.at("family"), grid);
  const double norm = bmo_norm(b, family);
  for (double alpha : root.numbers("alphas", {0.5, 1.0, 2.0, 4.0})) {
    if (!(alpha > 0.0)) root.at("alphas").fail("exponents must be positive");
    const double v = jn_check(b, alpha, family);
    RatioRow row = make_row(prefix + "alpha=" + format_number(alpha), std::nullopt, v, 1.0);
    row.extras = {{"alpha", alpha}, {"bmo_norm", norm}};
    rows.push_back(std::move(row));
  }
}

void drift_level(const Node& root, const Grid& grid, const std::string& prefix,
                 std::vector<RatioRow>& rows) {
  const GridFn b = parse_function(root.at("b"), grid);
  const BallFamily family = parse_family(root.at("family"), grid);
  const std::vector<Ball> balls = parse_balls(root.at("balls"));
  const long long j_max = root.integer("j_max", 8);
  if (j_max < 1) root.at("j_max").fail("must be >= 1");
  const double norm = bmo_norm(b, family);
  for (std::size_t bi = 0; bi < balls.size(); ++bi) {
    const DriftResult res = dyadic_drift_check(b, balls[bi], static_cast<int>(j_max), family);
    for (const DriftRow& d : res.rows) {
      if (d.j == 0) continue;
      RatioRow row = make_row(prefix + "ball=" + std::to_string(bi) + "/j=" + std::to_string(d.j),
                              balls[bi], d.drift, d.j * norm);
      row.extras = {{"j", static_cast<double>(d.j)}, {"normalized", d.normalized}};
      if (res.truncated) row.flags.push_back("truncated");
      rows.push_back(std::move(row));
    }
  }
}

void norm_level(const Node& root, const Grid& grid, const std::string& prefix,
                std::vector<RatioRow>& rows) {
  const GridFn f = parse_function(root.at("f"), grid);
  const GridFn b = parse_function(root.at("b"), grid);
  const BallFamily family = parse_family(root.at("family"), grid);
  const double q = root.number("q", 1.0);
  const BmoBqResult res = bmo_b_q_norm(f, b, q, family);
  const double osc_norm = bmo_norm(f, family);
  for (std::size_t i = 0; i < family.size(); ++i) {
    RatioRow row = make_row(prefix + "ball=" + std::to_string(i), family[i], res.per_ball[i],
                            osc_norm);
    row.extras = {{"bmo_b_q_norm", res.value}, {"bmo_norm", osc_norm}};
    if (res.nonconvex) row.flags.push_back("nonconvex");
    rows.push_back(std::move(row));
  }
}

double extra_spread(const std::vector<RatioRow>& rows, const std::string& name) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const RatioRow& r : rows) {
    lo = std::min(lo, r.extra(name));
    hi = std::max(hi, r.extra(name));
  }
  return lo > 0.0 ? hi / lo : kNan;
}

Metrics separation_metrics(const std::vector<RatioRow>& rows) {
  Metrics m = detail::ratio_metrics(rows);
  // Rows come ordered by radius; sort by decreasing radius to be safe.
  std::vector<const RatioRow*> by_radius;
  for (const RatioRow& r : rows) by_radius.push_back(&r);
  std::stable_sort(by_radius.begin(), by_radius.end(), [](const RatioRow* a, const RatioRow* b) {
    return a->ball->radius > b->ball->radius;
  });
  double step_min = kNan;
  double step_mean = kNan;
  const std::size_t k = by_radius.size();
  if (k >= 3) {
    step_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 2 < k; ++i) {
      step_min = std::min(step_min, by_radius[i + 2]->extra("osc") / by_radius[i]->extra("osc"));
    }
    const double total = by_radius.back()->extra("osc") / by_radius.front()->extra("osc");
    step_mean = std::pow(total, 2.0 / static_cast<double>(k - 1));
  }
  m.emplace_back("osc_two_step_mean", step_mean);
  m.emplace_back("osc_two_step_min", step_min);
  m.emplace_back("bmo_b_q_spread", extra_spread(rows, "bmo_b_q"));
  return m;
}

}  // namespace

namespace detail {

LevelMetrics bmo_metrics(const Json& config) {
  const std::string e = experiment(Node(config, ""));
  if (e == "separation") return separation_metrics;
  if (e == "drift") {
    return [](const std::vector<RatioRow>& rows) {
      Metrics m = ratio_metrics(rows);
      m.emplace_back("max_normalized_drift", max_extra(rows, "normalized"));
      return m;
    };
  }
  if (e == "norm") {
    return [](const std::vector<RatioRow>& rows) {
      Metrics m = ratio_metrics(rows);
      m.emplace_back("bmo_b_q_norm", rows.empty() ? kNan : rows.front().extra("bmo_b_q_norm"));
      m.emplace_back("bmo_norm", rows.empty() ? kNan : rows.front().extra("bmo_norm"));
      return m;
    };
  }
  return [](const std::vector<RatioRow>& rows) { return ratio_metrics(rows); };
}

}  // namespace detail

Report run_bmo(const Json& config) {
  const std::string e = experiment(Node(config, ""));
  detail::LevelRunner runner = separation_level;
  if (e == "john_nirenberg") runner = jn_level;
  if (e == "drift") runner = drift_level;
  if (e == "norm") runner = norm_level;
  return detail::run_levels("bmo", config, runner, detail::bmo_metrics(config));
}

}  // namespace commlab::harness
