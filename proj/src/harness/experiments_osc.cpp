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
#include "commlab/oscillation.hpp"
#include "commlab/parallel.hpp"

namespace commlab::harness {

using detail::format_number;

namespace {

std::string ball_id(std::size_t k) { return "ball=" + std::to_string(k); }

std::vector<WeightFamilySpec> parse_weights(const Node& root, const std::string& key) {
  std::vector<WeightFamilySpec> out;
  if (!root.has(key)) {
    WeightFamilySpec one;
    one.kind = WeightKind::constant;
    return {one};
  }
  const Node list = root.at(key);
  for (std::size_t i = 0; i < list.size(); ++i) out.push_back(parse_weight(list.at(i)));
  return out;
}

void add_terms(RatioRow& row, const OscReport& rep) {
  for (const OscTerm& t : rep.terms) {
    row.extras.emplace_back(t.name, t.value);
    row.extras.emplace_back(t.name + "_ratio", t.ratio);
  }
}

// ----- osc ---------------------------------------------------------------

void osc_level(const Node& root, const Grid& grid, const std::string& prefix,
               std::vector<RatioRow>& rows) {
  const KernelSpec k = parse_kernel(root.at("kernel"), grid);
  const TruncationRule trunc = parse_truncation(root);
  const GridFn b = parse_function(root.at("b"), grid);
  const BallFamily family = parse_family(root.at("family"), grid);
  const std::vector<double> deltas = root.numbers("deltas", {0.5});
  const std::vector<double> rs = root.numbers("rs", {2.0});
  const std::string functional = root.string("functional", "fixed_c2");
  if (functional != "fixed_c2" && functional != "double_inf") {
    root.at("functional").fail("expected \"fixed_c2\" or \"double_inf\"");
  }
  const Node functions = root.at("functions");
  for (const WeightFamilySpec& ws : parse_weights(root, "weights")) {
    const Weight w = ws.build(grid);
    for (std::size_t fi = 0; fi < functions.size(); ++fi) {
      const Node fnode = functions.at(fi);
      GridFn f = parse_function(fnode, grid);
      if (!fnode.is_string() && fnode.boolean("times_weight", false)) f = f * w.fn();
      const CommutatorContext ctx(b, k, f, trunc);
      for (double r : rs) {
        const LinearRhsContext rc = LinearRhsContext::build(f, w, b, r, family);
        for (double delta : deltas) {
          std::vector<RatioRow> block(family.size());
          parallel_for(family.size(), [&](std::size_t bi) {
            const Ball& ball = family[bi];
            const OscReport rep = functional == "fixed_c2" ? modified_osc_fixed_c2(ctx, ball, delta)
                                                           : double_inf_osc(ctx, ball, delta);
            RatioRow row = make_row(prefix + "w=" + ws.label() + "/f=" + function_label(fnode) +
                                        "/delta=" + format_number(delta) + "/r=" +
                                        format_number(r) + "/" + ball_id(bi),
                                    ball, rep.lhs, rc.rhs(ball));
            row.extras = {{"c1", rep.c1}, {"c2", rep.c2}};
            for (const std::string& fl : rep.flags) row.flags.push_back(fl);
            block[bi] = std::move(row);
          });
          rows.insert(rows.end(), block.begin(), block.end());
        }
      }
    }
  }
}

// ----- decomposition -----------------------------------------------------

const char* kLinearTerms[] = {"L11", "L12", "L21", "L22"};
const char* kBilinearTerms[] = {"I1", "I2", "I21", "I22"};

void decomposition_level(const Node& root, const Grid& grid, const std::string& prefix,
                         std::vector<RatioRow>& rows) {
  const KernelSpec k = parse_kernel(root.at("kernel"), grid);
  const TruncationRule trunc = parse_truncation(root);
  const GridFn b = parse_function(root.at("b"), grid);
  const GridFn f = parse_function(root.at("f"), grid);
  const Weight w = root.has("weight") ? parse_weight(root.at("weight")).build(grid)
                                      : Weight(GridFn::constant(grid, 1.0));
  const BallFamily family = parse_family(root.at("family"), grid);
  const double delta = root.number("delta", 0.5);
  const double epsilon = root.number("holder_epsilon", 0.75);
  const double r = root.number("r", 2.0);
  const CommutatorContext ctx(b, k, f, trunc);
  const LinearRhsContext rc = LinearRhsContext::build(f, w, b, r, family);
  std::vector<RatioRow> block(family.size());
  parallel_for(family.size(), [&](std::size_t bi) {
    const OscReport rep = proof_decomposition_linear(ctx, family[bi], delta, epsilon, rc);
    RatioRow row = make_row(prefix + ball_id(bi), family[bi], rep.lhs, rep.rhs);
    row.extras = {{"c1", rep.c1}, {"c2", rep.c2}, {"depth", rep.truncation_depth}};
    add_terms(row, rep);
    for (const std::string& fl : rep.flags) row.flags.push_back(fl);
    block[bi] = std::move(row);
  });
  rows.insert(rows.end(), block.begin(), block.end());
}

// ----- multilinear -------------------------------------------------------

TruncationMode parse_mode(const Node& node) {
  const std::string m = node.string();
  if (m == "difference_truncation") return TruncationMode::difference_truncation;
  if (m == "vector_outside_truncation") return TruncationMode::vector_outside_truncation;
  node.fail("unknown truncation mode \"" + m + "\"");
}

void multilinear_level(const Node& root, const Grid& grid, const std::string& prefix,
                       std::vector<RatioRow>& rows) {
  const BilinearSetup setup{parse_function(root.at("b"), grid),
                            parse_bilinear_kernel(root.at("kernel")),
                            parse_function(root.at("f"), grid), parse_function(root.at("g"), grid),
                            parse_truncation(root)};
  const Weight one(GridFn::constant(grid, 1.0));
  const Weight w1 = root.has("w1") ? parse_weight(root.at("w1")).build(grid) : one;
  const Weight w2 = root.has("w2") ? parse_weight(root.at("w2")).build(grid) : one;
  const BallFamily family = parse_family(root.at("family"), grid);
  const double delta = root.number("delta", 1.0 / 3.0);
  std::vector<TruncationMode> modes{TruncationMode::difference_truncation};
  std::vector<std::string> mode_names{"difference_truncation"};
  if (root.has("modes")) {
    modes.clear();
    mode_names.clear();
    const Node list = root.at("modes");
    for (std::size_t i = 0; i < list.size(); ++i) {
      modes.push_back(parse_mode(list.at(i)));
      mode_names.push_back(list.at(i).string());
    }
  }
  const BilinearRhsContext rc = BilinearRhsContext::build(setup, w1, w2, family);
  for (std::size_t mi = 0; mi < modes.size(); ++mi) {
    std::vector<RatioRow> block(family.size());
    parallel_for(family.size(), [&](std::size_t bi) {
      const OscReport rep = modified_osc_multilinear(setup, family[bi], delta, modes[mi], rc);
      RatioRow row = make_row(prefix + "mode=" + mode_names[mi] + "/" + ball_id(bi), family[bi],
                              rep.lhs, rep.rhs);
      row.extras = {{"c1", rep.c1}, {"c2", rep.c2}};
      add_terms(row, rep);
      row.extras.emplace_back("explicit_minus_oracle", rep.lhs - rep.term("double_inf")->value);
      for (const std::string& fl : rep.flags) row.flags.push_back(fl);
      block[bi] = std::move(row);
    });
    rows.insert(rows.end(), block.begin(), block.end());
  }
}

// ----- sharp -------------------------------------------------------------

void sharp_level(const Node& root, const Grid& grid, const std::string& prefix,
                 std::vector<RatioRow>& rows) {
  const KernelSpec k = parse_kernel(root.at("kernel"), grid);
  const TruncationRule trunc = parse_truncation(root);
  const GridFn b = parse_function(root.at("b"), grid);
  const GridFn f = parse_function(root.at("f"), grid);
  const BallFamily family = parse_family(root.at("family"), grid);
  const double delta = root.number("delta", 0.5);
  const long long probes = root.integer("probes", 64);
  if (probes < 1) root.at("probes").fail("must be >= 1");
  const double lo = root.number("probe_lo");
  const double hi = root.number("probe_hi");
  const CommutatorContext ctx(b, k, f, trunc);
  const SharpPointwise table = sharp_pointwise_table(ctx, delta, family);
  for (long long p = 0; p < probes; ++p) {
    // Probe points are fixed in x, so levels compare the same locations.
    const double x = lo + (static_cast<double>(p) + 0.5) * (hi - lo) / static_cast<double>(probes);
    const std::size_t i = grid.nearest(x);
    RatioRow row = make_row(prefix + "probe=" + std::to_string(p), std::nullopt, table.lhs[i],
                            table.g[i] + table.m_t[i] * table.b_norm);
    row.extras = {{"x", grid.x(i)}, {"g", table.g[i]}, {"m_t", table.m_t[i]}, {"b_norm", table.b_norm}};
    rows.push_back(std::move(row));
  }
}

Metrics term_metrics(const std::vector<RatioRow>& rows, const char* const* names, std::size_t count) {
  Metrics m = detail::ratio_metrics(rows);
  for (std::size_t t = 0; t < count; ++t) {
    m.emplace_back(std::string(names[t]) + "_constant", detail::max_extra(rows, std::string(names[t]) + "_ratio"));
  }
  return m;
}

std::string experiment(const Node& root) {
  const std::string e = root.string("experiment", "osc");
  if (e != "osc" && e != "decomposition" && e != "multilinear" && e != "sharp") {
    root.at("experiment").fail("unknown experiment \"" + e + "\"");
  }
  return e;
}

// ----- contrast ----------------------------------------------------------

void hst_level(const Node& root, const Grid& grid, const std::string& prefix,
               std::vector<RatioRow>& rows) {
  const KernelSpec k = parse_kernel(root.at("kernel"), grid);
  const TruncationRule trunc = parse_truncation(root);
  const GridFn b = parse_function(root.at("b"), grid);
  const Node bnode = root.at("ball");
  const Ball ball{bnode.number("center"), bnode.number("radius")};
  const long long j_max = root.integer("j_max", 7);
  const double delta = root.number("delta", 0.5);
  const double scale = root.number("support_scale", 8.0);
  const IndexRange window = grid.range(ball);
  require(!window.empty(), "empty ball");
  const double start = ball.center + scale * ball.radius;
  for (long long j = 1; j <= j_max; ++j) {
    // f_j = indicator of [c + s r, c + 2^j s r], unit sup norm.
    const double end = ball.center + std::exp2(static_cast<double>(j)) * scale * ball.radius;
    if (end > grid.right()) {
      RatioRow row = make_row(prefix + "j=" + std::to_string(j), ball, 0.0, 0.0);
      row.flags.push_back("support_exits_domain");
      row.flags.push_back("degenerate");
      rows.push_back(std::move(row));
      continue;
    }
    const GridFn f = GridFn::sample(grid, [start, end](double x) { return x >= start && x <= end ? 1.0 : 0.0; });
    const CommutatorContext ctx(b, k, f, trunc, window);
    const double classical = classical_osc(ctx.commutator(), ball);
    const OscReport mod = modified_osc_fixed_c2(ctx, ball, delta);
    RatioRow row = make_row(prefix + "j=" + std::to_string(j), ball, classical, mod.lhs);
    row.extras = {{"j", static_cast<double>(j)}, {"classical", classical}, {"modified", mod.lhs},
                  {"c1", mod.c1}, {"c2", mod.c2}};
    rows.push_back(std::move(row));
  }
}

}  // namespace

namespace detail {

LevelMetrics osc_sweep_metrics(const Json& config) {
  const std::string e = experiment(Node(config, ""));
  if (e == "decomposition") {
    return [](const std::vector<RatioRow>& rows) {
      Metrics m = term_metrics(rows, kLinearTerms, 4);
      double holder_gap = -std::numeric_limits<double>::infinity();
      for (const RatioRow& r : rows) holder_gap = std::max(holder_gap, r.extra("L11") - r.extra("L11_holder"));
      m.emplace_back("max_L11_minus_holder", holder_gap);
      return m;
    };
  }
  if (e == "multilinear") {
    return [](const std::vector<RatioRow>& rows) {
      Metrics m = term_metrics(rows, kBilinearTerms, 4);
      double gap = std::numeric_limits<double>::infinity();
      for (const RatioRow& r : rows) gap = std::min(gap, r.extra("explicit_minus_oracle"));
      m.emplace_back("min_explicit_minus_oracle", gap);
      return m;
    };
  }
  return [](const std::vector<RatioRow>& rows) { return ratio_metrics(rows); };
}

LevelMetrics hst_metrics(const Json&) {
  return [](const std::vector<RatioRow>& rows) {
    std::vector<const RatioRow*> valid;
    for (const RatioRow& r : rows) {
      if (!r.has_flag("support_exits_domain")) valid.push_back(&r);
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (valid.empty()) return Metrics{{"classical_growth", nan}, {"modified_spread", nan}, {"j_reached", 0.0}};
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const RatioRow* r : valid) {
      lo = std::min(lo, r->extra("modified"));
      hi = std::max(hi, r->extra("modified"));
    }
    const double first = valid.front()->extra("classical");
    const double last = valid.back()->extra("classical");
    return Metrics{{"classical_growth", first > 0.0 ? last / first : nan},
                   {"modified_spread", lo > 0.0 ? hi / lo : nan},
                   {"j_reached", valid.back()->extra("j")}};
  };
}

}  // namespace detail

Report run_osc_sweep(const Json& config) {
  const std::string e = experiment(Node(config, ""));
  detail::LevelRunner runner = osc_level;
  if (e == "decomposition") runner = decomposition_level;
  if (e == "multilinear") runner = multilinear_level;
  if (e == "sharp") runner = sharp_level;
  return detail::run_levels("osc-sweep", config, runner, detail::osc_sweep_metrics(config));
}

Report run_hst_contrast(const Json& config) {
  return detail::run_levels("hst-contrast", config, hst_level, detail::hst_metrics(config));
}

}  // namespace commlab::harness
