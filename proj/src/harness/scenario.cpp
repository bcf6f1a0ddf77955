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
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <map>

#include "common.hpp"
#include "commlab/error.hpp"
#include "commlab/harness/experiments.hpp"

namespace commlab::harness {

namespace detail {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<RatioRow> with_prefix(const std::vector<RatioRow>& rows, const std::string& prefix) {
  std::vector<RatioRow> out;
  for (const RatioRow& r : rows) {
    if (r.scenario_id.rfind(prefix, 0) == 0) out.push_back(r);
  }
  return out;
}

double max_extra(const std::vector<RatioRow>& rows, const std::string& name) {
  double m = -std::numeric_limits<double>::infinity();
  for (const RatioRow& r : rows) {
    for (const auto& [k, v] : r.extras) {
      if (k == name) m = std::max(m, v);
    }
  }
  return m;
}

Metrics ratio_metrics(const std::vector<RatioRow>& rows) {
  const Summary s = summarize(rows);
  return {{"max_ratio", s.max_ratio},
          {"median_ratio", s.median_ratio},
          {"max_over_median", s.metric("max_over_median")},
          {"trend_slope", s.trend_slope}};
}

Metrics level_metrics(const std::vector<RatioRow>& rows, const LevelMetrics& metrics) {
  std::vector<std::string> levels;
  std::map<std::string, std::vector<RatioRow>> groups;
  for (const RatioRow& r : rows) {
    const std::string level = r.scenario_id.substr(0, r.scenario_id.find('/'));
    if (!groups.count(level)) levels.push_back(level);
    groups[level].push_back(r);
  }
  if (levels.empty()) return metrics({});
  if (levels.size() == 1) return metrics(groups[levels.front()]);
  std::vector<Metrics> per;
  for (const std::string& l : levels) per.push_back(metrics(groups[l]));
  Metrics out;
  for (std::size_t k = 0; k < per.front().size(); ++k) {
    const std::string& name = per.front()[k].first;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    bool finite = true;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const double v = per[l][k].second;
      out.emplace_back(name + "@" + levels[l], v);
      finite = finite && std::isfinite(v);
      lo = std::min(lo, std::abs(v));
      hi = std::max(hi, std::abs(v));
    }
    out.emplace_back(name, per.back()[k].second);
    double spread = std::numeric_limits<double>::quiet_NaN();
    if (finite) spread = hi == 0.0 ? 1.0 : (lo == 0.0 ? std::numeric_limits<double>::infinity() : hi / lo);
    out.emplace_back(name + "_spread", spread);
  }
  return out;
}

Report run_levels(const std::string& command, const Json& config, const LevelRunner& runner,
                  const LevelMetrics& metrics) {
  const Node root(config, "");
  std::vector<std::size_t> levels{0};
  if (root.has("refinements")) {
    levels.clear();
    const Node list = root.at("refinements");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const long long n = list.at(i).integer();
      if (n < 8) list.at(i).fail("must be >= 8");
      levels.push_back(static_cast<std::size_t>(n));
    }
    if (levels.empty()) list.fail("must not be empty");
  }
  Report report;
  report.command = command;
  report.config = config;
  for (std::size_t n : levels) {
    const Grid grid = parse_grid(root.at("grid"), n);
    runner(root, grid, "n=" + std::to_string(grid.size()) + "/", report.rows);
  }
  report.summary = summarize(report.rows);
  report.summary.metrics = level_metrics(report.rows, metrics);
  report.checks = evaluate_checks(root, report.summary);
  report.code_version = code_version();
  report.config_hash = config_hash(config);
  return report;
}

LevelMetrics metrics_for(const std::string& command, const Json& config) {
  if (command == "osc-sweep") return osc_sweep_metrics(config);
  if (command == "hst-contrast") return hst_metrics(config);
  if (command == "bmo") return bmo_metrics(config);
  if (command == "constants") return constants_metrics(config);
  if (command == "endpoint") return endpoint_metrics(config);
  if (command == "extrapolate") return extrapolation_metrics(config);
  if (command == "grand-maximal") return grand_maximal_metrics(config);
  if (command == "opnorm") return opnorm_metrics(config);
  throw Error("unknown command \"" + command + "\"");
}

}  // namespace detail

std::vector<std::string> command_names() {
  return {"osc-sweep", "hst-contrast", "bmo",           "constants",
          "endpoint",  "extrapolate",  "grand-maximal", "opnorm"};
}

Report run_command(const std::string& command, const Json& config, const RunOptions& options) {
  Report r;
  if (command == "osc-sweep") {
    r = run_osc_sweep(config);
  } else if (command == "hst-contrast") {
    r = run_hst_contrast(config);
  } else if (command == "bmo") {
    r = run_bmo(config);
  } else if (command == "constants") {
    r = run_constants(config);
  } else if (command == "endpoint") {
    r = run_endpoint_orlicz(config);
  } else if (command == "extrapolate") {
    r = run_extrapolation_check(config);
  } else if (command == "grand-maximal") {
    r = run_grand_maximal_domination(config);
  } else if (command == "opnorm") {
    r = run_opnorm(config);
  } else {
    throw Error("unknown command \"" + command + "\"");
  }
  if (options.timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    r.timestamp = buf;
  }
  return r;
}

Summary recompute_summary(const Report& report) {
  Summary s = summarize(report.rows);
  s.metrics = detail::level_metrics(report.rows, detail::metrics_for(report.command, report.config));
  return s;
}

double lp_norm(const GridFn& g, const GridFn& weight, double p) {
  require_same_grid(g, weight);
  require(p > 0.0, "lp_norm: p must be positive");
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += std::pow(std::abs(g[i]), p) * weight[i];
  return std::pow(g.grid().step() * s, 1.0 / p);
}

}  // namespace commlab::harness
