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

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "commlab/grid.hpp"
#include "commlab/harness/config.hpp"

namespace commlab::harness {

using Metrics = std::vector<std::pair<std::string, double>>;

/// One inequality instance.
struct RatioRow {
  std::string scenario_id;
  std::optional<Ball> ball;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::vector<std::string> flags;
  Metrics extras;

  bool has_flag(const std::string& flag) const;
  double extra(const std::string& name) const;
  bool operator==(const RatioRow&) const;
};

/// Builds a row with ratio = lhs / max(rhs, 1e-300) and the degenerate flag
/// set when rhs < 1e-14 lhs or rhs = 0 < lhs.
RatioRow make_row(std::string scenario_id, std::optional<Ball> ball, double lhs, double rhs);

struct Summary {
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  std::string argmax;
  std::optional<Ball> argmax_ball;
  /// Least-squares slope of log ratio against log radius; NaN when undefined.
  double trend_slope = 0.0;
  std::vector<std::string> flags;
  Metrics metrics;

  double metric(const std::string& name) const;
  bool operator==(const Summary&) const;
};

/// Ratio statistics over rows that are neither degenerate nor non-finite.
Summary summarize(const std::vector<RatioRow>& rows);

struct Check {
  std::string metric;
  std::string op;
  double value = 0.0;
  double actual = 0.0;
  bool passed = false;
  bool operator==(const Check&) const;
};

struct Report {
  std::string command;
  Json config;
  std::vector<RatioRow> rows;
  Summary summary;
  std::vector<Check> checks;
  std::string code_version;
  std::string config_hash;
  std::optional<std::string> timestamp;

  bool passed() const;
  bool operator==(const Report&) const;
};

/// Evaluates the config's "assert" list against summary fields and metrics.
std::vector<Check> evaluate_checks(const Node& config, const Summary& summary);

Json to_json(const Report& report);
Report report_from_json(const Json& json);
std::string to_csv(const Report& report);

/// format: "json" or "csv".
void write_report(const Report& report, const std::string& path, const std::string& format);
Report read_report(const std::string& path);

std::string code_version();

}  // namespace commlab::harness
