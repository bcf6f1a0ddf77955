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

#include <functional>
#include <string>
#include <vector>

#include "commlab/harness/config.hpp"
#include "commlab/harness/report.hpp"

namespace commlab::harness::detail {

/// Fills rows for one grid resolution; ids must start with `prefix`.
using LevelRunner =
    std::function<void(const Node& config, const Grid& grid, const std::string& prefix,
                       std::vector<RatioRow>& rows)>;
/// Metrics of one resolution, computed from that resolution's rows only.
using LevelMetrics = std::function<Metrics(const std::vector<RatioRow>& rows)>;

/// Runs once per entry of "refinements" (or once at grid.n). With several
/// levels, metric m is reported as "m@n=<n>" per level, "m" at the finest
/// level, and "m_spread" = max / min over levels.
Report run_levels(const std::string& command, const Json& config, const LevelRunner& runner,
                  const LevelMetrics& metrics);

/// Metrics for rows of a finished report, grouped by their "n=<n>/" prefix.
Metrics level_metrics(const std::vector<RatioRow>& rows, const LevelMetrics& metrics);

/// Ratio statistics of a row subset: max_ratio, median_ratio, max_over_median, trend_slope.
Metrics ratio_metrics(const std::vector<RatioRow>& rows);

std::vector<RatioRow> with_prefix(const std::vector<RatioRow>& rows, const std::string& prefix);

std::string format_number(double v);

LevelMetrics metrics_for(const std::string& command, const Json& config);

LevelMetrics osc_sweep_metrics(const Json& config);
LevelMetrics hst_metrics(const Json& config);
LevelMetrics bmo_metrics(const Json& config);
LevelMetrics constants_metrics(const Json& config);
LevelMetrics endpoint_metrics(const Json& config);
LevelMetrics extrapolation_metrics(const Json& config);
LevelMetrics grand_maximal_metrics(const Json& config);
LevelMetrics opnorm_metrics(const Json& config);

/// Largest value of extras[name] over rows carrying it.
double max_extra(const std::vector<RatioRow>& rows, const std::string& name);

}  // namespace commlab::harness::detail
