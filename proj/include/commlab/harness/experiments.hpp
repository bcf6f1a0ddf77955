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

#include <span>
#include <string>
#include <vector>

#include "commlab/harness/report.hpp"
#include "commlab/weights.hpp"

namespace commlab::harness {

struct RunOptions {
  /// Adds an ISO-8601 UTC "timestamp" field; off by default so that
  /// identical configs give byte-identical reports.
  bool timestamp = false;
};

/// Commands: osc-sweep, hst-contrast, bmo, constants, endpoint, extrapolate,
/// grand-maximal, opnorm. Errors in the config throw commlab::Error.
Report run_command(const std::string& command, const Json& config, const RunOptions& options = {});
std::vector<std::string> command_names();

Report run_osc_sweep(const Json& config);
Report run_hst_contrast(const Json& config);
Report run_bmo(const Json& config);
Report run_constants(const Json& config);
Report run_endpoint_orlicz(const Json& config);
Report run_extrapolation_check(const Json& config);
Report run_grand_maximal_domination(const Json& config);
Report run_opnorm(const Json& config);

/// Summary rebuilt from rows alone (ratio statistics plus command metrics).
Summary recompute_summary(const Report& report);

/// max over tests of ||M f||_{L^p(w)} / ||f||_{L^p(w)} with M over all
/// intervals; ||g||_{L^p(w)} = (h sum |g|^p w)^(1/p). Zero tests are skipped.
double estimate_maximal_opnorm(double p, const Weight& w, std::span<const GridFn> tests);
double lp_norm(const GridFn& g, const GridFn& weight, double p);

}  // namespace commlab::harness
