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

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "../support/oracles.hpp"
#include "commlab/error.hpp"
#include "commlab/harness/experiments.hpp"

using namespace commlab;
using namespace commlab::harness;

namespace {

Json small_osc() {
  return Json::parse(R"({
    "experiment": "osc",
    "grid": {"left": -8, "right": 8, "n": 256},
    "kernel": "hilbert",
    "b": "log_abs",
    "functions": [{"kind": "indicator", "a": 1, "b": 2, "label": "chi"}],
    "weights": [{"kind": "power", "a": 0}, {"kind": "power", "a": -0.3}],
    "deltas": [0.5],
    "rs": [2],
    "family": {"kind": "dyadic", "centers": 4, "scales": 3, "r_min": 0.25, "center_lo": -1, "center_hi": 3},
    "assert": [{"metric": "max_ratio", "op": "<", "value": 1e9}]
  })");
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("commlab_unit_" + name);
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(COMMLAB_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config errors name the offending field") {
  Json cfg = small_osc();
  cfg["grid"].erase("n");
  CHECK(message_of([&] { run_osc_sweep(cfg); }).find("grid.n") != std::string::npos);
  cfg = small_osc();
  cfg["grid"]["n"] = 4;
  CHECK(message_of([&] { run_osc_sweep(cfg); }).find("grid.n") != std::string::npos);
  cfg = small_osc();
  cfg["family"]["center_lo"] = 100;
  cfg["family"]["center_hi"] = 101;
  CHECK(message_of([&] { run_osc_sweep(cfg); }).find("empty family") != std::string::npos);
  cfg = small_osc();
  cfg["weights"][0]["kind"] = "banana";
  CHECK(message_of([&] { run_osc_sweep(cfg); }).find("weights[0]") != std::string::npos);
  CHECK_THROWS_AS(parse_config("{\"grid\": "), Error);
  CHECK_THROWS_AS(run_command("no-such-command", small_osc()), Error);
}

TEST_CASE("reports round-trip through JSON and are deterministic") {
  const Report a = run_osc_sweep(small_osc());
  const Report b = run_osc_sweep(small_osc());
  CHECK(a == b);
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(report_from_json(to_json(a)) == a);
  CHECK(recompute_summary(a) == a.summary);
  CHECK(a.config_hash.size() == 16);
  CHECK(a.config_hash == config_hash(small_osc()));
  CHECK(a.passed());
  // 2 weights x 1 function x 1 r x 1 delta x balls.
  const BallFamily fam = dyadic_family(Grid(-8, 8, 256), 4, 3, MarginRule::require_2B_inside,
                                       0.25, -1.0, 3.0);
  CHECK(a.rows.size() == 2 * fam.size());
  const std::string csv = to_csv(a);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == a.rows.size() + 1);
}

TEST_CASE("non-finite values survive serialisation") {
  Report r = run_osc_sweep(small_osc());
  r.rows[0].lhs = std::numeric_limits<double>::infinity();
  r.rows[1].ratio = std::nan("");
  const Report back = report_from_json(Json::parse(to_json(r).dump()));
  CHECK(std::isinf(back.rows[0].lhs));
  CHECK(std::isnan(back.rows[1].ratio));
}

TEST_CASE("check operators") {
  Summary s;
  s.max_ratio = 2.0;
  s.metrics = {{"x", 5.0}};
  const Json cfg = Json::parse(R"({"assert": [
    {"metric": "max_ratio", "op": "<=", "value": 2},
    {"metric": "max_ratio", "op": "<", "value": 2},
    {"metric": "x", "op": ">=", "value": 5},
    {"metric": "x", "op": ">", "value": 5},
    {"metric": "x", "op": "==", "value": 5}
  ]})");
  const auto checks = evaluate_checks(Node(cfg, ""), s);
  REQUIRE(checks.size() == 5);
  CHECK(checks[0].passed);
  CHECK_FALSE(checks[1].passed);
  CHECK(checks[2].passed);
  CHECK_FALSE(checks[3].passed);
  CHECK(checks[4].passed);
  const Json bad = Json::parse(R"({"assert": [{"metric": "x", "op": "~", "value": 1}]})");
  CHECK_THROWS_AS(evaluate_checks(Node(bad, ""), s), Error);
}

TEST_CASE("constant b gives zero ratios") {
  Json cfg = small_osc();
  cfg["b"] = Json::parse(R"({"kind": "constant", "value": 2})");
  const Report r = run_osc_sweep(cfg);
  for (const RatioRow& row : r.rows) CHECK(row.lhs <= 1e-12);
  CHECK(r.summary.max_ratio <= 1e-10);
}

TEST_CASE("refinement levels prefix rows and report spreads") {
  Json cfg = small_osc();
  cfg["refinements"] = {128, 256};
  const Report r = run_osc_sweep(cfg);
  REQUIRE(!r.rows.empty());
  CHECK(r.rows.front().scenario_id.rfind("n=128/", 0) == 0);
  CHECK(r.rows.back().scenario_id.rfind("n=256/", 0) == 0);
  CHECK(std::isfinite(r.summary.metric("max_ratio@n=128")));
  CHECK(std::isfinite(r.summary.metric("max_ratio_spread")));
}

TEST_CASE("endpoint with f = 0 has zero left-hand side") {
  const Json cfg = Json::parse(R"({
    "grid": {"left": -4, "right": 4, "n": 128},
    "kernel": "hilbert", "b": "log_abs", "f": "zero",
    "weights": [{"kind": "power", "a": 0}],
    "ts": [0.1, 1]
  })");
  const Report r = run_endpoint_orlicz(cfg);
  REQUIRE(r.rows.size() == 2);
  for (const RatioRow& row : r.rows) CHECK(row.lhs == 0.0);
}

TEST_CASE("extrapolation flags zero test functions") {
  const Json cfg = Json::parse(R"({
    "grid": {"left": -4, "right": 4, "n": 128},
    "kernel": "hilbert", "b": "log_abs",
    "functions": ["zero", {"kind": "indicator", "a": 1, "b": 2}],
    "weights": [{"kind": "power", "a": 0}],
    "ps": [2],
    "family": {"kind": "dyadic", "centers": 4, "scales": 3, "r_min": 0.25}
  })");
  const Report r = run_extrapolation_check(cfg);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].has_flag("zero_norm"));
  CHECK_FALSE(r.rows[1].has_flag("zero_norm"));
  CHECK(std::isfinite(r.summary.metric("linear_max_ratio")));
}

TEST_CASE("operator norm lower bound with a single test function") {
  const Json cfg = Json::parse(R"({
    "grid": {"left": -2, "right": 2, "n": 64},
    "functions": [{"kind": "indicator", "a": 0, "b": 0.5}],
    "weights": [{"kind": "power", "a": -0.4}],
    "ps": [2],
    "family": {"kind": "dyadic", "centers": 4, "scales": 3, "r_min": 0.25}
  })");
  const Report r = run_opnorm(cfg);
  REQUIRE(r.rows.size() == 1);
  const Grid g(-2.0, 2.0, 64);
  std::vector<double> f(64);
  for (std::size_t i = 0; i < 64; ++i) f[i] = g.x(i) > 0.0 && g.x(i) < 0.5 ? 1.0 : 0.0;
  const auto mf = oracle::maximal_all_intervals(f);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < 64; ++i) {
    const double w = std::pow(std::abs(g.x(i)), -0.4);
    num += mf[i] * mf[i] * w;
    den += f[i] * f[i] * w;
  }
  CHECK(r.rows[0].lhs == doctest::Approx(std::sqrt(num / den)).epsilon(1e-12));
}

TEST_CASE("command line exit codes") {
  const auto ok = scratch("ok.json");
  write_file(ok, small_osc().dump());
  Json failing = small_osc();
  failing["assert"] = Json::parse(R"([{"metric": "max_ratio", "op": "<", "value": 0}])");
  const auto fails = scratch("fail.json");
  write_file(fails, failing.dump());
  const auto broken = scratch("broken.json");
  write_file(broken, "{\"grid\": ");
  const auto out = scratch("out.csv");
  CHECK(run_cli("osc-sweep --config " + ok.string() + " --out " + out.string() + " --format csv") == 0);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("scenario_id,", 0) == 0);
  CHECK(run_cli("osc-sweep --config " + fails.string() + " --out -") == 2);
  CHECK(run_cli("osc-sweep --config " + broken.string()) == 1);
  CHECK(run_cli("osc-sweep --config /nonexistent/cfg.json") == 1);
  CHECK(run_cli("osc-sweep --config " + ok.string() + " --isa scalar --threads 1") == 0);
  for (const auto& p : {ok, fails, broken, out}) std::filesystem::remove(p);
}

}  // TEST_SUITE
