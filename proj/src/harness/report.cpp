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

#include "commlab/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "commlab/error.hpp"

namespace commlab::harness {

namespace {

constexpr const char* kVersion = "commlab 0.1.0";

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

bool same(const Metrics& a, const Metrics& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].first != b[i].first || !same(a[i].second, b[i].second)) return false;
  }
  return true;
}

// Non-finite values travel as strings so that reports round-trip.
Json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double read_num(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw Error("report: expected a number");
}

Json ball_json(const std::optional<Ball>& b) {
  if (!b) return nullptr;
  Json j;
  j["center"] = num(b->center);
  j["radius"] = num(b->radius);
  return j;
}

std::optional<Ball> read_ball(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return Ball{read_num(j.at("center")), read_num(j.at("radius"))};
}

Json metrics_json(const Metrics& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = num(v);
  return j;
}

Metrics read_metrics(const Json& j) {
  Metrics m;
  for (const auto& [k, v] : j.items()) m.emplace_back(k, read_num(v));
  return m;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

bool RatioRow::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

double RatioRow::extra(const std::string& name) const {
  for (const auto& [k, v] : extras) {
    if (k == name) return v;
  }
  throw Error("row " + scenario_id + " has no field " + name);
}

bool RatioRow::operator==(const RatioRow& o) const {
  return scenario_id == o.scenario_id && ball == o.ball && same(lhs, o.lhs) && same(rhs, o.rhs) &&
         same(ratio, o.ratio) && flags == o.flags && same(extras, o.extras);
}

RatioRow make_row(std::string scenario_id, std::optional<Ball> ball, double lhs, double rhs) {
  RatioRow r;
  r.scenario_id = std::move(scenario_id);
  r.ball = ball;
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = lhs / std::max(rhs, 1e-300);
  if (rhs < 1e-14 * lhs || (rhs == 0.0 && lhs > 0.0)) r.flags.push_back("degenerate");
  return r;
}

double Summary::metric(const std::string& name) const {
  if (name == "max_ratio") return max_ratio;
  if (name == "median_ratio") return median_ratio;
  if (name == "trend_slope") return trend_slope;
  if (name == "max_over_median") {
    return median_ratio > 0.0 ? max_ratio / median_ratio : std::numeric_limits<double>::quiet_NaN();
  }
  for (const auto& [k, v] : metrics) {
    if (k == name) return v;
  }
  throw Error("summary has no metric " + name);
}

bool Summary::operator==(const Summary& o) const {
  return same(max_ratio, o.max_ratio) && same(median_ratio, o.median_ratio) && argmax == o.argmax &&
         argmax_ball == o.argmax_ball && same(trend_slope, o.trend_slope) && flags == o.flags &&
         same(metrics, o.metrics);
}

Summary summarize(const std::vector<RatioRow>& rows) {
  Summary s;
  std::vector<double> ratios;
  std::vector<double> lx, ly;
  bool any_degenerate = false;
  bool any_nonfinite = false;
  bool any_nonconvex = false;
  for (const RatioRow& r : rows) {
    any_nonconvex = any_nonconvex || r.has_flag("nonconvex");
    if (r.has_flag("degenerate")) {
      any_degenerate = true;
      continue;
    }
    if (!std::isfinite(r.ratio)) {
      any_nonfinite = true;
      continue;
    }
    ratios.push_back(r.ratio);
    if (ratios.size() == 1 || r.ratio > s.max_ratio) {
      s.max_ratio = r.ratio;
      s.argmax = r.scenario_id;
      s.argmax_ball = r.ball;
    }
    if (r.ball && r.ratio > 0.0) {
      lx.push_back(std::log(r.ball->radius));
      ly.push_back(std::log(r.ratio));
    }
  }
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    const std::size_t m = ratios.size();
    s.median_ratio = m % 2 ? ratios[m / 2] : 0.5 * (ratios[m / 2 - 1] + ratios[m / 2]);
  }
  s.trend_slope = std::numeric_limits<double>::quiet_NaN();
  if (lx.size() >= 2) {
    double xm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      xm += lx[i];
      ym += ly[i];
    }
    xm /= static_cast<double>(lx.size());
    ym /= static_cast<double>(lx.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxx += (lx[i] - xm) * (lx[i] - xm);
      sxy += (lx[i] - xm) * (ly[i] - ym);
    }
    if (sxx > 0.0) s.trend_slope = sxy / sxx;
  }
  if (any_degenerate) s.flags.push_back("degenerate_rows");
  if (any_nonfinite) s.flags.push_back("nonfinite_rows");
  if (any_nonconvex) s.flags.push_back("nonconvex");
  return s;
}

bool Check::operator==(const Check& o) const {
  return metric == o.metric && op == o.op && same(value, o.value) && same(actual, o.actual) &&
         passed == o.passed;
}

std::vector<Check> evaluate_checks(const Node& config, const Summary& summary) {
  std::vector<Check> out;
  if (!config.has("assert")) return out;
  const Node list = config.at("assert");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Node item = list.at(i);
    Check c;
    c.metric = item.string("metric");
    c.op = item.string("op");
    c.value = item.number("value");
    try {
      c.actual = summary.metric(c.metric);
    } catch (const Error&) {
      item.at("metric").fail("unknown metric \"" + c.metric + "\"");
    }
    if (c.op == "<=") {
      c.passed = c.actual <= c.value;
    } else if (c.op == ">=") {
      c.passed = c.actual >= c.value;
    } else if (c.op == "<") {
      c.passed = c.actual < c.value;
    } else if (c.op == ">") {
      c.passed = c.actual > c.value;
    } else if (c.op == "==") {
      c.passed = c.actual == c.value;
    } else {
      item.at("op").fail("unknown comparison \"" + c.op + "\"");
    }
    out.push_back(c);
  }
  return out;
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

bool Report::operator==(const Report& o) const {
  return command == o.command && config == o.config && rows == o.rows && summary == o.summary &&
         checks == o.checks && code_version == o.code_version && config_hash == o.config_hash &&
         timestamp == o.timestamp;
}

Json to_json(const Report& r) {
  Json j;
  j["command"] = r.command;
  j["versions"] = {{"code", r.code_version}, {"config_hash", r.config_hash}};
  if (r.timestamp) j["timestamp"] = *r.timestamp;
  j["config"] = r.config;
  Json s;
  s["max_ratio"] = num(r.summary.max_ratio);
  s["median_ratio"] = num(r.summary.median_ratio);
  s["argmax"] = r.summary.argmax;
  s["argmax_ball"] = ball_json(r.summary.argmax_ball);
  s["trend_slope"] = num(r.summary.trend_slope);
  s["flags"] = r.summary.flags;
  s["metrics"] = metrics_json(r.summary.metrics);
  j["summary"] = s;
  Json checks = Json::array();
  for (const Check& c : r.checks) {
    checks.push_back({{"metric", c.metric},
                      {"op", c.op},
                      {"value", num(c.value)},
                      {"actual", num(c.actual)},
                      {"passed", c.passed}});
  }
  j["checks"] = checks;
  Json rows = Json::array();
  for (const RatioRow& row : r.rows) {
    Json jr;
    jr["scenario_id"] = row.scenario_id;
    jr["ball"] = ball_json(row.ball);
    jr["lhs"] = num(row.lhs);
    jr["rhs"] = num(row.rhs);
    jr["ratio"] = num(row.ratio);
    jr["flags"] = row.flags;
    jr["extras"] = metrics_json(row.extras);
    rows.push_back(jr);
  }
  j["rows"] = rows;
  return j;
}

Report report_from_json(const Json& j) {
  try {
    Report r;
    r.command = j.at("command").get<std::string>();
    r.code_version = j.at("versions").at("code").get<std::string>();
    r.config_hash = j.at("versions").at("config_hash").get<std::string>();
    if (j.contains("timestamp")) r.timestamp = j.at("timestamp").get<std::string>();
    r.config = j.at("config");
    const Json& s = j.at("summary");
    r.summary.max_ratio = read_num(s.at("max_ratio"));
    r.summary.median_ratio = read_num(s.at("median_ratio"));
    r.summary.argmax = s.at("argmax").get<std::string>();
    r.summary.argmax_ball = read_ball(s.at("argmax_ball"));
    r.summary.trend_slope = read_num(s.at("trend_slope"));
    r.summary.flags = s.at("flags").get<std::vector<std::string>>();
    r.summary.metrics = read_metrics(s.at("metrics"));
    for (const Json& c : j.at("checks")) {
      r.checks.push_back({c.at("metric").get<std::string>(), c.at("op").get<std::string>(),
                          read_num(c.at("value")), read_num(c.at("actual")),
                          c.at("passed").get<bool>()});
    }
    for (const Json& jr : j.at("rows")) {
      RatioRow row;
      row.scenario_id = jr.at("scenario_id").get<std::string>();
      row.ball = read_ball(jr.at("ball"));
      row.lhs = read_num(jr.at("lhs"));
      row.rhs = read_num(jr.at("rhs"));
      row.ratio = read_num(jr.at("ratio"));
      row.flags = jr.at("flags").get<std::vector<std::string>>();
      row.extras = read_metrics(jr.at("extras"));
      r.rows.push_back(std::move(row));
    }
    return r;
  } catch (const Json::exception& e) {
    throw Error(std::string("report: ") + e.what());
  }
}

std::string to_csv(const Report& report) {
  std::ostringstream os;
  os << "scenario_id,ball_center,ball_radius,lhs,rhs,ratio,flags\n";
  for (const RatioRow& r : report.rows) {
    std::string flags;
    for (std::size_t i = 0; i < r.flags.size(); ++i) flags += (i ? ";" : "") + r.flags[i];
    os << csv_field(r.scenario_id) << ',' << (r.ball ? fmt(r.ball->center) : "") << ','
       << (r.ball ? fmt(r.ball->radius) : "") << ',' << fmt(r.lhs) << ',' << fmt(r.rhs) << ','
       << fmt(r.ratio) << ',' << csv_field(flags) << '\n';
  }
  return os.str();
}

void write_report(const Report& report, const std::string& path, const std::string& format) {
  std::string text;
  if (format == "json") {
    text = to_json(report).dump(2) + "\n";
  } else if (format == "csv") {
    text = to_csv(report);
  } else {
    throw Error("unknown report format \"" + format + "\"");
  }
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("cannot write " + path);
}

Report read_report(const std::string& path) { return report_from_json(read_config(path)); }

std::string code_version() { return kVersion; }

}  // namespace commlab::harness
