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

#include "commlab/harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "commlab/error.hpp"

namespace commlab::harness {

Node::Node(const Json& value, std::string path) : value_(&value), path_(std::move(path)) {}

void Node::fail(const std::string& what) const {
  throw Error("config: " + (path_.empty() ? std::string("<root>") : path_) + ": " + what);
}

bool Node::has(const std::string& key) const {
  return value_->is_object() && value_->contains(key) && !(*value_)[key].is_null();
}

Node Node::at(const std::string& key) const {
  const std::string child = path_.empty() ? key : path_ + "." + key;
  if (!value_->is_object()) fail("expected an object");
  if (!has(key)) throw Error("config: missing field " + child);
  return Node((*value_)[key], child);
}

Node Node::at(std::size_t index) const {
  if (!value_->is_array()) fail("expected an array");
  if (index >= value_->size()) fail("index " + std::to_string(index) + " out of range");
  return Node((*value_)[index], path_ + "[" + std::to_string(index) + "]");
}

std::size_t Node::size() const {
  if (!value_->is_array()) fail("expected an array");
  return value_->size();
}

double Node::number() const {
  if (!value_->is_number()) fail("expected a number");
  return value_->get<double>();
}

long long Node::integer() const {
  if (!value_->is_number_integer()) fail("expected an integer");
  return value_->get<long long>();
}

std::string Node::string() const {
  if (!value_->is_string()) fail("expected a string");
  return value_->get<std::string>();
}

bool Node::boolean() const {
  if (!value_->is_boolean()) fail("expected true or false");
  return value_->get<bool>();
}

std::vector<double> Node::numbers() const {
  if (value_->is_number()) return {number()};
  std::vector<double> out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).number());
  return out;
}

double Node::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long long Node::integer(const std::string& key, long long fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::string Node::string(const std::string& key, const std::string& fallback) const {
  return has(key) ? string(key) : fallback;
}

bool Node::boolean(const std::string& key, bool fallback) const {
  return has(key) ? at(key).boolean() : fallback;
}

std::vector<double> Node::numbers(const std::string& key, std::vector<double> fallback) const {
  return has(key) ? numbers(key) : fallback;
}

Json parse_config(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(std::string("config: parse error: ") + e.what());
  }
}

Json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw Error("config: " + path + ": parse error: " + e.what());
  }
}

Grid parse_grid(const Node& node) { return parse_grid(node, 0); }

Grid parse_grid(const Node& node, std::size_t n) {
  const double left = node.number("left");
  const double right = node.number("right");
  const long long count = n != 0 ? static_cast<long long>(n) : node.integer("n");
  if (count < 8) node.at("n").fail("must be >= 8");
  if (!(left < right)) node.fail("left must be < right");
  return Grid(left, right, static_cast<std::size_t>(count));
}

KernelSpec parse_kernel(const Node& node, const Grid& grid) {
  try {
    return KernelSpec::parse(node.string(), grid.right() - grid.left());
  } catch (const Error& e) {
    node.fail(e.what());
  }
}

BilinearKernelSpec parse_bilinear_kernel(const Node& node) {
  try {
    return BilinearKernelSpec::parse(node.string());
  } catch (const Error& e) {
    node.fail(e.what());
  }
}

TruncationRule parse_truncation(const Node& parent) {
  return TruncationRule{parent.number("epsilon", 0.0)};
}

WeightFamilySpec parse_weight(const Node& node) {
  WeightFamilySpec w;
  const std::string kind = node.string("kind");
  if (kind == "power") {
    w.kind = WeightKind::power;
    w.a = node.number("a");
  } else if (kind == "product_of_powers") {
    w.kind = WeightKind::product_of_powers;
    const Node factors = node.at("factors");
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const Node f = factors.at(i);
      w.factors.emplace_back(f.number("center"), f.number("a"));
    }
  } else if (kind == "perturbed_power") {
    w.kind = WeightKind::perturbed_power;
    w.a = node.number("a");
    w.amplitude = node.number("amplitude");
    w.frequency = node.number("frequency", 1.0);
    w.seed = static_cast<std::uint64_t>(node.integer("seed"));
  } else if (kind == "constant") {
    w.kind = WeightKind::constant;
    w.value = node.number("value", 1.0);
  } else {
    node.at("kind").fail("unknown weight kind \"" + kind + "\"");
  }
  return w;
}

namespace {

std::function<double(double)> function_rule(const Node& node, const Grid& grid) {
  if (node.is_string()) {
    const std::string name = node.string();
    if (name == "zero") return [](double) { return 0.0; };
    if (name == "log_abs") return [](double x) { return std::log(std::abs(x)); };
    if (name == "log_abs_squared") {
      return [](double x) {
        const double l = std::log(std::abs(x));
        return l * l;
      };
    }
    if (name == "sgn") return [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); };
    node.fail("unknown function \"" + name + "\"");
  }
  const std::string kind = node.string("kind");
  if (kind == "indicator") {
    const double a = node.number("a");
    const double b = node.number("b");
    return [a, b](double x) { return x >= a && x <= b ? 1.0 : 0.0; };
  }
  if (kind == "constant") {
    const double v = node.number("value");
    return [v](double) { return v; };
  }
  if (kind == "power") {
    const double a = node.number("a");
    return [a](double x) { return std::pow(std::abs(x), a); };
  }
  if (kind == "log_abs") {
    const double c = node.number("center", 0.0);
    return [c](double x) { return std::log(std::abs(x - c)); };
  }
  if (kind == "cosine") {
    const double freq = node.number("frequency", 1.0);
    const double phase = node.number("phase", 0.0);
    if (node.has("weight")) {
      const Weight w = parse_weight(node.at("weight")).build(grid);
      const Grid g = grid;
      return [w, freq, phase, g](double x) {
        return w.fn()[g.nearest(x)] * std::cos(freq * x + phase);
      };
    }
    return [freq, phase](double x) { return std::cos(freq * x + phase); };
  }
  if (kind == "affine") {
    const double alpha = node.number("alpha");
    const double beta = node.number("beta", 0.0);
    auto inner = function_rule(node.at("of"), grid);
    return [alpha, beta, inner](double x) { return alpha * inner(x) + beta; };
  }
  if (kind == "samples") {
    const std::vector<double> v = node.numbers("values");
    if (v.size() != grid.size()) node.at("values").fail("sample count does not match grid.n");
    const Grid g = grid;
    return [v, g](double x) { return v[g.nearest(x)]; };
  }
  node.at("kind").fail("unknown function kind \"" + kind + "\"");
}

}  // namespace

GridFn parse_function(const Node& node, const Grid& grid) {
  return GridFn::sample(grid, function_rule(node, grid));
}

std::string function_label(const Node& node) {
  if (node.is_string()) return node.string();
  if (node.has("label")) return node.string("label");
  return node.json().dump();
}

std::vector<Ball> parse_balls(const Node& node) {
  std::vector<Ball> balls;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const Node b = node.at(i);
    if (b.is_array()) {
      if (b.size() != 2) b.fail("expected [center, radius]");
      balls.push_back({b.at(0).number(), b.at(1).number()});
    } else {
      balls.push_back({b.number("center"), b.number("radius")});
    }
    if (!(balls.back().radius > 0.0)) b.fail("radius must be positive");
  }
  return balls;
}

BallFamily parse_family(const Node& node, const Grid& grid) {
  const std::string rule_name = node.string("rule", "require_2B_inside");
  MarginRule rule = MarginRule::require_2B_inside;
  if (rule_name == "clip_to_domain") {
    rule = MarginRule::clip_to_domain;
  } else if (rule_name != "require_2B_inside") {
    node.at("rule").fail("unknown margin rule \"" + rule_name + "\"");
  }
  const std::string kind = node.string("kind");
  if (kind == "dyadic") {
    const int centers = static_cast<int>(node.integer("centers"));
    const int scales = static_cast<int>(node.integer("scales"));
    const double r_min = node.number("r_min");
    const int per_octave = static_cast<int>(node.integer("per_octave", 1));
    if (node.has("center_lo") || node.has("center_hi")) {
      return dyadic_family(grid, centers, scales, rule, r_min, node.number("center_lo"),
                           node.number("center_hi"), per_octave);
    }
    return dyadic_family(grid, centers, scales, rule, r_min, per_octave);
  }
  if (kind == "dense") {
    return dense_family(grid, static_cast<std::size_t>(node.integer("stride", 1)),
                        node.number("ratio", 2.0), rule);
  }
  if (kind == "explicit") return BallFamily(grid, parse_balls(node.at("balls")), rule);
  if (kind == "centered") {
    // Radii 2^-k for k in [k_min, k_max] around one center.
    const double center = node.number("center", 0.0);
    std::vector<Ball> balls;
    for (long long k = node.integer("k_min"); k <= node.integer("k_max"); ++k) {
      balls.push_back({center, std::exp2(-static_cast<double>(k))});
    }
    return BallFamily(grid, std::move(balls), rule);
  }
  node.at("kind").fail("unknown family kind \"" + kind + "\"");
}

std::string config_hash(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace commlab::harness
