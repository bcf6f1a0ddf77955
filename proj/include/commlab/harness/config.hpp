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

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "commlab/grid.hpp"
#include "commlab/operators.hpp"
#include "commlab/weights.hpp"

namespace commlab::harness {

using Json = nlohmann::ordered_json;

/// A JSON value together with its dotted path, so that lookups can name the
/// offending field ("grid.n") when something is missing or malformed.
class Node {
 public:
  Node(const Json& value, std::string path);

  const Json& json() const { return *value_; }
  const std::string& path() const { return path_; }

  bool has(const std::string& key) const;
  Node at(const std::string& key) const;
  Node at(std::size_t index) const;
  std::size_t size() const;
  bool is_array() const { return value_->is_array(); }
  bool is_string() const { return value_->is_string(); }

  double number() const;
  long long integer() const;
  std::string string() const;
  bool boolean() const;
  std::vector<double> numbers() const;

  double number(const std::string& key) const { return at(key).number(); }
  double number(const std::string& key, double fallback) const;
  long long integer(const std::string& key) const { return at(key).integer(); }
  long long integer(const std::string& key, long long fallback) const;
  std::string string(const std::string& key) const { return at(key).string(); }
  std::string string(const std::string& key, const std::string& fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const { return at(key).numbers(); }
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const;

  [[noreturn]] void fail(const std::string& what) const;

 private:
  const Json* value_;
  std::string path_;
};

/// Parses a JSON file; syntax errors carry the byte offset, I/O errors the path.
Json read_config(const std::string& path);
Json parse_config(const std::string& text);

Grid parse_grid(const Node& node);
/// `n` replaces the configured sample count when nonzero.
Grid parse_grid(const Node& node, std::size_t n);
KernelSpec parse_kernel(const Node& node, const Grid& grid);
BilinearKernelSpec parse_bilinear_kernel(const Node& node);
TruncationRule parse_truncation(const Node& parent);
WeightFamilySpec parse_weight(const Node& node);
/// Functions by name: "log_abs", "log_abs_squared", "sgn", "zero", or objects
/// {"kind": "indicator" | "constant" | "cosine" | "power" | "samples" | ...}.
GridFn parse_function(const Node& node, const Grid& grid);
std::string function_label(const Node& node);
BallFamily parse_family(const Node& node, const Grid& grid);
std::vector<Ball> parse_balls(const Node& node);

/// FNV-1a 64 over the compact serialisation, as 16 hex digits.
std::string config_hash(const Json& config);

}  // namespace commlab::harness
