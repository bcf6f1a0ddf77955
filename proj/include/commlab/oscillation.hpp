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
#include <vector>

#include "commlab/grid.hpp"
#include "commlab/operators.hpp"
#include "commlab/weights.hpp"

namespace commlab {

/// avg_B |g - g_B|.
double classical_osc(const GridFn& g, const Ball& ball);

struct OscTerm {
  std::string name;
  double value = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct OscReport {
  Ball ball;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  /// c2 was prescribed rather than optimised.
  bool fixed_c2 = true;
  std::vector<std::string> flags;
  std::vector<OscTerm> terms;
  /// Number of dyadic shells kept in truncated j-sums.
  int truncation_depth = 0;

  const OscTerm* term(const std::string& name) const;
};

/// lhs / max(rhs, 1e-300).
double safe_ratio(double lhs, double rhs);

/// Holds b, K, f and the commutator; [b,T]f is computed once on `window`.
class CommutatorContext {
 public:
  CommutatorContext(GridFn b, KernelSpec k, GridFn f, TruncationRule trunc = {});
  CommutatorContext(GridFn b, KernelSpec k, GridFn f, TruncationRule trunc, IndexRange window);

  const GridFn& b() const { return b_; }
  const GridFn& f() const { return f_; }
  const KernelSpec& kernel() const { return k_; }
  const TruncationRule& truncation() const { return trunc_; }
  const Grid& grid() const { return f_.grid(); }
  const IndexRange& window() const { return window_; }
  const GridFn& commutator() const { return comm_; }

  /// c_B: the sample nearest the ball center.
  std::size_t center_index(const Ball& ball) const;
  /// T(f chi_{(2B)^c})(c_B).
  double far_value_at_center(const Ball& ball) const;

 private:
  GridFn b_;
  KernelSpec k_;
  GridFn f_;
  TruncationRule trunc_;
  IndexRange window_;
  GridFn comm_;
};

/// inf over c1 of avg_B(|[b,T]f - c1 - T(f chi_{(2B)^c})(c_B) b|^delta)^(1/delta).
OscReport modified_osc_fixed_c2(const CommutatorContext& ctx, const Ball& ball, double delta);

/// inf over c1, c2 of avg_B(|[b,T]f - c1 - c2 b|^delta)^(1/delta).
OscReport double_inf_osc(const CommutatorContext& ctx, const Ball& ball, double delta);

/// Pieces of the right-hand side r' ||f/w||_inf ||b||_BMO inf_B M_r w.
struct LinearRhsContext {
  double f_over_w = 0.0;
  double b_norm = 0.0;
  double r = 2.0;
  GridFn m_w;    // M w over all intervals
  GridFn m_r_w;  // (M w^r)^(1/r) over all intervals

  static LinearRhsContext build(const GridFn& f, const Weight& w, const GridFn& b, double r,
                                const BallFamily& family);
  double conjugate() const { return r / (r - 1.0); }
  double rhs(const Ball& ball) const;
};

double rhs_linear(const GridFn& f, const Weight& w, const GridFn& b, const Ball& ball, double r,
                  const BallFamily& family);

/// Terms L11, L12, L21, L22 with their own bounds, plus "L11_holder", the
/// right side of the Hoelder step with exponent epsilon. lhs uses the
/// constants c1 = -b_2B Tf2(c_B) - T((b - b_2B) f2)(c_B), c2 = Tf2(c_B).
OscReport proof_decomposition_linear(const CommutatorContext& ctx, const Ball& ball, double delta,
                                     double epsilon, const LinearRhsContext& rhs);

struct SharpPointwise {
  GridFn lhs;    // M_{#,delta}([b,T]f)
  GridFn g;      // sup over B containing x of the fixed-c2 infimum
  GridFn m_t;    // grand maximal of f
  double b_norm = 0.0;

  double ratio(std::size_t i) const;
};

SharpPointwise sharp_pointwise_table(const CommutatorContext& ctx, double delta,
                                     const BallFamily& family);

enum class TruncationMode { difference_truncation, vector_outside_truncation };

struct BilinearSetup {
  GridFn b;
  BilinearKernelSpec k;
  GridFn f;
  GridFn g;
  TruncationRule trunc;
};

/// Right-hand side pieces ||b||_BMO [w]_{A_inf vec} prod ||f_i w_i||_inf.
struct BilinearRhsContext {
  double b_norm = 0.0;
  double a_infty = 0.0;
  double fw_product = 0.0;
  GridFn inv_w;  // 1 / (w1 w2)

  static BilinearRhsContext build(const BilinearSetup& s, const Weight& w1, const Weight& w2,
                                  const BallFamily& family);
  double rhs(const Ball& ball) const;
};

/// lhs with the explicit c1(B), c2(B); terms I1, I2, I21, I22, and
/// "double_inf", the oracle two-parameter infimum (value only).
OscReport modified_osc_multilinear(const BilinearSetup& s, const Ball& ball, double delta,
                                   TruncationMode mode, const BilinearRhsContext& rhs);

}  // namespace commlab
