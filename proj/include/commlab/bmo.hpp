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

#include <string>
#include <vector>

#include "commlab/fit.hpp"
#include "commlab/grid.hpp"

namespace commlab {

/// avg_B |g - g_B|.
double mean_oscillation(const GridFn& g, const Ball& ball);

double bmo_norm(const GridFn& b, const BallFamily& family);

/// Minimiser of (avg_B |f - c0 + c1 b|^q)^(1/q). c0, c1 follow the printed
/// sign, so f is approximated by c0 - c1 b.
struct AffineFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double value = 0.0;
  double q = 1.0;
  fit::Method method = fit::Method::closed_form;
  bool exact = true;
};

AffineFit bmo_b_q_fit(const GridFn& f, const GridFn& b, const Ball& ball, double q);

struct BmoBqResult {
  double value = 0.0;
  AffineFit worst;
  Ball worst_ball;
  std::vector<double> per_ball;
  /// Some ball was solved without a global-optimality certificate.
  bool nonconvex = false;
};

BmoBqResult bmo_b_q_norm(const GridFn& f, const GridFn& b, double q, const BallFamily& family);

/// max over F of avg_B(|b - b_B|^alpha)^(1/alpha) / (max(alpha, 1) bmo_norm(b, F)).
double jn_check(const GridFn& b, double alpha, const BallFamily& family);

struct DriftRow {
  int j = 0;
  double drift = 0.0;       // |b_{2^j B} - b_B|
  double normalized = 0.0;  // drift / (j bmo_norm); 0 at j = 0
};

struct DriftResult {
  std::vector<DriftRow> rows;
  /// Some dilation 2^j B with j <= j_max left the domain.
  bool truncated = false;
};

DriftResult dyadic_drift_check(const GridFn& b, const Ball& ball, int j_max,
                               const BallFamily& family);

}  // namespace commlab
