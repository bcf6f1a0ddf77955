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

#include "commlab/grid.hpp"

namespace commlab {

/// Uncentered maximal function restricted to the balls of F containing each
/// sample. Samples covered by no ball get 0.
GridFn maximal(const GridFn& f, const BallFamily& family);

/// Uncentered maximal function over every grid-aligned interval [i, j].
/// O(n^2): for each left end, a suffix maximum over right ends.
GridFn maximal(const GridFn& f, AllIntervals);

/// M(|f|^s)^(1/s).
GridFn maximal_power(const GridFn& f, double s, const BallFamily& family);
GridFn maximal_power(const GridFn& f, double s, AllIntervals);

/// sup over intervals I containing x of avg_I |f| * avg_I |g|.
GridFn multi_maximal(const GridFn& f, const GridFn& g, AllIntervals);
GridFn multi_maximal(const GridFn& f, const GridFn& g, const BallFamily& family);

/// M_{#,delta} f(x) = sup over B in F containing x of inf_c (avg_B |f - c|^delta)^(1/delta).
GridFn sharp_maximal(const GridFn& f, double delta, const BallFamily& family);

/// v^(1/s) with exact shortcuts for s = 1 and s = 1/2.
double inverse_power(double v, double s);

}  // namespace commlab
