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

#include "commlab/bmo.hpp"

#include <algorithm>
#include <cmath>

#include "commlab/error.hpp"
#include "commlab/parallel.hpp"

namespace commlab {

double mean_oscillation(const GridFn& g, const Ball& ball) {
  const IndexRange r = g.grid().range(ball);
  const auto v = g.values().subspan(r.begin, r.size());
  const double mean = average(v);
  double s = 0.0;
  for (double x : v) s += std::abs(x - mean);
  return s / static_cast<double>(v.size());
}

double bmo_norm(const GridFn& b, const BallFamily& family) {
  std::vector<double> per(family.size());
  parallel_for(family.size(), [&](std::size_t k) { per[k] = mean_oscillation(b, family[k]); });
  return *std::max_element(per.begin(), per.end());
}

AffineFit bmo_b_q_fit(const GridFn& f, const GridFn& b, const Ball& ball, double q) {
  require_same_grid(f, b);
  require(q > 0.0, "bmo_b_q: q must be positive");
  const IndexRange r = f.grid().range(ball);
  require(!r.empty(), "empty ball");
  const auto s = fit::best_affine(f.values().subspan(r.begin, r.size()),
                                  b.values().subspan(r.begin, r.size()), q);
  return {s.intercept, -s.slope, s.value, q, s.method, s.exact};
}

BmoBqResult bmo_b_q_norm(const GridFn& f, const GridFn& b, double q, const BallFamily& family) {
  std::vector<AffineFit> fits(family.size());
  parallel_for(family.size(), [&](std::size_t k) { fits[k] = bmo_b_q_fit(f, b, family[k], q); });
  BmoBqResult out;
  std::size_t worst = 0;
  for (std::size_t k = 0; k < fits.size(); ++k) {
    out.per_ball.push_back(fits[k].value);
    if (fits[k].value > fits[worst].value) worst = k;
    out.nonconvex = out.nonconvex || !fits[k].exact;
  }
  out.value = fits[worst].value;
  out.worst = fits[worst];
  out.worst_ball = family[worst];
  return out;
}

double jn_check(const GridFn& b, double alpha, const BallFamily& family) {
  require(alpha > 0.0, "jn_check: alpha must be positive");
  const double norm = bmo_norm(b, family);
  if (norm == 0.0) return 0.0;
  std::vector<double> per(family.size());
  parallel_for(family.size(), [&](std::size_t k) {
    const IndexRange r = b.grid().range(family[k]);
    const auto v = b.values().subspan(r.begin, r.size());
    const double mean = average(v);
    std::vector<double> dev(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dev[i] = v[i] - mean;
    per[k] = lq_mean(dev, alpha);
  });
  return *std::max_element(per.begin(), per.end()) / (std::max(alpha, 1.0) * norm);
}

DriftResult dyadic_drift_check(const GridFn& b, const Ball& ball, int j_max,
                               const BallFamily& family) {
  require(j_max >= 0, "dyadic_drift_check: j_max must be >= 0");
  const Grid& grid = b.grid();
  const double norm = bmo_norm(b, family);
  const double base = average(b, ball);
  DriftResult out;
  for (int j = 0; j <= j_max; ++j) {
    const Ball dilated = ball.dilate(std::exp2(j));
    if (!grid.contains(dilated)) {
      out.truncated = true;
      break;
    }
    DriftRow row;
    row.j = j;
    row.drift = j == 0 ? 0.0 : std::abs(average(b, dilated) - base);
    row.normalized = j == 0 || norm == 0.0 ? 0.0 : row.drift / (j * norm);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace commlab
