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

#include "commlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "commlab/error.hpp"
#include "commlab/maximal.hpp"
#include "commlab/parallel.hpp"
#include "commlab/rng.hpp"

namespace commlab {

namespace {

GridFn clamp_weight(const GridFn& raw, double& floor) {
  double top = 0.0;
  for (double v : raw.values()) {
    require(v >= 0.0, "weight: negative sample");
    top = std::max(top, v);
  }
  require(top > 0.0, "weight: identically zero");
  floor = 1e-12 * top;
  const double lo = floor;
  return transform(raw, [lo](double v) { return std::max(v, lo); });
}

double pow_mean(std::span<const double> v, double e) {
  double s = 0.0;
  for (double x : v) s += std::pow(x, e);
  return s / static_cast<double>(v.size());
}

std::span<const double> on_ball(const GridFn& f, const Ball& b) {
  const IndexRange r = f.grid().range(b);
  return f.values().subspan(r.begin, r.size());
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

double a1_from(const Weight& w, const GridFn& mw) {
  double worst = 0.0;
  for (std::size_t i = 0; i < mw.size(); ++i) worst = std::max(worst, mw[i] / w.fn()[i]);
  return worst;
}

}  // namespace

Weight::Weight(const GridFn& raw) : w_(clamp_weight(raw, floor_)) {}

Weight WeightFamilySpec::build(const Grid& grid) const {
  switch (kind) {
    case WeightKind::power:
      require(a > -1.0, "weight: power exponent must exceed -1");
      return Weight(GridFn::sample(grid, [this](double x) { return std::pow(std::abs(x), a); }));
    case WeightKind::product_of_powers:
      require(!factors.empty(), "weight: product_of_powers needs factors");
      for (const auto& [c, e] : factors) require(e > -1.0, "weight: power exponent must exceed -1");
      return Weight(GridFn::sample(grid, [this](double x) {
        double v = 1.0;
        for (const auto& [c, e] : factors) v *= std::pow(std::abs(x - c), e);
        return v;
      }));
    case WeightKind::perturbed_power: {
      require(a > -1.0, "weight: power exponent must exceed -1");
      require(amplitude >= 0.0 && amplitude < 1.0, "weight: amplitude must lie in [0, 1)");
      SplitMix64 rng(seed);
      const double phase = 2.0 * std::numbers::pi * rng.uniform();
      return Weight(GridFn::sample(grid, [this, phase](double x) {
        return std::pow(std::abs(x), a) * (1.0 + amplitude * std::sin(frequency * x + phase));
      }));
    }
    case WeightKind::constant:
      require(value > 0.0, "weight: constant must be positive");
      return Weight(GridFn::constant(grid, value));
  }
  throw Error("weight: unknown kind");
}

std::string WeightFamilySpec::label() const {
  std::ostringstream os;
  switch (kind) {
    case WeightKind::power:
      os << "power(" << a << ")";
      break;
    case WeightKind::product_of_powers:
      os << "product(";
      for (std::size_t k = 0; k < factors.size(); ++k) {
        os << (k ? "," : "") << factors[k].first << ":" << factors[k].second;
      }
      os << ")";
      break;
    case WeightKind::perturbed_power:
      os << "perturbed(" << a << "," << amplitude << "," << frequency << "," << seed << ")";
      break;
    case WeightKind::constant:
      os << "constant(" << value << ")";
      break;
  }
  return os.str();
}

double a1_constant(const Weight& w, const BallFamily& family) {
  return a1_from(w, maximal(w.fn(), family));
}

double a1_constant(const Weight& w, AllIntervals) {
  return a1_from(w, maximal(w.fn(), AllIntervals{}));
}

std::vector<double> ap_per_ball(const Weight& w, double p, const BallFamily& family) {
  require(p > 1.0, "ap_constant: p must exceed 1");
  const double e = -1.0 / (p - 1.0);
  const GridFn sigma = transform(w.fn(), [e](double v) { return std::pow(v, e); });
  std::vector<double> out(family.size());
  parallel_for(family.size(), [&](std::size_t k) {
    out[k] = average(w.fn(), family[k]) * std::pow(average(sigma, family[k]), p - 1.0);
  });
  return out;
}

double ap_constant(const Weight& w, double p, const BallFamily& family) {
  return max_of(ap_per_ball(w, p, family));
}

double ap_vec_constant(std::span<const Weight> weights, std::span<const double> p,
                       const BallFamily& family) {
  require(!weights.empty(), "ap_vec_constant: no weights");
  require(weights.size() == p.size(), "ap_vec_constant: weights and exponents differ in length");
  double inv = 0.0;
  for (double pi : p) {
    require(pi > 1.0, "ap_vec_constant: every p_i must exceed 1");
    inv += 1.0 / pi;
  }
  const double pp = 1.0 / inv;
  std::vector<double> product(weights.front().fn().values().begin(),
                              weights.front().fn().values().end());
  for (std::size_t k = 1; k < weights.size(); ++k) {
    require_same_grid(weights[k].fn(), weights.front().fn());
    for (std::size_t i = 0; i < product.size(); ++i) product[i] *= weights[k].fn()[i];
  }
  const GridFn w(weights.front().grid(), std::move(product));
  std::vector<double> out(family.size());
  parallel_for(family.size(), [&](std::size_t b) {
    double v = std::pow(pow_mean(on_ball(w, family[b]), pp), 1.0 / pp);
    for (std::size_t k = 0; k < weights.size(); ++k) {
      const double conj = p[k] / (p[k] - 1.0);
      v *= std::pow(pow_mean(on_ball(weights[k].fn(), family[b]), -conj), 1.0 / conj);
    }
    out[b] = v;
  });
  return max_of(out);
}

std::vector<double> a_infty_vec_per_ball(std::span<const Weight> weights,
                                         const BallFamily& family) {
  require(!weights.empty(), "a_infty_vec_constant: no weights");
  std::vector<double> out(family.size());
  parallel_for(family.size(), [&](std::size_t b) {
    const IndexRange r = weights.front().grid().range(family[b]);
    double avg_w = 0.0;
    double log_sum = 0.0;
    for (std::size_t i = r.begin; i < r.end; ++i) {
      double w = 1.0;
      for (const Weight& wk : weights) {
        w *= wk.fn()[i];
        log_sum -= std::log(wk.fn()[i]);
      }
      avg_w += w;
    }
    const double m = static_cast<double>(r.size());
    out[b] = (avg_w / m) * std::exp(log_sum / m);
  });
  return out;
}

double a_infty_vec_constant(std::span<const Weight> weights, const BallFamily& family) {
  return max_of(a_infty_vec_per_ball(weights, family));
}

GridFn m_r_weight(const Weight& w, double r, const BallFamily& family) {
  require(r >= 1.0, "m_r_weight: r must be >= 1");
  return maximal_power(w.fn(), r, family);
}

GridFn m_r_weight(const Weight& w, double r, AllIntervals) {
  require(r >= 1.0, "m_r_weight: r must be >= 1");
  return maximal_power(w.fn(), r, AllIntervals{});
}

Weight dual_weight(const Weight& w, double p) {
  require(p > 1.0, "dual_weight: p must exceed 1");
  const double e = -1.0 / (p - 1.0);
  return Weight(transform(w.fn(), [e](double v) { return std::pow(v, e); }));
}

}  // namespace commlab
