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
#include <vector>

#include "commlab/error.hpp"
#include "commlab/rng.hpp"
#include "commlab/simd/kernels.hpp"

using namespace commlab;
using simd::Isa;

namespace {

struct Data {
  std::vector<double> x;
  std::vector<double> u;
};

Data sample_data(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Data d;
  for (std::size_t i = 0; i < n; ++i) {
    d.x.push_back(rng.uniform(-5.0, 5.0));
    d.u.push_back(rng.uniform(-1.0, 1.0));
  }
  return d;
}

bool close(double a, double b, double scale) { return std::abs(a - b) <= 1e-12 * scale; }

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar table is always available") {
  CHECK(simd::supported(Isa::scalar));
  CHECK(simd::name(Isa::scalar) == "scalar");
}

TEST_CASE("avx2 kernels match the scalar reference") {
  if (!simd::supported(Isa::avx2)) {
    MESSAGE("avx2 not available, skipping");
    return;
  }
  const auto& s = simd::kernels(Isa::scalar);
  const auto& v = simd::kernels(Isa::avx2);
  // Lengths around the vector width exercise the tails.
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u, 257u}) {
    const Data d = sample_data(n, 17 + n);
    const double xi = 5.5;  // outside the data, no singular terms
    double scale = 1.0;
    for (std::size_t j = 0; j < n; ++j) scale += std::abs(d.u[j] / (xi - d.x[j]));
    CAPTURE(n);
    CHECK(close(s.cauchy(0.25, d.x.data(), d.u.data(), n, xi, 3.0),
                v.cauchy(0.25, d.x.data(), d.u.data(), n, xi, 3.0), scale));
    CHECK(close(s.riesz(-1.0, d.x.data(), d.u.data(), n, xi, 0.7),
                v.riesz(-1.0, d.x.data(), d.u.data(), n, xi, 0.7), scale));
    for (double q : {0.5, 1.0, 2.0, 1.0 / 3.0, 1.5}) {
      CAPTURE(q);
      const double a = s.abs_pow_sum(d.u.data(), d.x.data(), n, 0.1, -0.2, q);
      const double b = v.abs_pow_sum(d.u.data(), d.x.data(), n, 0.1, -0.2, q);
      CHECK(close(a, b, 1.0 + a));
    }
  }
}

TEST_CASE("cauchy kernel against a direct sum") {
  const Data d = sample_data(37, 5);
  for (Isa isa : {Isa::scalar, Isa::avx2}) {
    if (!simd::supported(isa)) continue;
    double direct = 0.0;
    for (std::size_t j = 0; j < d.x.size(); ++j) direct += d.u[j] / (M_PI * (7.0 - d.x[j]));
    const double got = simd::kernels(isa).cauchy(0.0, d.x.data(), d.u.data(), d.x.size(), 7.0, M_PI);
    CHECK(got == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("selecting the active isa") {
  const Isa before = simd::active_isa();
  simd::set_active_isa(Isa::scalar);
  CHECK(simd::active_isa() == Isa::scalar);
  CHECK(&simd::kernels() == &simd::kernels(Isa::scalar));
  if (!simd::supported(Isa::avx2)) CHECK_THROWS_AS(simd::set_active_isa(Isa::avx2), Error);
  simd::set_active_isa(before);
}

}  // TEST_SUITE

TEST_SUITE("rng") {

TEST_CASE("splitmix64 reference stream") {
  SplitMix64 r(0);
  CHECK(r.next() == 0xE220A8397B1DCDAFULL);
  CHECK(r.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(r.next() == 0x06C45D188009454FULL);
}

TEST_CASE("uniform lies in [0, 1) and split streams differ") {
  SplitMix64 r(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  SplitMix64 a(7);
  SplitMix64 child = a.split();
  CHECK(child.next() != a.next());
}

}  // TEST_SUITE
