// Copyright 2026 The rcsoc Authors
// SPDX-License-Identifier: Apache-2.0
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


#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "rcsoc/model.hpp"

using namespace rcsoc;

namespace {

SpinorField from_fn(const PlaneWaveBasis& b, cplx (*fd)(double), cplx (*fu)(double)) {
  SpinorField f{CVec(b.n_grid), CVec(b.n_grid)};
  for (int i = 0; i < b.n_grid; ++i) {
    f.psi_dn[i] = fd(b.z(i));
    f.psi_up[i] = fu(b.z(i));
  }
  return f;
}

const double kNorm = 1.0 / std::sqrt(2.0 * 2.0 * kPi);

}  // namespace

TEST_CASE("spiral plane waves land on single coefficients") {
  PlaneWaveBasis b;
  auto f = from_fn(b, [](double z) { return std::polar(kNorm, z); }, [](double z) { return std::polar(kNorm, -z); });
  Coefficients c = transform(f, b);
  for (int k = 0; k < b.size(); ++k) {
    const int j = b.momentum(k);
    CHECK(std::abs(c.c_dn[k]) == doctest::Approx(j == 1 ? 1 / std::sqrt(2.0) : 0.0).epsilon(1e-12).scale(1));
    CHECK(std::abs(c.c_up[k]) == doctest::Approx(j == -1 ? 1 / std::sqrt(2.0) : 0.0).epsilon(1e-12).scale(1));
  }
}

TEST_CASE("uniform spinor occupies j = 0 only") {
  PlaneWaveBasis b;
  auto f = from_fn(b, [](double) { return cplx(kNorm); }, [](double) { return cplx(kNorm); });
  Coefficients c = transform(f, b);
  CHECK(std::abs(c.c_dn[b.index(0)] - 1 / std::sqrt(2.0)) < 1e-13);
  CHECK(std::abs(c.c_up[b.index(0)] - 1 / std::sqrt(2.0)) < 1e-13);
  CHECK(c.norm2() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("round trip and Parseval against direct sums") {
  std::mt19937_64 rng(11);
  PlaneWaveBasis b;
  oracle::Grid g{b.J, b.n_grid};
  for (int t = 0; t < 5; ++t) {
    Coefficients c{oracle::random_coeffs(rng, b.J, b.J), oracle::random_coeffs(rng, b.J, b.J)};
    SpinorField f = inverse_transform(c, b);
    const oracle::Field d = oracle::synth(c.c_dn, g), u = oracle::synth(c.c_up, g);
    double err = 0.0;
    for (int i = 0; i < b.n_grid; ++i) err = std::max(err, std::abs(f.psi_dn[i] - d[i]) + std::abs(f.psi_up[i] - u[i]));
    CHECK(err < 1e-12);
    Coefficients back = transform(f, b);
    CHECK((back.stacked() - c.stacked()).norm() <= 1e-12 * c.stacked().norm());
    CHECK(std::abs(grid_norm2(f, b) - c.norm2()) <= 1e-12 * c.norm2());
    CHECK((oracle::analyze(d, g) - c.c_dn).norm() <= 1e-12 * c.c_dn.norm());
  }
}

TEST_CASE("normalized gives unit norm") {
  std::mt19937_64 rng(3);
  PlaneWaveBasis b;
  Coefficients c{oracle::random_coeffs(rng, b.J, 4), oracle::random_coeffs(rng, b.J, 4)};
  CHECK(grid_norm2(normalized(inverse_transform(c, b), b), b) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("shift multiplies by e^{imz}") {
  PlaneWaveBasis b{4, 32};
  CVec c = CVec::Zero(b.size());
  c[b.index(1)] = 2.0;
  c[b.index(-4)] = 5.0;
  CVec s = shift(c, 2);
  CHECK(s[b.index(3)] == cplx(2.0));
  CHECK(s[b.index(-2)] == cplx(5.0));
  CHECK(s.squaredNorm() == doctest::Approx(29.0));
  CVec t = shift(c, 4);  // j = 1 -> 5 leaves the basis
  CHECK(t[b.index(0)] == cplx(5.0));
  CHECK(t.squaredNorm() == doctest::Approx(25.0));
  CHECK((shift_matrix(b.size(), 2) * c - s).norm() == 0.0);
}

TEST_CASE("symmetric constructor and validation") {
  ModelParams p = make_symmetric_params(-12.5, 33.0);
  CHECK(p.is_symmetric());
  CHECK(p.delta_a == -12.5);
  CHECK(p.delta_b == -12.5);
  CHECK(p.eta_p == 33.0);
  CHECK(p.eta_m == 33.0);
  CHECK_NOTHROW(p.validate());
  p.eta_m = 1.0;
  CHECK_FALSE(p.is_symmetric());
  ModelParams bad = make_symmetric_params(-20, 10);
  bad.kappa = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.kappa = 1.0;
  bad.delta_a = std::nan("");
  CHECK_THROWS_AS(bad.validate(), Error);
  PlaneWaveBasis tiny{12, 16};  // below the band limit of the products
  CHECK_THROWS_AS(tiny.validate(), Error);
}

TEST_CASE("scaling the pumps leaves the basis untouched") {
  ModelParams p = make_symmetric_params(-20, 10);
  ModelParams q = p;
  q.eta_p *= 3.0;
  q.eta_m *= 3.0;
  CHECK(q.u0_dn == p.u0_dn);
  CHECK(q.omega_r == p.omega_r);
  CHECK(q.kappa == p.kappa);
  CHECK(q.is_symmetric());
}
