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
#include "rcsoc/meanfield.hpp"
#include "rcsoc/observables.hpp"

using namespace rcsoc;

namespace {

SteadyState solve_at(double delta, double eta) {
  return solve_steady_state(make_symmetric_params(delta, eta), SolverConfig{});
}

oracle::Amps amps(const CavityState& a) { return {a.alpha_p, a.alpha_m, a.beta_p, a.beta_m}; }

double parity_purity(const Coefficients& c) {
  double even = 0.0, tot = c.norm2();
  const int J = (int(c.c_dn.size()) - 1) / 2;
  for (int j = -J; j <= J; ++j)
    if (j % 2 == 0) even += std::norm(c.c_dn[j + J]) + std::norm(c.c_up[j + J]);
  return std::max(even, tot - even) / tot;
}

// exp(-t H) psi by a Taylor series with the oracle Hamiltonian.
double log_derivative_mu(const SteadyState& ss, const ModelParams& p, double t) {
  oracle::Grid g{ss.basis.J, ss.basis.n_grid};
  oracle::Field d = oracle::synth(ss.coeffs.c_dn, g), u = oracle::synth(ss.coeffs.c_up, g);
  oracle::Field sd = d, su = u, td = d, tu = u;
  for (int k = 1; k <= 8; ++k) {
    oracle::Field hd, hu;
    oracle::apply_h(td, tu, amps(ss.cavity), p, g, hd, hu);
    for (int i = 0; i < g.ng; ++i) {
      td[i] = -t / k * hd[i];
      tu[i] = -t / k * hu[i];
      sd[i] += td[i];
      su[i] += tu[i];
    }
  }
  double n0 = 0.0, n1 = 0.0;
  for (int i = 0; i < g.ng; ++i) {
    n0 += std::norm(d[i]) + std::norm(u[i]);
    n1 += std::norm(sd[i]) + std::norm(su[i]);
  }
  return -0.5 * std::log(n1 / n0) / t;
}

}  // namespace

TEST_CASE("free Hamiltonian on plane waves") {
  PlaneWaveBasis b;
  ModelParams p = make_symmetric_params(-20, 0);
  FieldProfiles zero = field_profiles({}, p, b);
  SpinorField f{CVec(b.n_grid), CVec::Zero(b.n_grid)};
  for (int i = 0; i < b.n_grid; ++i) f.psi_dn[i] = std::polar(1.0 / std::sqrt(2 * kPi), b.z(i));
  SpinorField h = apply_atomic_hamiltonian(f, zero, p, b);
  CHECK((h.psi_dn - f.psi_dn).norm() < 1e-12);
  CHECK(h.psi_up.norm() < 1e-12);
  CHECK(chemical_potential(f, zero, p, b) == doctest::Approx(1.0).epsilon(1e-13));

  SpinorField uni{CVec::Constant(b.n_grid, 0.2), CVec::Constant(b.n_grid, 0.2)};
  CHECK(apply_atomic_hamiltonian(uni, zero, p, b).psi_dn.norm() < 1e-12);
  CHECK(std::abs(chemical_potential(uni, zero, p, b)) < 1e-14);
}

TEST_CASE("constant Raman coupling gives +-|Omega|") {
  PlaneWaveBasis b;
  ModelParams p = make_symmetric_params(-20, 0);
  FieldProfiles prof{RVec::Zero(b.n_grid), RVec::Zero(b.n_grid), CVec::Constant(b.n_grid, cplx(0.0, 1.5))};
  const double a = 1.0 / std::sqrt(4 * kPi);
  SpinorField plus{CVec::Constant(b.n_grid, a), CVec::Constant(b.n_grid, cplx(0.0, -a))};
  SpinorField minus{CVec::Constant(b.n_grid, a), CVec::Constant(b.n_grid, cplx(0.0, a))};
  CHECK(chemical_potential(plus, prof, p, b) == doctest::Approx(1.5));
  CHECK(chemical_potential(minus, prof, p, b) == doctest::Approx(-1.5));
  SpinorField hp = apply_atomic_hamiltonian(plus, prof, p, b);
  CHECK((hp.psi_dn - 1.5 * plus.psi_dn).norm() < 1e-12);
  CHECK((hp.psi_up - 1.5 * plus.psi_up).norm() < 1e-12);
}

TEST_CASE("grid Hamiltonian and Galerkin matrix agree with the oracle") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  PlaneWaveBasis b;
  oracle::Grid g{b.J, b.n_grid};
  ModelParams p = make_symmetric_params(-15, 20);
  p.two_photon_detuning = 0.3;
  p.u0_up = -0.7;
  p.omega_r = cplx(-0.8, 0.3);
  for (int t = 0; t < 5; ++t) {
    Coefficients c{oracle::random_coeffs(rng, b.J, 8), oracle::random_coeffs(rng, b.J, 8)};
    CavityState a{cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng))};
    oracle::Field od, ou;
    oracle::apply_h(oracle::synth(c.c_dn, g), oracle::synth(c.c_up, g), amps(a), p, g, od, ou);
    CVec ref(2 * b.size());
    ref << oracle::analyze(od, g), oracle::analyze(ou, g);

    CVec gal = atomic_hamiltonian_matrix(a, p, b.size()) * c.stacked();
    CHECK((gal - ref).norm() <= 1e-10 * ref.norm());

    SpinorField h = apply_atomic_hamiltonian(inverse_transform(c, b), field_profiles(a, p, b), p, b);
    CHECK((transform(h, b).stacked() - ref).norm() <= 1e-10 * ref.norm());
  }
}

TEST_CASE("Galerkin Hamiltonian is Hermitian") {
  ModelParams p = make_symmetric_params(-20, 30);
  p.omega_r = cplx(0.4, -1.1);
  CMat H = atomic_hamiltonian_matrix({cplx(1, 2), cplx(-0.3, 0.1), cplx(0.5, 0), cplx(0, 1)}, p, 25);
  CHECK((H - H.adjoint()).norm() < 1e-12);
}

TEST_CASE("imaginary-time steps") {
  PlaneWaveBasis b;
  ModelParams p = make_symmetric_params(-20, 0);
  FieldProfiles zero = field_profiles({}, p, b);
  SUBCASE("eigenstate is a fixed point") {
    SpinorField f{CVec(b.n_grid), CVec::Zero(b.n_grid)};
    for (int i = 0; i < b.n_grid; ++i) f.psi_dn[i] = std::polar(1.0 / std::sqrt(2 * kPi), b.z(i));
    SpinorField s = imaginary_time_step(f, zero, p, b, 0.01);
    CHECK((s.psi_dn - f.psi_dn).norm() < 1e-12);
  }
  SUBCASE("j = 2 decays as e^{-4 dt} against j = 0") {
    Coefficients c{CVec::Zero(b.size()), CVec::Zero(b.size())};
    c.c_dn[b.index(0)] = 0.6;
    c.c_dn[b.index(2)] = 0.8;
    const double dt = 0.01;
    Coefficients s = transform(imaginary_time_step(inverse_transform(c, b), zero, p, b, dt), b);
    CHECK(std::abs(s.c_dn[b.index(2)] / s.c_dn[b.index(0)]) == doctest::Approx(0.8 / 0.6 * std::exp(-4 * dt)).epsilon(1e-12));
    CHECK(grid_norm2(inverse_transform(s, b), b) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("energy never increases in a lattice potential") {
    std::mt19937_64 rng(4);
    ModelParams q = make_symmetric_params(-20, 10);
    FieldProfiles prof = field_profiles({cplx(1.2, 0.3), cplx(0.7, -0.4), cplx(0.2, 0.1), cplx(-0.9, 0.5)}, q, b);
    Coefficients c{oracle::random_coeffs(rng, b.J, 6), oracle::random_coeffs(rng, b.J, 6)};
    SpinorField f = normalized(inverse_transform(c, b), b);
    double e = chemical_potential(f, prof, q, b);
    bool monotone = true;
    for (int k = 0; k < 100; ++k) {
      f = imaginary_time_step(f, prof, q, b, 5e-3);
      const double e2 = chemical_potential(f, prof, q, b);
      if (e2 > e + 1e-12) monotone = false;
      e = e2;
    }
    CHECK(monotone);
  }
}

TEST_CASE("undriven system") {
  SteadyState ss = solve_at(-20, 0);
  REQUIRE(ss.converged());
  CHECK(std::abs(ss.mu) <= 1e-8);
  CHECK(ss.cavity.vec().norm() == 0.0);
  PlaneWaveBasis b = ss.basis;
  SpinorField f = inverse_transform(ss.coeffs, b);
  for (int i = 0; i < b.n_grid; ++i)
    CHECK(std::norm(f.psi_dn[i]) + std::norm(f.psi_up[i]) == doctest::Approx(1 / (2 * kPi)).epsilon(1e-12));
  // spin direction canonicalized: S_- real and non-negative
  AtomicMoments m = atomic_moments(ss.coeffs);
  CHECK(std::abs(m.s_minus.imag()) < 1e-15);
  CHECK(m.s_minus.real() >= 0.0);
}

// Values from an independent numpy prototype (Picard iteration on the Galerkin
// system, J = 12), frozen here.
TEST_CASE("chemical potentials at the reference points") {
  struct Row { double delta, eta, mu; };
  for (const Row& r : {Row{-20, 20, -1.42843888}, Row{-20, 30, -3.97237569}, Row{-20, 50, -12.81215470}}) {
    CAPTURE(r.eta);
    SteadyState ss = solve_at(r.delta, r.eta);
    REQUIRE(ss.converged());
    CHECK(ss.mu == doctest::Approx(r.mu).epsilon(1e-6 / std::abs(r.mu)));
  }
}

TEST_CASE("spiral plane-wave state at (-20, 30)") {
  SteadyState ss = solve_at(-20, 30);
  REQUIRE(ss.converged());
  const int J = ss.basis.J;
  CHECK(std::abs(std::abs(ss.coeffs.c_dn[J + 1]) - 1 / std::sqrt(2.0)) < 1e-3);
  CHECK(std::abs(std::abs(ss.coeffs.c_up[J - 1]) - 1 / std::sqrt(2.0)) < 1e-3);
  for (int k = 0; k < 2 * J + 1; ++k) {
    if (k != J + 1) CHECK(std::abs(ss.coeffs.c_dn[k]) < 1e-4);
    if (k != J - 1) CHECK(std::abs(ss.coeffs.c_up[k]) < 1e-4);
  }
  CHECK(std::abs(ss.cavity.alpha_m) < 1e-6);
  CHECK(std::abs(ss.cavity.beta_p) < 1e-6);
}

TEST_CASE("converged states are stationary and self-consistent") {
  SolverConfig cfg;
  for (auto [d, e] : {std::pair{-20.0, 20.0}, {-20.0, 30.0}, {-20.0, 50.0}, {-10.0, 15.0}}) {
    CAPTURE(e);
    ModelParams p = make_symmetric_params(d, e);
    SteadyState ss = solve_steady_state(p, cfg);
    REQUIRE(ss.converged());
    Residuals r = steady_residuals(ss, p);
    CHECK(r.stationarity <= 10 * cfg.tol_psi);
    CHECK(r.field <= cfg.tol_field);
    CHECK(std::abs(ss.mu_imag) <= 1e-8);
    CHECK(energy_functional(ss.coeffs, p) == doctest::Approx(ss.mu).epsilon(1e-9));
    CHECK(parity_purity(ss.coeffs) >= 1 - 1e-6);
    // mu against exp(-tH) applied with the oracle Hamiltonian
    CHECK(std::abs(log_derivative_mu(ss, p, 1e-3) - ss.mu) <= 1e-6);
    AtomicMoments m = atomic_moments(ss.coeffs);
    CHECK(std::abs(std::abs(m.nw_dn) - std::abs(m.nw_up)) <= 1e-6);
    CHECK(std::abs(std::abs(ss.cavity.alpha_m) - std::abs(ss.cavity.beta_p)) <= 1e-6);
  }
}

TEST_CASE("screw transformation maps steady states to steady states") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ud(0.0, 2 * kPi);
  for (double eta : {20.0, 50.0}) {
    ModelParams p = make_symmetric_params(-20, eta);
    SteadyState ss = solve_steady_state(p, SolverConfig{});
    REQUIRE(ss.converged());
    const PhasePoint o0 = order_parameters(ss.coeffs, ss.cavity, ss.mu, ss.basis);
    const int J = ss.basis.J;
    double worst = 0.0;
    for (int t = 0; t < 16; ++t) {
      const double th = ud(rng);
      SteadyState s2 = ss;
      for (int j = -J; j <= J; ++j) {
        s2.coeffs.c_dn[j + J] *= std::polar(1.0, (1 - j) * th);
        s2.coeffs.c_up[j + J] *= std::polar(1.0, -(1 + j) * th);
      }
      s2.cavity.alpha_m *= std::polar(1.0, -2 * th);
      s2.cavity.beta_p *= std::polar(1.0, 2 * th);
      const Residuals r = steady_residuals(s2, p);
      const PhasePoint o = order_parameters(s2.coeffs, s2.cavity, s2.mu, s2.basis);
      const CVec c = s2.coeffs.stacked();
      const double mu2 = (c.adjoint() * atomic_hamiltonian_matrix(s2.cavity, p, 2 * J + 1) * c)(0).real();
      worst = std::max({worst, std::abs(energy_functional(s2.coeffs, p) - energy_functional(ss.coeffs, p)),
                        std::abs(mu2 - ss.mu), std::abs(std::abs(o.nw_dn) - std::abs(o0.nw_dn)),
                        std::abs(std::abs(o.s_minus) - std::abs(o0.s_minus)),
                        std::abs(std::abs(o.sw_minus_m) - std::abs(o0.sw_minus_m)),
                        std::abs(std::abs(o.sw_minus_p) - std::abs(o0.sw_minus_p)),
                        std::abs(std::abs(s2.cavity.alpha_m) - std::abs(ss.cavity.alpha_m))});
      CHECK(r.stationarity <= 1e-8);
      CHECK(r.field <= 1e-8);
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("warm start never raises the energy") {
  SolverConfig cfg;
  SteadyState prev = solve_steady_state(make_symmetric_params(-20, 24), cfg);
  for (double eta : {26.0, 40.0}) {
    ModelParams p = make_symmetric_params(-20, eta);
    SteadyState fresh = solve_steady_state(p, cfg);
    SolveContext ctx;
    ctx.warm = &prev;
    SteadyState warm = solve_steady_state(p, cfg, ctx);
    REQUIRE(warm.converged());
    CHECK(warm.mu <= fresh.mu + 1e-12);
  }
}

TEST_CASE("a density-wave warm start does not trap the solver in an excited branch") {
  // regression: before the aufbau check a parity-pure warm start converged to a
  // self-consistent state whose own Hamiltonian had a lower level in the other sector
  SolverConfig cfg;
  SteadyState dw = solve_steady_state(make_symmetric_params(-10, 12), cfg);
  REQUIRE(dw.converged());
  REQUIRE(classify_phase(order_parameters(dw.coeffs, dw.cavity, dw.mu, dw.basis), 1e-4) == Phase::DW_SW);
  ModelParams p = make_symmetric_params(-10, 40);
  SolveContext ctx;
  ctx.warm = &dw;
  SteadyState ss = solve_steady_state(p, cfg, ctx);
  REQUIRE(ss.converged());
  CHECK(classify_phase(order_parameters(ss.coeffs, ss.cavity, ss.mu, ss.basis), 1e-4) == Phase::DW_SS);
  // aufbau: the occupied level is the lowest of H[a] across both sectors
  Eigen::SelfAdjointEigenSolver<CMat> es(atomic_hamiltonian_matrix(ss.cavity, p, ss.basis.size()));
  CHECK(ss.mu <= es.eigenvalues()[0] + 1e-8);
}

TEST_CASE("determinism of seeds") {
  CHECK(point_seed(1, 2, 3, 4) == point_seed(1, 2, 3, 4));
  CHECK(point_seed(1, 2, 3, 4) != point_seed(1, 2, 3, 5));
  CHECK(point_seed(1, 2, 3, 4) != point_seed(1, 3, 2, 4));
  Coefficients a = seed_state(42, 12, 0), b = seed_state(42, 12, 0);
  CHECK(a.stacked() == b.stacked());
  CHECK(a.norm2() == doctest::Approx(1.0));
  CHECK(parity_purity(seed_state(7, 12, 1)) < 1.0);  // biased, not pure
}

TEST_CASE("invalid input") {
  ModelParams p = make_symmetric_params(-20, 10);
  SolverConfig cfg;
  cfg.mixing = 0.0;
  CHECK_THROWS_AS(solve_steady_state(p, cfg), Error);
  cfg = SolverConfig{};
  cfg.n_grid = 20;
  CHECK_THROWS_AS(solve_steady_state(p, cfg), Error);
}
