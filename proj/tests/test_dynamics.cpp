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
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "oracle.hpp"
#include "rcsoc/dynamics.hpp"

using namespace rcsoc;

namespace {

Coefficients random_state(std::mt19937_64& rng, int J, int jmax) {
  Coefficients c{oracle::random_coeffs(rng, J, jmax), oracle::random_coeffs(rng, J, jmax)};
  const double s = 1 / std::sqrt(c.norm2());
  c.c_dn *= s;
  c.c_up *= s;
  return c;
}

CavityState random_fields(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  return {cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng))};
}

}  // namespace

TEST_CASE("steady plane-wave state does not move") {
  ModelParams p = make_symmetric_params(-20, 30);
  SteadyState ss = solve_steady_state(p, SolverConfig{});
  REQUIRE(ss.converged());
  Trajectory tr = propagate_effective(ss.coeffs, ss.cavity, p, 5.0);
  DriftReport d = drift_report(tr);
  CHECK(d.max_order_drift < 1e-4);
  CHECK(d.max_norm_drift < 1e-8 * 5.0);
  CHECK(tr.snaps.back().t == doctest::Approx(5.0));
  CHECK(tr.snaps.size() == 51);
}

TEST_CASE("a non-stationary state moves") {
  std::mt19937_64 rng(3);
  ModelParams p = make_symmetric_params(-20, 30);
  Trajectory tr = propagate_effective(random_state(rng, 12, 3), CavityState{}, p, 1.0);
  CHECK(drift_report(tr).max_order_drift > 1e-2);
  CHECK(drift_report(tr).max_norm_drift < 1e-8);
}

TEST_CASE("closed system conserves energy") {
  std::mt19937_64 rng(12);
  ModelParams p = make_symmetric_params(-20, 0);
  p.kappa = 0.0;
  p.omega_r = cplx(-0.7, 0.4);
  const Coefficients c = random_state(rng, 12, 3);
  const CavityState a = random_fields(rng, 1.0);
  Trajectory tr = propagate_effective(c, a, p, 10.0);
  const DriftReport d = drift_report(tr);
  CHECK(d.max_energy_drift <= 1e-8);
  CHECK(d.max_norm_drift <= 1e-8 * 10);
  CHECK(tr.snaps.front().energy == doctest::Approx(effective_energy(c, a, p)).epsilon(1e-14));
}

TEST_CASE("undriven light decays at kappa") {
  std::mt19937_64 rng(5);
  ModelParams p = make_symmetric_params(-20, 0);
  p.u0_dn = p.u0_up = 0.0;
  p.omega_r = 0.0;
  p.kappa = 0.7;
  const CavityState a0 = random_fields(rng, 2.0);
  Trajectory tr = propagate_effective(random_state(rng, 12, 2), a0, p, 3.0);
  for (const Snapshot& s : tr.snaps)
    for (int k = 0; k < 4; ++k) {
      const cplx expect = a0.vec()[k] * std::exp(cplx(-p.kappa, p.delta_a) * s.t);
      CHECK(std::abs(s.cavity.vec()[k] - expect) <= 1e-12 * std::abs(a0.vec()[k]) + 1e-15);
    }
}

TEST_CASE("trajectory matches direct integration of the oracle equations") {
  std::mt19937_64 rng(44);
  ModelParams p = make_symmetric_params(-12, 6);
  p.omega_r = cplx(-0.8, 0.3);
  p.two_photon_detuning = 0.2;
  const int J = 6;
  oracle::Grid g{J, 32};
  Coefficients c = random_state(rng, J, 2);
  CavityState a = random_fields(rng, 0.5);
  const double T = 0.5;
  TrajectoryOptions opt;
  opt.dt = 1e-4;
  opt.snapshot_every = 5000;
  Trajectory tr = propagate_effective(c, a, p, T, opt);

  const int n = 2 * J + 1;
  CVec X(2 * n + 4);
  X << c.c_dn, c.c_up, a.vec();
  const double h = 1e-3;
  for (int s = 0; s < int(std::lround(T / h)); ++s) {
    const CVec k1 = oracle::flow(X, p, g, 0.0);
    const CVec k2 = oracle::flow(X + 0.5 * h * k1, p, g, 0.0);
    const CVec k3 = oracle::flow(X + 0.5 * h * k2, p, g, 0.0);
    const CVec k4 = oracle::flow(X + h * k3, p, g, 0.0);
    X += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  const Snapshot& last = tr.snaps.back();
  CVec Y(2 * n + 4);
  Y << last.c.c_dn, last.c.c_up, last.cavity.vec();
  CHECK((Y - X).norm() <= 1e-6 * X.norm());
}

TEST_CASE("uncoupled excited state leaves the ground spinor free") {
  std::mt19937_64 rng(8);
  LambdaParams lp;
  lp.g_dn = lp.g_up = 0.0;
  lp.base = make_symmetric_params(-20, 10);
  const int J = 8;
  LambdaState s0{random_state(rng, J, 3), CVec::Zero(2 * J + 1), CavityState{}};
  Trajectory tr = propagate_lambda(s0, lp, 1.0);
  for (double r : adiabatic_residual(tr, lp)) CHECK(r == 0.0);
  const Snapshot& last = tr.snaps.back();
  for (int j = -J; j <= J; ++j) {
    const cplx ph = std::exp(cplx(0, -double(j * j) * last.t));
    CHECK(std::abs(last.c.c_dn[j + J] - s0.c.c_dn[j + J] * ph) < 1e-12);
    CHECK(std::abs(last.c.c_up[j + J] - s0.c.c_up[j + J] * ph) < 1e-12);
  }
  CHECK(last.c_e.norm() == 0.0);
}

TEST_CASE("effective couplings from the three-level parameters") {
  LambdaParams lp;
  lp.g_dn = cplx(1.0, 0.5);
  lp.g_up = cplx(0.3, -0.2);
  lp.det_dn = 60;
  lp.det_up = 140;
  ModelParams e = lp.effective();
  CHECK(e.u0_dn == doctest::Approx(2 * std::norm(lp.g_dn) / 200));
  CHECK(e.u0_up == doctest::Approx(2 * std::norm(lp.g_up) / 200));
  CHECK(std::abs(e.omega_r - 2.0 * std::conj(lp.g_dn) * lp.g_up / 200.0) < 1e-15);
  ModelParams want = make_symmetric_params(-20, 30);
  LambdaParams back = lambda_for(want, -400);
  CHECK(back.effective().u0_dn == doctest::Approx(want.u0_dn));
  CHECK(back.effective().u0_up == doctest::Approx(want.u0_up));
  CHECK(std::abs(back.effective().omega_r - want.omega_r) < 1e-12);
  CHECK_THROWS_AS(lambda_for(want, 400), Error);  // attractive U0 needs a negative detuning sum
}

TEST_CASE("far-detuned excited state follows its adiabatic value") {
  ModelParams p = make_symmetric_params(-20, 30);
  SteadyState ss = solve_steady_state(p, SolverConfig{});
  REQUIRE(ss.converged());
  LambdaParams lp;
  lp.g_dn = lp.g_up = 1.0;
  lp.det_dn = lp.det_up = 100.0;  // sum 200
  lp.base = p;
  REQUIRE(lp.elimination_regime());
  LambdaState s0{ss.coeffs, excited_steady_state(ss.coeffs, ss.cavity, lp), ss.cavity};
  TrajectoryOptions opt;
  opt.snapshot_every = 10;
  Trajectory tr = propagate_lambda(s0, lp, 2.0, opt);
  const std::vector<double> r = adiabatic_residual(tr, lp);
  double worst = 0.0;
  for (size_t i = 0; i < tr.snaps.size(); ++i) {
    if (tr.snaps[i].t <= 10.0 / lp.detuning_sum()) continue;
    const double ref = excited_steady_state(tr.snaps[i].c, tr.snaps[i].cavity, lp).norm();
    worst = std::max(worst, r[i] / ref);
  }
  CHECK(worst < 0.05);
  // three-level norm is conserved (losses are photonic only)
  CHECK(drift_report(tr).max_norm_drift < 1e-8 * 2.0);
}

TEST_CASE("elimination error scales as the inverse detuning") {
  ModelParams p = make_symmetric_params(-20, 30);
  SteadyState ss = solve_steady_state(p, SolverConfig{});
  REQUIRE(ss.converged());
  LambdaCheck lc = lambda_check(ss.coeffs, ss.cavity, p, -200.0, 1.0);
  REQUIRE(lc.rows.size() == 3);
  CHECK(lc.rows[1].detuning_sum == -400.0);
  CHECK(lc.rows[2].detuning_sum == -800.0);
  CHECK(lc.rows[2].observable_error < lc.rows[1].observable_error);
  CHECK(lc.rows[1].observable_error < lc.rows[0].observable_error);
  CHECK(lc.slope == doctest::Approx(-1.0).epsilon(0.2));
  CHECK(lc.rows[2].max_rel_residual < 0.05);
}

TEST_CASE("JSON-lines export") {
  std::mt19937_64 rng(2);
  TrajectoryOptions opt;
  opt.snapshot_every = 50;
  Trajectory tr = propagate_effective(random_state(rng, 6, 2), CavityState{}, make_symmetric_params(-20, 5), 0.5, opt);
  const std::string text = trajectory_jsonl(tr, 4);
  std::istringstream is(text);
  std::string line;
  size_t k = 0;
  while (std::getline(is, line)) {
    const nlohmann::json j = nlohmann::json::parse(line);
    CHECK(j.at("t").get<double>() == doctest::Approx(tr.snaps[k].t));
    CHECK(j.contains("state") == (k % 4 == 0));
    if (j.contains("state")) CHECK(j["state"]["c_dn"].size() == 13);
    ++k;
  }
  CHECK(k == tr.snaps.size());
  CHECK(trajectory_jsonl(tr, 4) == text);
}

TEST_CASE("bad options") {
  TrajectoryOptions opt;
  opt.dt = 0.0;
  CHECK_THROWS_AS(propagate_effective(Coefficients{CVec::Zero(3), CVec::Zero(3)}, {}, make_symmetric_params(-20, 1), 1.0, opt),
                  Error);
  LambdaParams lp;
  lp.det_dn = -lp.det_up;
  CHECK_THROWS_AS(lp.validate(), Error);
}
