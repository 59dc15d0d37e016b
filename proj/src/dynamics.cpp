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

#include "rcsoc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "rcsoc/cavity.hpp"

namespace rcsoc {
namespace {

// Index groups that the Hamiltonian never mixes. Ground components carry
// momentum parity par, the excited component (if any) the opposite parity.
std::vector<std::vector<int>> parity_groups(int J, int blocks) {
  const int n = 2 * J + 1;
  std::vector<std::vector<int>> g(2);
  for (int par = 0; par < 2; ++par) {
    for (int b = 0; b < blocks; ++b) {
      const int want = (b == 2) ? 1 - par : par;
      for (int k = 0; k < n; ++k)
        if (((k - J) % 2 + 2) % 2 == want) g[par].push_back(b * n + k);
    }
  }
  return g;
}

// c <- exp(-i H dt) c, block by block.
CVec unitary_step(const CMat& H, const CVec& c, double dt, const std::vector<std::vector<int>>& groups) {
  CVec out = CVec::Zero(c.size());
  for (const auto& g : groups) {
    const int m = static_cast<int>(g.size());
    CMat h(m, m);
    CVec v(m);
    for (int a = 0; a < m; ++a) {
      v(a) = c(g[a]);
      for (int b = 0; b < m; ++b) h(a, b) = H(g[a], g[b]);
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "eigensolver failed in real-time step");
    CVec w = es.eigenvectors().adjoint() * v;
    for (int a = 0; a < m; ++a) w(a) *= std::exp(cplx(0.0, -es.eigenvalues()(a) * dt));
    w = es.eigenvectors() * w;
    for (int a = 0; a < m; ++a) out(g[a]) = w(a);
  }
  return out;
}

// a' = -i M a + eta exactly over time h (atoms frozen).
Eigen::Vector4cd cavity_affine(const Eigen::Matrix4cd& M, const Eigen::Vector4cd& eta, const Eigen::Vector4cd& a,
                               double h) {
  Eigen::Matrix<cplx, 5, 5> G = Eigen::Matrix<cplx, 5, 5>::Zero();
  G.topLeftCorner<4, 4>() = cplx(0.0, -h) * M;
  G.topRightCorner<4, 1>() = h * eta;
  const Eigen::Matrix<cplx, 5, 5> E = G.exp();
  return E.topLeftCorner<4, 4>() * a + E.topRightCorner<4, 1>();
}

// (e^{lam t} - 1) / lam, finite at lam = 0.
cplx phi1(cplx lam, double t) {
  const cplx x = lam * t;
  if (std::abs(x) < 1e-8) return t * (1.0 + 0.5 * x);
  return (std::exp(x) - 1.0) / lam;
}

void fill_orders(Snapshot& s) {
  const AtomicMoments m = atomic_moments(s.c);
  s.abs_nw_dn = std::abs(m.nw_dn);
  s.abs_nw_up = std::abs(m.nw_up);
  s.abs_s_minus = std::abs(m.s_minus);
  s.abs_sw_m = std::abs(m.sw_minus_m);
  s.abs_sw_p = std::abs(m.sw_minus_p);
}

double pump_energy(const CavityState& a, const ModelParams& p) {
  // i (eta conj(a) - eta a) for the two pumped modes
  return 2.0 * (p.eta_p * a.alpha_p.imag() + p.eta_m * a.beta_m.imag());
}

double photon_energy(const CavityState& a, double da, double db) {
  return -da * (std::norm(a.alpha_p) + std::norm(a.alpha_m)) - db * (std::norm(a.beta_p) + std::norm(a.beta_m));
}

void check_run(double t_final, const TrajectoryOptions& opt) {
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw Error(ErrorCode::InvalidArgument, "t_final must be >= 0");
  if (!(opt.dt > 0.0) || opt.snapshot_every < 1 || opt.max_halvings < 0)
    throw Error(ErrorCode::InvalidArgument, "bad trajectory options");
}

// Generic driver: step(dt) advances, norm() measures. Halves dt when the norm drifts.
template <class State, class Step, class Norm, class Snap>
Trajectory drive(State s, double t_final, const TrajectoryOptions& opt, Step step, Norm norm, Snap snap) {
  Trajectory tr;
  double dt = opt.dt;
  long nsteps = std::max<long>(1, std::lround(std::ceil(t_final / dt - 1e-9)));
  dt = t_final > 0.0 ? t_final / static_cast<double>(nsteps) : dt;
  if (t_final == 0.0) nsteps = 0;
  tr.snaps.push_back(snap(s, 0.0));
  int halvings = 0;
  long k = 0;
  double t = 0.0;
  int sub = 1;  // substeps per nominal step after halvings
  while (k < nsteps) {
    const double n0 = norm(s);
    State trial = s;
    const double h = dt / sub;
    for (int i = 0; i < sub; ++i) trial = step(trial, h);
    const double drift = std::abs(norm(trial) - n0) / dt;
    if (!(drift <= opt.drift_tol) ) {
      if (halvings >= opt.max_halvings) throw Error(ErrorCode::StepTooLarge, "norm drift persists after step halving");
      ++halvings;
      sub *= 2;
      continue;
    }
    s = trial;
    ++k;
    t = k * dt;
    if (k % opt.snapshot_every == 0 || k == nsteps) tr.snaps.push_back(snap(s, t));
  }
  tr.dt_used = (nsteps > 0 ? dt : opt.dt) / sub;
  return tr;
}

}  // namespace

double effective_energy(const Coefficients& c, const CavityState& a, const ModelParams& p) {
  const int n = static_cast<int>(c.c_dn.size());
  const CVec v = c.stacked();
  const CMat H = atomic_hamiltonian_matrix(a, p, n);
  return v.dot(H * v).real() + photon_energy(a, p.delta_a, p.delta_b) + pump_energy(a, p);
}

Trajectory propagate_effective(const Coefficients& c0, const CavityState& a0, const ModelParams& p, double t_final,
                               const TrajectoryOptions& opt) {
  p.validate();
  check_run(t_final, opt);
  const int n = static_cast<int>(c0.c_dn.size());
  if (n % 2 == 0 || c0.c_up.size() != n) throw Error(ErrorCode::DimensionMismatch, "coefficient length mismatch");
  if (!a0.finite()) throw Error(ErrorCode::InvalidArgument, "non-finite cavity state");
  const auto groups = parity_groups((n - 1) / 2, 2);
  const Eigen::Vector4cd eta = pump_vector(p);

  struct S {
    CVec c;
    Eigen::Vector4cd a;
  };
  auto step = [&](const S& s, double h) {
    S o = s;
    const AtomicMoments m = atomic_moments(Coefficients::from_stacked(o.c));
    const Eigen::Matrix4cd M = build_cavity_matrix(m, p);
    o.a = cavity_affine(M, eta, o.a, 0.5 * h);
    const CMat H = atomic_hamiltonian_matrix(CavityState::from_vec(o.a), p, n);
    o.c = unitary_step(H, o.c, h, groups);
    // moments changed, matrix must be rebuilt
    o.a = cavity_affine(build_cavity_matrix(atomic_moments(Coefficients::from_stacked(o.c)), p), eta, o.a, 0.5 * h);
    if (!o.a.allFinite() || !o.c.allFinite()) throw Error(ErrorCode::Diverged, "trajectory became non-finite");
    return o;
  };
  auto norm = [](const S& s) { return s.c.squaredNorm(); };
  auto snap = [&](const S& s, double t) {
    Snapshot sn;
    sn.t = t;
    sn.c = Coefficients::from_stacked(s.c);
    sn.cavity = CavityState::from_vec(s.a);
    sn.norm = s.c.squaredNorm();
    sn.energy = effective_energy(sn.c, sn.cavity, p);
    fill_orders(sn);
    return sn;
  };
  return drive(S{c0.stacked(), a0.vec()}, t_final, opt, step, norm, snap);
}

DriftReport drift_report(const Trajectory& tr) {
  DriftReport r;
  if (tr.snaps.empty()) return r;
  const Snapshot& s0 = tr.snaps.front();
  auto orders = [](const Snapshot& s) {
    return std::array<double, 9>{s.abs_nw_dn, s.abs_nw_up, s.abs_s_minus, s.abs_sw_m, s.abs_sw_p,
                                 std::abs(s.cavity.alpha_p), std::abs(s.cavity.alpha_m), std::abs(s.cavity.beta_p),
                                 std::abs(s.cavity.beta_m)};
  };
  const auto o0 = orders(s0);
  for (const Snapshot& s : tr.snaps) {
    const auto o = orders(s);
    for (std::size_t i = 0; i < o.size(); ++i) r.max_order_drift = std::max(r.max_order_drift, std::abs(o[i] - o0[i]));
    r.max_norm_drift = std::max(r.max_norm_drift, std::abs(s.norm - s0.norm));
    r.max_energy_drift = std::max(r.max_energy_drift, std::abs(s.energy - s0.energy));
  }
  return r;
}

// ---- three-level model ----

ModelParams LambdaParams::effective() const {
  validate();
  ModelParams e = base;
  const double S = detuning_sum();
  e.u0_dn = 2.0 * std::norm(g_dn) / S;
  e.u0_up = 2.0 * std::norm(g_up) / S;
  e.omega_r = 2.0 * std::conj(g_dn) * g_up / S;
  return e;
}

bool LambdaParams::elimination_regime(double ratio) const {
  const double S = std::abs(detuning_sum());
  const double g = std::max(std::abs(g_dn), std::abs(g_up));
  const double scale = std::max({g * g, std::abs(base.delta_a), std::abs(base.delta_b), base.kappa, 1.0});
  return S >= ratio * scale;
}

void LambdaParams::validate() const {
  base.validate();
  const double S = detuning_sum();
  if (!std::isfinite(S) || S == 0.0) throw Error(ErrorCode::InvalidArgument, "detuning sum must be finite and nonzero");
  if (!std::isfinite(std::abs(g_dn)) || !std::isfinite(std::abs(g_up)))
    throw Error(ErrorCode::InvalidArgument, "non-finite coupling");
}

LambdaParams lambda_for(const ModelParams& p, double detuning_sum) {
  p.validate();
  if (detuning_sum == 0.0 || !std::isfinite(detuning_sum))
    throw Error(ErrorCode::InvalidArgument, "detuning sum must be finite and nonzero");
  const double r_dn = p.u0_dn * detuning_sum / 2.0;
  const double r_up = p.u0_up * detuning_sum / 2.0;
  if (r_dn < 0.0 || r_up < 0.0) throw Error(ErrorCode::InvalidArgument, "sign of U0 inconsistent with detuning sum");
  LambdaParams lp;
  lp.base = p;
  lp.det_dn = lp.det_up = 0.5 * detuning_sum;
  lp.g_dn = std::sqrt(r_dn);
  // Omega = 2 conj(G_dn) G_up / S fixes G_up; |G_up|^2 must then match U0_up.
  if (r_dn == 0.0) throw Error(ErrorCode::InvalidArgument, "U0_dn = 0 leaves Raman coupling undetermined");
  lp.g_up = p.omega_r * detuning_sum / (2.0 * lp.g_dn);
  if (std::abs(std::norm(lp.g_up) - r_up) > 1e-9 * std::max(1.0, r_up))
    throw Error(ErrorCode::InvalidArgument, "|Omega|^2 != U0_dn U0_up; no three-level parent");
  return lp;
}

namespace {

CMat lambda_hamiltonian(const CavityState& a, const LambdaParams& lp, int n) {
  const ModelParams& p = lp.base;
  CMat H = CMat::Zero(3 * n, 3 * n);
  const int J = (n - 1) / 2;
  for (int k = 0; k < n; ++k) {
    const double j2 = double(k - J) * double(k - J);
    H(k, k) = j2 - 0.5 * p.two_photon_detuning;
    H(n + k, n + k) = j2 + 0.5 * p.two_photon_detuning;
    H(2 * n + k, 2 * n + k) = j2 - 0.5 * lp.detuning_sum();
  }
  const CMat Sp = shift_matrix(n, 1), Sm = shift_matrix(n, -1);
  const CMat ed = lp.g_dn * (a.alpha_p * Sm + a.alpha_m * Sp);
  const CMat eu = lp.g_up * (a.beta_p * Sm + a.beta_m * Sp);
  H.block(2 * n, 0, n, n) = ed;
  H.block(0, 2 * n, n, n) = ed.adjoint();
  H.block(2 * n, n, n, n) = eu;
  H.block(n, 2 * n, n, n) = eu.adjoint();
  return H;
}

// Cavity sources conj(G) int e^{+-iz} conj(psi_tau) psi_e.
Eigen::Vector4cd lambda_sources(const CVec& v, const LambdaParams& lp, int n) {
  const CVec cd = v.segment(0, n), cu = v.segment(n, n), ce = v.segment(2 * n, n);
  const CVec ep = shift(ce, 1), em = shift(ce, -1);
  return {std::conj(lp.g_dn) * cd.dot(ep), std::conj(lp.g_dn) * cd.dot(em), std::conj(lp.g_up) * cu.dot(ep),
          std::conj(lp.g_up) * cu.dot(em)};
}

}  // namespace

CVec excited_steady_state(const Coefficients& c, const CavityState& a, const LambdaParams& lp) {
  lp.validate();
  const double S = lp.detuning_sum();
  CVec e = lp.g_dn * (a.alpha_p * shift(c.c_dn, -1) + a.alpha_m * shift(c.c_dn, 1)) +
           lp.g_up * (a.beta_p * shift(c.c_up, -1) + a.beta_m * shift(c.c_up, 1));
  return (2.0 / S) * e;
}

Trajectory propagate_lambda(const LambdaState& s0, const LambdaParams& lp, double t_final,
                            const TrajectoryOptions& opt) {
  lp.validate();
  check_run(t_final, opt);
  const int n = static_cast<int>(s0.c.c_dn.size());
  if (n % 2 == 0 || s0.c.c_up.size() != n || s0.c_e.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "coefficient length mismatch");
  const auto groups = parity_groups((n - 1) / 2, 3);
  const ModelParams& p = lp.base;
  const Eigen::Vector4cd eta = pump_vector(p);
  const Eigen::Vector4cd det(p.delta_a, p.delta_a, p.delta_b, p.delta_b);

  struct S {
    CVec v;
    Eigen::Vector4cd a;
  };
  auto cav = [&](const S& s, double h) {
    const Eigen::Vector4cd src = lambda_sources(s.v, lp, n);
    Eigen::Vector4cd out;
    for (int r = 0; r < 4; ++r) {
      const cplx lam(-p.kappa, det(r).real());
      const cplx f = cplx(0.0, -1.0) * src(r) + eta(r);
      out(r) = std::exp(lam * h) * s.a(r) + f * phi1(lam, h);
    }
    return out;
  };
  auto step = [&](const S& s, double h) {
    S o = s;
    o.a = cav(o, 0.5 * h);
    o.v = unitary_step(lambda_hamiltonian(CavityState::from_vec(o.a), lp, n), o.v, h, groups);
    o.a = cav(o, 0.5 * h);
    if (!o.a.allFinite() || !o.v.allFinite()) throw Error(ErrorCode::Diverged, "trajectory became non-finite");
    return o;
  };
  auto norm = [](const S& s) { return s.v.squaredNorm(); };
  auto snap = [&](const S& s, double t) {
    Snapshot sn;
    sn.t = t;
    sn.c.c_dn = s.v.segment(0, n);
    sn.c.c_up = s.v.segment(n, n);
    sn.c_e = s.v.segment(2 * n, n);
    sn.cavity = CavityState::from_vec(s.a);
    sn.norm = s.v.squaredNorm();
    sn.energy = s.v.dot(lambda_hamiltonian(sn.cavity, lp, n) * s.v).real() +
                photon_energy(sn.cavity, p.delta_a, p.delta_b) + pump_energy(sn.cavity, p);
    fill_orders(sn);
    return sn;
  };
  CVec v(3 * n);
  v << s0.c.c_dn, s0.c.c_up, s0.c_e;
  return drive(S{v, s0.a.vec()}, t_final, opt, step, norm, snap);
}

std::vector<double> adiabatic_residual(const Trajectory& tr, const LambdaParams& lp) {
  std::vector<double> r;
  r.reserve(tr.snaps.size());
  for (const Snapshot& s : tr.snaps) {
    if (s.c_e.size() == 0) throw Error(ErrorCode::InvalidArgument, "trajectory carries no excited component");
    r.push_back((s.c_e - excited_steady_state(s.c, s.cavity, lp)).norm());
  }
  return r;
}

LambdaCheck lambda_check(const Coefficients& c, const CavityState& a, const ModelParams& p, double detuning_sum,
                         double t_final, const TrajectoryOptions& opt) {
  const double s0 = std::copysign(std::abs(detuning_sum), p.u0_dn != 0.0 ? p.u0_dn : 1.0);
  const Trajectory te = propagate_effective(c, a, p, t_final, opt);
  auto moduli = [](const Snapshot& s) {
    return std::array<double, 9>{s.abs_nw_dn, s.abs_nw_up, s.abs_s_minus, s.abs_sw_m, s.abs_sw_p,
                                 std::abs(s.cavity.alpha_p), std::abs(s.cavity.alpha_m), std::abs(s.cavity.beta_p),
                                 std::abs(s.cavity.beta_m)};
  };
  LambdaCheck out;
  for (int k = 0; k < 3; ++k) {
    const double S = s0 * double(1 << k);
    const LambdaParams lp = lambda_for(p, S);
    TrajectoryOptions ol = opt;
    // resolve the fast excited-state phase; keep snapshot times aligned with the effective run
    const long sub = std::max(1L, std::lround(std::ceil(opt.dt * std::abs(S) / 0.2)));
    ol.dt = opt.dt / double(sub);
    ol.snapshot_every = static_cast<int>(opt.snapshot_every * sub);
    const Trajectory tl = propagate_lambda(LambdaState{c, excited_steady_state(c, a, lp), a}, lp, t_final, ol);
    LambdaCheckRow row;
    row.detuning_sum = S;
    const std::vector<double> r = adiabatic_residual(tl, lp);
    for (std::size_t i = 0; i < tl.snaps.size(); ++i) {
      const double ref = excited_steady_state(tl.snaps[i].c, tl.snaps[i].cavity, lp).norm();
      if (ref > 0.0) row.max_rel_residual = std::max(row.max_rel_residual, r[i] / ref);
    }
    const std::size_t n = std::min(te.snaps.size(), tl.snaps.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = moduli(te.snaps[i]), y = moduli(tl.snaps[i]);
      for (std::size_t q = 0; q < x.size(); ++q)
        row.observable_error = std::max(row.observable_error, std::abs(x[q] - y[q]));
    }
    out.rows.push_back(row);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : out.rows) {
    const double x = std::log(std::abs(r.detuning_sum)), y = std::log(std::max(r.observable_error, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = double(out.rows.size());
  out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

namespace {
void put_c(std::ostringstream& os, cplx z) {
  char b[64];
  std::snprintf(b, sizeof b, "[%.17g,%.17g]", z.real(), z.imag());
  os << b;
}
void put_vec(std::ostringstream& os, const CVec& v) {
  os << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    put_c(os, v(i));
  }
  os << ']';
}
}  // namespace

std::string trajectory_jsonl(const Trajectory& tr, int full_every) {
  std::ostringstream os;
  char b[512];
  for (std::size_t i = 0; i < tr.snaps.size(); ++i) {
    const Snapshot& s = tr.snaps[i];
    std::snprintf(b, sizeof b,
                  "{\"t\":%.10g,\"norm\":%.17g,\"energy\":%.17g,\"abs_nw_dn\":%.17g,\"abs_nw_up\":%.17g,"
                  "\"abs_s_minus\":%.17g,\"abs_sw_m\":%.17g,\"abs_sw_p\":%.17g,\"abs_alpha_p\":%.17g,"
                  "\"abs_alpha_m\":%.17g,\"abs_beta_p\":%.17g,\"abs_beta_m\":%.17g",
                  s.t, s.norm, s.energy, s.abs_nw_dn, s.abs_nw_up, s.abs_s_minus, s.abs_sw_m, s.abs_sw_p,
                  std::abs(s.cavity.alpha_p), std::abs(s.cavity.alpha_m), std::abs(s.cavity.beta_p),
                  std::abs(s.cavity.beta_m));
    os << b;
    if (full_every > 0 && i % static_cast<std::size_t>(full_every) == 0) {
      os << ",\"state\":{\"c_dn\":";
      put_vec(os, s.c.c_dn);
      os << ",\"c_up\":";
      put_vec(os, s.c.c_up);
      if (s.c_e.size()) {
        os << ",\"c_e\":";
        put_vec(os, s.c_e);
      }
      os << ",\"alpha_p\":";
      put_c(os, s.cavity.alpha_p);
      os << ",\"alpha_m\":";
      put_c(os, s.cavity.alpha_m);
      os << ",\"beta_p\":";
      put_c(os, s.cavity.beta_p);
      os << ",\"beta_m\":";
      put_c(os, s.cavity.beta_m);
      os << '}';
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace rcsoc
