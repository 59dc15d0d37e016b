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

#include "rcsoc/observables.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>

namespace rcsoc {

namespace {

constexpr double kNodal = 1e-14;

double wrap(double x) { return std::remainder(x, 2.0 * kPi); }

}  // namespace

SpinTexture spin_texture(const SpinorField& f, const PlaneWaveBasis& b) {
  if (f.psi_dn.size() != b.n_grid || f.psi_up.size() != b.n_grid)
    throw Error(ErrorCode::DimensionMismatch, "field length does not match basis n_grid");
  const int n = b.n_grid;
  SpinTexture t;
  t.s_x.resize(n);
  t.s_y.resize(n);
  t.s_z.resize(n);
  t.phi.resize(n);
  std::vector<double> ang(n, 0.0);
  std::vector<bool> bad(n, false);
  for (int i = 0; i < n; ++i) {
    const cplx w = std::conj(f.psi_up[i]) * f.psi_dn[i];
    t.s_x[i] = 2.0 * w.real();
    t.s_y[i] = 2.0 * w.imag();
    t.s_z[i] = std::norm(f.psi_up[i]) - std::norm(f.psi_dn[i]);
    if (std::abs(w) < kNodal) {
      bad[i] = true;
      t.gaps.push_back(i);
    } else {
      ang[i] = std::arg(w);
    }
  }
  // isolated holes get the circular mean of their neighbours; clusters are an error
  for (int i : t.gaps) {
    const int l = (i + n - 1) % n, r = (i + 1) % n;
    if (bad[l] || bad[r] || t.gaps.size() * 2 >= static_cast<size_t>(n))
      throw Error(ErrorCode::NodalSpin, "transverse spin vanishes on a cluster of grid points");
    ang[i] = ang[l] + 0.5 * wrap(ang[r] - ang[l]);
  }
  t.phi[0] = ang[0];
  for (int i = 1; i < n; ++i) t.phi[i] = t.phi[i - 1] + wrap(ang[i] - ang[i - 1]);
  return t;
}

Winding winding_number(const SpinTexture& tex, const PlaneWaveBasis& b) {
  const int n = static_cast<int>(tex.phi.size());
  if (n != b.n_grid) throw Error(ErrorCode::DimensionMismatch, "texture does not match basis");
  if (n % 2 != 0) throw Error(ErrorCode::InvalidArgument, "n_grid must be even to resolve lambda/2");
  // phi is already unwrapped with wrapped increments, so the cell sum is a difference
  const double acc = tex.phi[n / 2] - tex.phi[0];
  Winding w;
  w.raw = acc / (2.0 * kPi);
  w.value = static_cast<int>(std::lround(w.raw));
  w.residual = std::abs(w.raw - w.value);
  return w;
}

const char* phase_name(Phase ph) {
  switch (ph) {
    case Phase::DW_SW: return "DW-SW";
    case Phase::PW_SS: return "PW-SS";
    case Phase::DW_SS: return "DW-SS";
    case Phase::UNSTABLE: return "UNSTABLE";
    case Phase::UNCONVERGED: return "UNCONVERGED";
  }
  return "?";
}

std::optional<Phase> parse_phase(const std::string& s) {
  for (Phase ph : {Phase::DW_SW, Phase::PW_SS, Phase::DW_SS, Phase::UNSTABLE, Phase::UNCONVERGED})
    if (s == phase_name(ph)) return ph;
  return std::nullopt;
}

PhasePoint order_parameters(const Coefficients& c, const CavityState& cav, double mu,
                            const PlaneWaveBasis& b) {
  const AtomicMoments m = atomic_moments(c);
  PhasePoint pt;
  pt.nw_dn = m.nw_dn;
  pt.nw_up = m.nw_up;
  pt.s_minus = m.s_minus;
  pt.s_plus = std::conj(m.s_minus);
  pt.sw_minus_m = m.sw_minus_m;
  pt.sw_minus_p = m.sw_minus_p;
  pt.sw_plus_p = std::conj(m.sw_minus_m);
  pt.sw_plus_m = std::conj(m.sw_minus_p);
  pt.momenta = c;
  pt.cavity = cav;
  pt.mu = mu;
  try {
    const Winding w = winding_number(spin_texture(inverse_transform(c, b), b), b);
    pt.winding = w.value;
    pt.winding_residual = w.residual;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NodalSpin) throw;
    pt.winding = 0;
    pt.winding_residual = 1.0;  // flags an ill-defined texture
  }
  return pt;
}

Phase classify_phase(const PhasePoint& pt, double tol_dw, StabilityFlag stab) {
  if (pt.diverged) return Phase::UNSTABLE;
  if (!pt.converged) return Phase::UNCONVERGED;
  if (stab.checked && !stab.stable) return Phase::UNSTABLE;
  if (pt.winding == 0) return Phase::DW_SW;
  if (std::abs(pt.nw_dn) + std::abs(pt.nw_up) <= tol_dw) return Phase::PW_SS;
  return Phase::DW_SS;
}

SocDispersion soc_dispersion(const CavityState& cav, const ModelParams& p, const RVec& grid) {
  SocDispersion d;
  d.p = grid;
  d.lower.resize(grid.size());
  d.upper.resize(grid.size());
  d.regime_warning = std::abs(cav.alpha_m) > 1e-6 || std::abs(cav.beta_p) > 1e-6;
  const double ed = p.u0_dn * std::norm(cav.alpha_p) - 0.5 * p.two_photon_detuning;
  const double eu = p.u0_up * std::norm(cav.beta_m) + 0.5 * p.two_photon_detuning;
  const double mean = 0.5 * (ed + eu);
  const cplx w = p.omega_r * std::conj(cav.alpha_p) * cav.beta_m;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double q = grid[i];
    const double a = (q + 1.0) * (q + 1.0) + ed - mean;
    const double dd = (q - 1.0) * (q - 1.0) + eu - mean;
    const double m = 0.5 * (a + dd), h = 0.5 * (a - dd);
    const double r = std::sqrt(h * h + std::norm(w));
    d.lower[i] = m - r;
    d.upper[i] = m + r;
  }
  for (Eigen::Index i = 1; i + 1 < grid.size(); ++i)
    if (d.lower[i] <= d.lower[i - 1] && d.lower[i] < d.lower[i + 1]) d.minima.push_back(grid[i]);
  return d;
}

std::string phase_csv_header() {
  return "eta,delta,label,winding,abs_nw_dn,abs_nw_up,abs_s_plus,abs_sw_mm,abs_sw_mp,abs_alpha_m,"
         "abs_beta_p,mu,residual,seed,converged";
}

std::string phase_csv_row(const PhasePoint& pt) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%.6f,%.6f,%s,%d,%.10e,%.10e,%.10e,%.10e,%.10e,%.10e,%.10e,%.12e,%.3e,%llu,%d", pt.eta,
                pt.delta, phase_name(pt.label), pt.winding, std::abs(pt.nw_dn), std::abs(pt.nw_up),
                std::abs(pt.s_plus), std::abs(pt.sw_minus_m), std::abs(pt.sw_minus_p),
                std::abs(pt.cavity.alpha_m), std::abs(pt.cavity.beta_p), pt.mu, pt.residual,
                static_cast<unsigned long long>(pt.seed), pt.converged ? 1 : 0);
  return buf;
}

}  // namespace rcsoc
