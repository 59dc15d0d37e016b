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

#include "rcsoc/model.hpp"

#include <cmath>

namespace rcsoc {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::NodalSpin: return "NodalSpin";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::Io: return "Io";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::NonConvergence: return "NonConvergence";
    case SolveStatus::Diverged: return "Diverged";
  }
  return "Unknown";
}

bool ModelParams::is_symmetric() const {
  return delta_a == delta_b && eta_p == eta_m && two_photon_detuning == 0.0 && u0_dn == u0_up &&
         omega_r == cplx(u0_dn, 0.0);
}

void ModelParams::validate() const {
  const double vals[] = {delta_a, delta_b, eta_p, eta_m, u0_dn, u0_up, omega_r.real(),
                         omega_r.imag(), kappa, two_photon_detuning};
  for (double v : vals)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite model parameter");
  if (!(kappa >= 0.0)) throw Error(ErrorCode::InvalidArgument, "kappa must be non-negative");
}

ModelParams make_symmetric_params(double delta, double eta) {
  ModelParams p;
  p.delta_a = p.delta_b = delta;
  p.eta_p = p.eta_m = eta;
  p.u0_dn = p.u0_up = -1.0;
  p.omega_r = cplx(-1.0, 0.0);
  p.kappa = 1.0;
  p.two_photon_detuning = 0.0;
  return p;
}

void PlaneWaveBasis::validate() const {
  if (J < 1) throw Error(ErrorCode::InvalidArgument, "basis cutoff J must be >= 1");
  if (n_grid < 4 * J + 2)
    throw Error(ErrorCode::InvalidArgument, "n_grid must be >= 4J+2 for alias-free products");
  // the cavity couplings e^{+-2iz} are shifts by two basis slots only on L = lambda
  if (std::abs(domain_length - 2.0 * kPi) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "domain length must be one wavelength (2 pi)");
}

CVec Coefficients::stacked() const {
  CVec v(c_dn.size() + c_up.size());
  v << c_dn, c_up;
  return v;
}

Coefficients Coefficients::from_stacked(const CVec& v) {
  const Eigen::Index n = v.size() / 2;
  return {v.head(n), v.tail(n)};
}

bool CavityState::finite() const {
  for (const cplx& a : {alpha_p, alpha_m, beta_p, beta_m})
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) return false;
  return true;
}

namespace {

void check_grid(const SpinorField& f, const PlaneWaveBasis& b) {
  if (f.psi_dn.size() != b.n_grid || f.psi_up.size() != b.n_grid)
    throw Error(ErrorCode::DimensionMismatch, "field length does not match basis n_grid");
}

// Direct DFT; sizes are tiny so no FFT.
CVec forward(const CVec& psi, const PlaneWaveBasis& b) {
  const int n = b.size();
  CVec c = CVec::Zero(n);
  const double w = std::sqrt(b.domain_length) / b.n_grid;
  const double k0 = 2.0 * kPi / b.domain_length;
  for (int a = 0; a < n; ++a) {
    const int j = b.momentum(a);
    cplx acc = 0.0;
    for (int i = 0; i < b.n_grid; ++i) acc += psi[i] * std::polar(1.0, -j * k0 * b.z(i));
    c[a] = acc * w;
  }
  return c;
}

CVec backward(const CVec& c, const PlaneWaveBasis& b) {
  if (c.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "coefficient length does not match basis size");
  CVec psi = CVec::Zero(b.n_grid);
  const double w = 1.0 / std::sqrt(b.domain_length);
  const double k0 = 2.0 * kPi / b.domain_length;
  for (int i = 0; i < b.n_grid; ++i) {
    cplx acc = 0.0;
    for (int a = 0; a < b.size(); ++a) acc += c[a] * std::polar(1.0, b.momentum(a) * k0 * b.z(i));
    psi[i] = acc * w;
  }
  return psi;
}

}  // namespace

Coefficients transform(const SpinorField& field, const PlaneWaveBasis& basis) {
  basis.validate();
  check_grid(field, basis);
  return {forward(field.psi_dn, basis), forward(field.psi_up, basis)};
}

SpinorField inverse_transform(const Coefficients& c, const PlaneWaveBasis& basis) {
  basis.validate();
  return {backward(c.c_dn, basis), backward(c.c_up, basis)};
}

double grid_norm2(const SpinorField& f, const PlaneWaveBasis& basis) {
  check_grid(f, basis);
  return basis.dz() * (f.psi_dn.squaredNorm() + f.psi_up.squaredNorm());
}

SpinorField normalized(const SpinorField& f, const PlaneWaveBasis& basis) {
  const double n2 = grid_norm2(f, basis);
  if (!(n2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "cannot normalize a zero field");
  const double s = 1.0 / std::sqrt(n2);
  return {f.psi_dn * s, f.psi_up * s};
}

CVec shift(const CVec& c, int m) {
  const Eigen::Index n = c.size();
  CVec out = CVec::Zero(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const Eigen::Index b = a - m;
    if (b >= 0 && b < n) out[a] = c[b];
  }
  return out;
}

CMat shift_matrix(int n, int m) {
  CMat S = CMat::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const int b = a - m;
    if (b >= 0 && b < n) S(a, b) = 1.0;
  }
  return S;
}

}  // namespace rcsoc
