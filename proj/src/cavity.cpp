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

#include "rcsoc/cavity.hpp"

#include <cmath>

#include <Eigen/LU>

namespace rcsoc {

AtomicMoments atomic_moments(const SpinorField& f, const PlaneWaveBasis& b) {
  if (f.psi_dn.size() != b.n_grid || f.psi_up.size() != b.n_grid)
    throw Error(ErrorCode::DimensionMismatch, "field length does not match basis n_grid");
  AtomicMoments m;
  const double dz = b.dz();
  for (int i = 0; i < b.n_grid; ++i) {
    const cplx e2 = std::polar(1.0, 2.0 * b.z(i));
    const cplx d = f.psi_dn[i], u = f.psi_up[i];
    const double rd = std::norm(d), ru = std::norm(u);
    const cplx du = std::conj(d) * u;
    m.n_dn += rd;
    m.n_up += ru;
    m.nw_dn += e2 * rd;
    m.nw_up += e2 * ru;
    m.s_minus += du;
    m.sw_minus_m += e2 * du;
    m.sw_minus_p += std::conj(e2) * du;
  }
  m.n_dn *= dz;
  m.n_up *= dz;
  m.nw_dn *= dz;
  m.nw_up *= dz;
  m.s_minus *= dz;
  m.sw_minus_m *= dz;
  m.sw_minus_p *= dz;
  return m;
}

AtomicMoments atomic_moments(const Coefficients& c) {
  if (c.c_dn.size() != c.c_up.size())
    throw Error(ErrorCode::DimensionMismatch, "spin components differ in length");
  AtomicMoments m;
  m.n_dn = c.c_dn.squaredNorm();
  m.n_up = c.c_up.squaredNorm();
  m.nw_dn = c.c_dn.dot(shift(c.c_dn, 2));  // Eigen dot conjugates the left operand
  m.nw_up = c.c_up.dot(shift(c.c_up, 2));
  m.s_minus = c.c_dn.dot(c.c_up);
  m.sw_minus_m = c.c_dn.dot(shift(c.c_up, 2));
  m.sw_minus_p = c.c_dn.dot(shift(c.c_up, -2));
  return m;
}

Eigen::Matrix4cd build_cavity_matrix(const AtomicMoments& m, const ModelParams& p) {
  const cplx I(0.0, 1.0);
  const cplx om = p.omega_r;
  Eigen::Matrix4cd M;
  const cplx da = -(p.delta_a + I * p.kappa) + p.u0_dn * m.n_dn;
  const cplx db = -(p.delta_b + I * p.kappa) + p.u0_up * m.n_up;
  const cplx m12 = p.u0_dn * m.nw_dn;
  const cplx m13 = om * m.s_minus;
  const cplx m14 = om * m.sw_minus_m;
  const cplx m23 = om * m.sw_minus_p;
  const cplx m24 = om * m.s_minus;
  const cplx m34 = p.u0_up * m.nw_up;
  M << da, m12, m13, m14,
       std::conj(m12), da, m23, m24,
       std::conj(m13), std::conj(m23), db, m34,
       std::conj(m14), std::conj(m24), std::conj(m34), db;
  return M;
}

Eigen::Vector4cd pump_vector(const ModelParams& p) {
  return {cplx(p.eta_p, 0.0), 0.0, 0.0, cplx(p.eta_m, 0.0)};
}

CavityState cavity_steady_state(const AtomicMoments& m, const ModelParams& p) {
  const Eigen::Matrix4cd M = build_cavity_matrix(m, p);
  Eigen::FullPivLU<Eigen::Matrix4cd> lu(M);
  if (lu.rank() < 4 || !M.allFinite())
    throw Error(ErrorCode::SingularMatrix, "cavity matrix is singular");
  const Eigen::Vector4cd rhs = cplx(0.0, -1.0) * pump_vector(p);
  return CavityState::from_vec(lu.solve(rhs));
}

FieldProfiles field_profiles(const CavityState& c, const ModelParams& p, const PlaneWaveBasis& b) {
  FieldProfiles f;
  f.u_dn.resize(b.n_grid);
  f.u_up.resize(b.n_grid);
  f.raman.resize(b.n_grid);
  const cplx ap = c.alpha_p, am = c.alpha_m, bp = c.beta_p, bm = c.beta_m;
  const double ad = std::norm(ap) + std::norm(am);
  const double bu = std::norm(bp) + std::norm(bm);
  const cplx xa = std::conj(ap) * am, xb = std::conj(bp) * bm;
  for (int i = 0; i < b.n_grid; ++i) {
    const cplx e2 = std::polar(1.0, 2.0 * b.z(i));
    f.u_dn[i] = p.u0_dn * (ad + 2.0 * (e2 * xa).real());
    f.u_up[i] = p.u0_up * (bu + 2.0 * (e2 * xb).real());
    f.raman[i] = p.omega_r * (std::conj(ap) * bp + std::conj(am) * bm + e2 * std::conj(ap) * bm +
                              std::conj(e2) * std::conj(am) * bp);
  }
  return f;
}

}  // namespace rcsoc
