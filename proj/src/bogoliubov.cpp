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

#include "rcsoc/bogoliubov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace rcsoc {

LinearFlow linearize(const SteadyState& ss, const ModelParams& p) {
  const int n = static_cast<int>(ss.coeffs.c_dn.size());
  const int D = 2 * n + 4, m = 2 * n;
  const cplx I(0.0, 1.0);
  const CVec c = ss.coeffs.stacked();
  const Eigen::Vector4cd a = ss.cavity.vec();
  const Generators T = coupling_generators(p, n);

  LinearFlow f;
  f.A = CMat::Zero(D, D);
  f.B = CMat::Zero(D, D);
  const CMat H = atomic_hamiltonian_matrix(ss.cavity, p, n);
  f.A.topLeftCorner(m, m) = -I * (H - ss.mu * CMat::Identity(m, m));
  f.A.bottomRightCorner(4, 4) = -I * build_cavity_matrix(atomic_moments(ss.coeffs), p);
  for (int r = 0; r < 4; ++r) {
    CVec ar = CVec::Zero(m);  // sum_s a_s T_rs c
    CVec br = CVec::Zero(m);  // sum_q conj(a_q) T_qr c
    Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(m);  // sum_s a_s c^dag T_rs
    for (int s = 0; s < 4; ++s) {
      const CVec Tc = T[r][s] * c;
      ar += a[s] * Tc;
      br += std::conj(a[s]) * (T[s][r] * c);
      row += a[s] * (c.adjoint() * T[r][s]);
    }
    f.A.col(m + r).head(m) = -I * br;   // d F_c / d a_r
    f.B.col(m + r).head(m) = -I * ar;   // d F_c / d conj(a_r)
    f.A.row(m + r).head(m) = -I * row;  // d F_a_r / d c
    f.B.row(m + r).head(m) = -I * ar.transpose();  // d F_a_r / d conj(c)
  }
  return f;
}

CMat build_bogoliubov_matrix(const SteadyState& ss, const ModelParams& p) {
  if (!ss.converged()) throw Error(ErrorCode::NotConverged, "Bogoliubov analysis needs a converged state");
  const LinearFlow f = linearize(ss, p);
  const Eigen::Index D = f.A.rows();
  const cplx I(0.0, 1.0);
  CMat M(2 * D, 2 * D);
  M.topLeftCorner(D, D) = I * f.A;
  M.topRightCorner(D, D) = I * f.B;
  M.bottomLeftCorner(D, D) = I * f.B.conjugate();
  M.bottomRightCorner(D, D) = I * f.A.conjugate();
  return M;
}

CVec screw_generator(const SteadyState& ss) {
  const int n = static_cast<int>(ss.coeffs.c_dn.size());
  const int J = (n - 1) / 2;
  const cplx I(0.0, 1.0);
  CVec g = CVec::Zero(2 * n + 4);
  for (int a = 0; a < n; ++a) {
    const double j = a - J;
    g[a] = I * (1.0 - j) * ss.coeffs.c_dn[a];
    g[n + a] = -I * (1.0 + j) * ss.coeffs.c_up[a];
  }
  g[2 * n + 1] = -2.0 * I * ss.cavity.alpha_m;
  g[2 * n + 2] = 2.0 * I * ss.cavity.beta_p;
  return g;
}

namespace {

double round6(double x) { return std::round(x * 1e6) / 1e6; }

}  // namespace

ExcitationSpectrum excitation_spectrum(const CMat& mb, const SteadyState* ref, SpectrumOptions opt) {
  if (mb.rows() != mb.cols() || mb.rows() % 2 != 0)
    throw Error(ErrorCode::DimensionMismatch, "Bogoliubov matrix must be square with even size");
  Eigen::ComplexEigenSolver<CMat> es(mb, true);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::EigenFailure,
                "non-Hermitian eigensolve failed for matrix of size " + std::to_string(mb.rows()));
  }
  const int D = static_cast<int>(mb.rows() / 2);
  const int n = (D - 4) / 2;
  const int J = (n - 1) / 2;

  // global phase direction, split over the two halves
  CVec g1 = CVec::Zero(2 * D), g2 = CVec::Zero(2 * D);
  if (ref && ref->coeffs.c_dn.size() == n) {
    const CVec c = ref->coeffs.stacked();
    g1.head(2 * n) = cplx(0.0, 1.0) * c;
    g2.segment(D, 2 * n) = cplx(0.0, -1.0) * c.conjugate();
    g1.normalize();
    g2.normalize();
  }

  ExcitationSpectrum s;
  const Eigen::Index N = mb.rows();
  std::vector<Mode> all(N);
  for (Eigen::Index k = 0; k < N; ++k) {
    Mode& md = all[k];
    md.omega = es.eigenvalues()[k];
    md.vec = es.eigenvectors().col(k);
    md.vec.normalize();
    s.all.push_back(md.omega);
    double we = 0.0, wo = 0.0, wp = 0.0;
    for (int h = 0; h < 2; ++h) {
      for (int a = 0; a < 2 * n; ++a) {
        const int j = (a % n) - J;
        const double w = std::norm(md.vec[h * D + a]);
        (j % 2 == 0 ? we : wo) += w;
      }
      for (int r = 0; r < 4; ++r) wp += std::norm(md.vec[h * D + 2 * n + r]);
    }
    md.sector = we >= wo ? 0 : 1;
    md.photon_weight = wp;
    if (ref) md.gauge_overlap = std::sqrt(std::norm(g1.dot(md.vec)) + std::norm(g2.dot(md.vec)));
    md.zero = std::abs(md.omega) < opt.zero_tol;
    if (md.zero) ++s.zero_count;
  }

  // the gauge symmetry accounts for two near-zero eigenvalues; anything beyond is Goldstone
  std::vector<int> zeros;
  for (Eigen::Index k = 0; k < N; ++k)
    if (all[k].zero) zeros.push_back(static_cast<int>(k));
  std::stable_sort(zeros.begin(), zeros.end(),
                   [&](int x, int y) { return all[x].gauge_overlap > all[y].gauge_overlap; });
  for (size_t z = 0; z < zeros.size(); ++z) {
    if (z < 2) all[zeros[z]].gauge = true;
    else all[zeros[z]].goldstone = true;
  }
  s.has_goldstone = s.zero_count > 2;

  for (Eigen::Index k = 0; k < N; ++k)
    if (all[k].omega.real() >= -opt.half_tol) s.modes.push_back(all[k]);
  std::stable_sort(s.modes.begin(), s.modes.end(), [](const Mode& x, const Mode& y) {
    const double rx = round6(x.omega.real()), ry = round6(y.omega.real());
    if (rx != ry) return rx < ry;
    return x.omega.imag() < y.omega.imag();
  });
  return s;
}

std::vector<Mode> lowest_branches(const ExcitationSpectrum& s, int k) {
  std::vector<Mode> out;
  for (const Mode& m : s.modes) {
    if (m.gauge) continue;
    out.push_back(m);
    if (static_cast<int>(out.size()) >= k) break;
  }
  return out;
}

StabilityResult stability_check(const ExcitationSpectrum& s, double tol_im) {
  StabilityResult r;
  r.max_im = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < s.all.size(); ++k)
    if (s.all[k].imag() > r.max_im) {
      r.max_im = s.all[k].imag();
      r.mode_index = static_cast<int>(k);
    }
  r.stable = !(r.max_im > tol_im);
  return r;
}

std::string spectrum_csv_header() {
  return "eta,delta,branch_index,re_omega,im_omega,even_odd_sector,goldstone_flag";
}

std::string spectrum_csv_row(double eta, double delta, int branch, const Mode& m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.6f,%.6f,%d,%.10e,%.10e,%s,%d", eta, delta, branch, m.omega.real(),
                m.omega.imag(), m.sector == 0 ? "even" : "odd", m.goldstone ? 1 : 0);
  return buf;
}

}  // namespace rcsoc
