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

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rcsoc/error.hpp"

namespace rcsoc {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

// Units: hbar = k = omega_rec = 1, so m = 1/2 and p^2/2m = j^2 for e^{ijz}.
struct ModelParams {
  double delta_a = -20.0;
  double delta_b = -20.0;
  double eta_p = 0.0;
  double eta_m = 0.0;
  double u0_dn = -1.0;
  double u0_up = -1.0;
  cplx omega_r{-1.0, 0.0};
  double kappa = 1.0;
  double two_photon_detuning = 0.0;

  bool is_symmetric() const;
  void validate() const;  // throws InvalidArgument
};

ModelParams make_symmetric_params(double delta, double eta);

// Momenta j in [-J, J] (units of k) on the domain [0, L), L = lambda = 2 pi.
struct PlaneWaveBasis {
  int J = 12;
  int n_grid = 128;
  double domain_length = 2.0 * kPi;

  int size() const { return 2 * J + 1; }
  int index(int j) const { return j + J; }
  int momentum(int idx) const { return idx - J; }
  double dz() const { return domain_length / n_grid; }
  double z(int i) const { return dz() * i; }
  void validate() const;  // throws InvalidArgument
};

// Grid samples psi(z_i), i = 0..n_grid-1.
struct SpinorField {
  CVec psi_dn;
  CVec psi_up;
};

// psi_tau(z) = sum_j c_{tau,j} e^{ijz} / sqrt(L), so sum |c|^2 = int |psi|^2.
struct Coefficients {
  CVec c_dn;
  CVec c_up;

  CVec stacked() const;
  static Coefficients from_stacked(const CVec& v);
  double norm2() const { return c_dn.squaredNorm() + c_up.squaredNorm(); }
};

struct CavityState {
  cplx alpha_p{0.0, 0.0};
  cplx alpha_m{0.0, 0.0};
  cplx beta_p{0.0, 0.0};
  cplx beta_m{0.0, 0.0};

  Eigen::Vector4cd vec() const { return {alpha_p, alpha_m, beta_p, beta_m}; }
  static CavityState from_vec(const Eigen::Vector4cd& v) { return {v[0], v[1], v[2], v[3]}; }
  bool finite() const;
};

enum class SolveStatus { Converged, NonConvergence, Diverged };
const char* status_name(SolveStatus s);

struct SteadyState {
  PlaneWaveBasis basis;
  Coefficients coeffs;
  CavityState cavity;
  double mu = 0.0;
  double mu_imag = 0.0;
  double residual = 0.0;
  long iterations = 0;
  std::uint64_t seed = 0;
  SolveStatus status = SolveStatus::Converged;
  bool converged() const { return status == SolveStatus::Converged; }
};

Coefficients transform(const SpinorField& field, const PlaneWaveBasis& basis);
SpinorField inverse_transform(const Coefficients& c, const PlaneWaveBasis& basis);

// Grid quadrature of |psi_dn|^2 + |psi_up|^2.
double grid_norm2(const SpinorField& f, const PlaneWaveBasis& basis);
SpinorField normalized(const SpinorField& f, const PlaneWaveBasis& basis);

// Multiplication by e^{imz} projected onto the basis: (S c)_j = c_{j-m}.
CVec shift(const CVec& c, int m);
CMat shift_matrix(int n, int m);

}  // namespace rcsoc
