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

#include <optional>
#include <string>
#include <vector>

#include "rcsoc/cavity.hpp"

namespace rcsoc {

struct SpinTexture {
  RVec s_x, s_y, s_z;
  RVec phi;               // unwrapped arg(conj(psi_up) psi_dn)
  std::vector<int> gaps;  // grid indices where the transverse spin vanished
};

// s_x + i s_y = 2 conj(psi_up) psi_dn, s_z = |psi_up|^2 - |psi_dn|^2.
SpinTexture spin_texture(const SpinorField& field, const PlaneWaveBasis& basis);

struct Winding {
  int value = 0;
  double raw = 0.0;       // accumulated angle / 2 pi before rounding
  double residual = 0.0;  // |raw - value|
};

// Wrapped increments over the cell [0, lambda/2).
Winding winding_number(const SpinTexture& tex, const PlaneWaveBasis& basis);

enum class Phase { DW_SW, PW_SS, DW_SS, UNSTABLE, UNCONVERGED };
const char* phase_name(Phase ph);
std::optional<Phase> parse_phase(const std::string& s);

struct PhasePoint {
  double eta = 0.0;
  double delta = 0.0;
  cplx nw_dn, nw_up;
  cplx s_minus, s_plus;
  cplx sw_minus_m, sw_minus_p, sw_plus_p, sw_plus_m;
  int winding = 0;
  double winding_residual = 0.0;
  Coefficients momenta;
  CavityState cavity;
  double mu = 0.0;
  double residual = 0.0;
  std::uint64_t seed = 0;
  bool converged = true;
  bool diverged = false;
  Phase label = Phase::UNCONVERGED;
  std::optional<double> stability_margin;  // max Im(omega) if a spectrum was computed
};

PhasePoint order_parameters(const Coefficients& c, const CavityState& cav, double mu,
                            const PlaneWaveBasis& basis);

struct StabilityFlag {
  bool checked = false;
  bool stable = true;
};

Phase classify_phase(const PhasePoint& pt, double tol_dw, StabilityFlag stab = {});

struct SocDispersion {
  RVec p;
  RVec lower, upper;
  std::vector<double> minima;  // local minima of the lower branch
  bool regime_warning = false; // unpumped modes not negligible
};

// Two-level Hamiltonian in the frame psi_dn = e^{iz} phi_dn, psi_up = e^{-iz} phi_up.
SocDispersion soc_dispersion(const CavityState& cav, const ModelParams& p, const RVec& grid);

// PhasePoint CSV (fixed column order).
std::string phase_csv_header();
std::string phase_csv_row(const PhasePoint& pt);

}  // namespace rcsoc
