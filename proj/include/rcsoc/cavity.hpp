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

#include "rcsoc/model.hpp"

namespace rcsoc {

// Sign convention: the density-wave and spin-wave moments carry e^{+2iz}.
// This is the z -> -z mirror of the usual written form; the physics is identical
// and it makes the spin spiral read psi_dn ~ e^{iz}, psi_up ~ e^{-iz}.
struct AtomicMoments {
  double n_dn = 0.0;
  double n_up = 0.0;
  cplx nw_dn{0.0, 0.0};       // int e^{2iz} |psi_dn|^2
  cplx nw_up{0.0, 0.0};       // int e^{2iz} |psi_up|^2
  cplx s_minus{0.0, 0.0};     // int conj(psi_dn) psi_up
  cplx sw_minus_p{0.0, 0.0};  // int e^{-2iz} conj(psi_dn) psi_up
  cplx sw_minus_m{0.0, 0.0};  // int e^{+2iz} conj(psi_dn) psi_up
};

// Grid quadrature route.
AtomicMoments atomic_moments(const SpinorField& field, const PlaneWaveBasis& basis);
// Same moments from coefficients (exact for band-limited fields).
AtomicMoments atomic_moments(const Coefficients& c);

// Rows/cols ordered (a+, a-, b+, b-). Steady state solves M a = -i eta.
Eigen::Matrix4cd build_cavity_matrix(const AtomicMoments& m, const ModelParams& p);
Eigen::Vector4cd pump_vector(const ModelParams& p);

CavityState cavity_steady_state(const AtomicMoments& m, const ModelParams& p);

struct FieldProfiles {
  RVec u_dn;
  RVec u_up;
  CVec raman;
};

FieldProfiles field_profiles(const CavityState& c, const ModelParams& p, const PlaneWaveBasis& basis);

}  // namespace rcsoc
