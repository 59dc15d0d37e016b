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

#include <string>
#include <vector>

#include "rcsoc/meanfield.hpp"

namespace rcsoc {

struct TrajectoryOptions {
  double dt = 1e-3;
  int snapshot_every = 100;   // steps between snapshots
  double drift_tol = 1e-8;    // allowed norm drift per unit time
  int max_halvings = 6;
};

struct Snapshot {
  double t = 0.0;
  double norm = 0.0;          // ground manifold (effective) or all three levels (Lambda)
  double energy = 0.0;
  double abs_nw_dn = 0.0, abs_nw_up = 0.0, abs_s_minus = 0.0, abs_sw_m = 0.0, abs_sw_p = 0.0;
  CavityState cavity;
  Coefficients c;
  CVec c_e;                   // excited component (Lambda model only)
};

struct Trajectory {
  std::vector<Snapshot> snaps;
  double dt_used = 0.0;
};

// Strang splitting: exact affine cavity half steps around an exact unitary atomic step.
Trajectory propagate_effective(const Coefficients& c0, const CavityState& a0, const ModelParams& p,
                               double t_final, const TrajectoryOptions& opt = {});

// Total mean-field energy (conserved for kappa = 0).
double effective_energy(const Coefficients& c, const CavityState& a, const ModelParams& p);

struct DriftReport {
  double max_order_drift = 0.0;  // |N|, |S|, |S^(+-)|, cavity moduli
  double max_norm_drift = 0.0;
  double max_energy_drift = 0.0;
};
DriftReport drift_report(const Trajectory& tr);

// ---- three-level model ----

struct LambdaParams {
  cplx g_dn{1.0, 0.0};
  cplx g_up{1.0, 0.0};
  double det_dn = 100.0;
  double det_up = 100.0;
  ModelParams base;  // cavity detunings, pumps, kappa, two-photon detuning (u0, omega_r ignored)

  double detuning_sum() const { return det_dn + det_up; }
  ModelParams effective() const;                 // U0 = 2|G|^2/S, Omega = 2 conj(G_dn) G_up / S
  bool elimination_regime(double ratio = 10.0) const;
  void validate() const;
};

// LambdaParams reproducing given (u0, omega_r) at detuning sum S; requires consistent signs.
LambdaParams lambda_for(const ModelParams& p, double detuning_sum);

struct LambdaState {
  Coefficients c;
  CVec c_e;
  CavityState a;
};

// psi_e^ss = (2/S) [G_dn (e^{-iz} a+ + e^{iz} a-) psi_dn + G_up (e^{-iz} b+ + e^{iz} b-) psi_up].
CVec excited_steady_state(const Coefficients& c, const CavityState& a, const LambdaParams& lp);

Trajectory propagate_lambda(const LambdaState& s0, const LambdaParams& lp, double t_final,
                            const TrajectoryOptions& opt = {});

// ||psi_e - psi_e^ss|| per snapshot.
std::vector<double> adiabatic_residual(const Trajectory& tr, const LambdaParams& lp);

// Effective vs three-level run from the same ground state at detuning sums S, 2S, 4S
// (sign taken from U0). psi_e starts on its adiabatic value.
struct LambdaCheckRow {
  double detuning_sum = 0.0;
  double max_rel_residual = 0.0;  // ||psi_e - psi_e^ss|| / ||psi_e^ss||
  double observable_error = 0.0;  // max over snapshots of order-parameter and cavity moduli
};
struct LambdaCheck {
  std::vector<LambdaCheckRow> rows;
  double slope = 0.0;  // least-squares log(error) vs log|S|
};
LambdaCheck lambda_check(const Coefficients& c, const CavityState& a, const ModelParams& p, double detuning_sum,
                         double t_final, const TrajectoryOptions& opt = {});

// One JSON object per snapshot; the full state rides along every full_every-th line (0: never).
std::string trajectory_jsonl(const Trajectory& tr, int full_every = 0);

}  // namespace rcsoc
