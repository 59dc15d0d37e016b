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

// Fluctuation vector f = [U; V], each half ordered (dpsi_dn, dpsi_up, da+, da-, db+, db-)
// in the plane-wave basis; delta X = U e^{-i w t} + conj(V) e^{i conj(w) t}.
struct FluctuationLayout {
  int n = 0;  // 2J+1
  int half() const { return 2 * n + 4; }
  int dim() const { return 2 * half(); }
};

// Linear flow d(dX)/dt = A dX + B conj(dX) around a steady state (rotating at mu).
struct LinearFlow {
  CMat A;
  CMat B;
};
LinearFlow linearize(const SteadyState& ss, const ModelParams& p);

// M_B = i [[A, B], [conj(B), conj(A)]]; throws NotConverged for unconverged states.
CMat build_bogoliubov_matrix(const SteadyState& ss, const ModelParams& p);

struct Mode {
  cplx omega;
  CVec vec;
  int sector = 0;          // 0: even momenta dominate the atomic part, 1: odd
  double photon_weight = 0.0;
  double gauge_overlap = 0.0;
  bool zero = false;       // |omega| below the zero tolerance
  bool gauge = false;
  bool goldstone = false;
};

struct ExcitationSpectrum {
  std::vector<cplx> all;   // every eigenvalue, in solver order
  std::vector<Mode> modes; // Re(omega) >= -tol half, sorted by (round(Re, 6), Im)
  int zero_count = 0;      // near-zero eigenvalues over the full spectrum
  bool has_goldstone = false;
};

struct SpectrumOptions {
  double zero_tol = 1e-3;
  double half_tol = 1e-6;
};

// gauge_ref: steady state used to tag the global phase direction (optional).
ExcitationSpectrum excitation_spectrum(const CMat& mb, const SteadyState* gauge_ref = nullptr,
                                       SpectrumOptions opt = {});

// Branches for plotting: gauge modes removed, lowest k by the spectrum ordering.
std::vector<Mode> lowest_branches(const ExcitationSpectrum& s, int k);

struct StabilityResult {
  bool stable = true;
  double max_im = 0.0;
  int mode_index = -1;  // index into ExcitationSpectrum::all
};

StabilityResult stability_check(const ExcitationSpectrum& s, double tol_im);

// Screw generator at a state, in the first half-layout (U part); V = conj(U).
CVec screw_generator(const SteadyState& ss);

std::string spectrum_csv_header();
std::string spectrum_csv_row(double eta, double delta, int branch, const Mode& m);

}  // namespace rcsoc
