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

#include <array>
#include <cstdint>
#include <optional>

#include "rcsoc/cavity.hpp"

namespace rcsoc {

struct SolverConfig {
  double dt_imag = 5e-3;
  int inner_steps = 20;      // K imaginary-time steps per field update
  double tol_psi = 1e-9;
  double tol_field = 1e-9;
  long max_iters = 200000;   // budget in imaginary-time steps, per seed
  int n_seeds = 4;           // random seeds; one even and one odd biased seed are added
  std::uint64_t seed0 = 20190501;
  double mixing = 0.5;
  bool newton_polish = true;
  int J = 12;
  int n_grid = 128;

  PlaneWaveBasis basis() const { return PlaneWaveBasis{J, n_grid, 2.0 * kPi}; }
  void validate() const;
};

// ---- grid-level operations ----

// H psi with kinetic j^2 in momentum space and potentials pointwise; the result is exact
// on the grid (band limit J+2 fits below Nyquist).
SpinorField apply_atomic_hamiltonian(const SpinorField& field, const FieldProfiles& prof,
                                     const ModelParams& p, const PlaneWaveBasis& basis);

// Strang split step: half pointwise 2x2 exponential, full kinetic, half pointwise. Renormalizes.
SpinorField imaginary_time_step(const SpinorField& field, const FieldProfiles& prof,
                                const ModelParams& p, const PlaneWaveBasis& basis, double dt);

// Re <psi|H|psi>; the imaginary part goes to *imag if given.
double chemical_potential(const SpinorField& field, const FieldProfiles& prof, const ModelParams& p,
                          const PlaneWaveBasis& basis, double* imag = nullptr);

// ---- coefficient-space (Galerkin) operators ----

// H[a] = K + sum_{r,s} conj(a_r) a_s T_rs, with T_rs^dagger = T_sr.
// Stacked ordering (c_dn, c_up), each of length n = 2J+1.
using Generators = std::array<std::array<CMat, 4>, 4>;
Generators coupling_generators(const ModelParams& p, int n);
CMat kinetic_matrix(const ModelParams& p, int n);
CMat atomic_hamiltonian_matrix(const CavityState& a, const ModelParams& p, int n);

// Deterministic per-point seed (splitmix64 chain).
std::uint64_t point_seed(std::uint64_t seed0, long i_eta, long i_delta, long seed_idx);

// Band-limited random start; bias = 0 none, 1 even (j = 0), 2 odd (spiral j = +-1).
Coefficients seed_state(std::uint64_t seed, int J, int bias);

struct SolveContext {
  long i_eta = 0;
  long i_delta = 0;
  const SteadyState* warm = nullptr;  // nearest solved neighbour, if any
};

// Single run from a given start. a0 overrides the initial fields.
SteadyState solve_from(const ModelParams& p, const SolverConfig& cfg, const Coefficients& c0,
                       const std::optional<CavityState>& a0, std::uint64_t seed);

// Multi-seed search; returns the converged candidate with the lowest energy.
SteadyState solve_steady_state(const ModelParams& p, const SolverConfig& cfg,
                               const SolveContext& ctx = {});

// E[psi] = <psi|H[a_ss(psi)]|psi>.
double energy_functional(const Coefficients& c, const ModelParams& p);

// Stationarity ||H c - mu c|| and self-consistency ||a_ss(c) - a||.
struct Residuals {
  double stationarity = 0.0;
  double field = 0.0;
};
Residuals steady_residuals(const SteadyState& ss, const ModelParams& p);

}  // namespace rcsoc
