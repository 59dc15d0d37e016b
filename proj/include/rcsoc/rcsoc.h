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

#ifndef RCSOC_RCSOC_H
#define RCSOC_RCSOC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RCSOC_BUILDING_LIBRARY)
#    define RCSOC_API __declspec(dllexport)
#  else
#    define RCSOC_API __declspec(dllimport)
#  endif
#else
#  define RCSOC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

// Return codes. Every function returning int uses these.
enum {
  RCSOC_OK = 0,
  RCSOC_INVALID_ARGUMENT = 1,
  RCSOC_DIMENSION_MISMATCH = 2,
  RCSOC_SINGULAR_MATRIX = 3,
  RCSOC_NON_CONVERGENCE = 4,
  RCSOC_DIVERGED = 5,
  RCSOC_NOT_CONVERGED = 6,
  RCSOC_NODAL_SPIN = 7,
  RCSOC_STEP_TOO_LARGE = 8,
  RCSOC_SPEC_MISMATCH = 9,
  RCSOC_IO = 10,
  RCSOC_EIGEN_FAILURE = 11,
  RCSOC_INTERNAL = 99
};

enum { RCSOC_DW_SW = 0, RCSOC_PW_SS = 1, RCSOC_DW_SS = 2, RCSOC_UNSTABLE = 3, RCSOC_UNCONVERGED = 4 };

typedef struct rcsoc_state rcsoc_state;
typedef struct rcsoc_spectrum rcsoc_spectrum;
typedef struct rcsoc_trajectory rcsoc_trajectory;

RCSOC_API const char* rcsoc_version(void);
// Message of the last failure on this thread ("" if none).
RCSOC_API const char* rcsoc_last_error(void);
RCSOC_API const char* rcsoc_error_name(int code);
RCSOC_API const char* rcsoc_phase_name(int label);
// -1 if unknown.
RCSOC_API int rcsoc_parse_phase(const char* name);

typedef struct {
  double delta_a, delta_b;
  double eta_p, eta_m;
  double u0_dn, u0_up;
  double omega_re, omega_im;
  double kappa;
  double two_photon_detuning;
} rcsoc_params;

typedef struct {
  double dt_imag;
  int inner_steps;
  double tol_psi, tol_field;
  long max_iters;
  int n_seeds;
  uint64_t seed0;
  double mixing;
  int newton_polish;
  int J, n_grid;
} rcsoc_solver_config;

RCSOC_API void rcsoc_params_default(rcsoc_params* p);
RCSOC_API void rcsoc_solver_config_default(rcsoc_solver_config* c);
// Defaults with symmetric detuning and pump.
RCSOC_API void rcsoc_params_symmetric(rcsoc_params* p, double delta, double eta);
RCSOC_API int rcsoc_params_validate(const rcsoc_params* p);

// ---- steady states ----
RCSOC_API int rcsoc_solve(const rcsoc_params* p, const rcsoc_solver_config* cfg, rcsoc_state** out);
RCSOC_API int rcsoc_state_load(const char* path, rcsoc_state** out);
RCSOC_API int rcsoc_state_save(const rcsoc_state* s, const char* path);
RCSOC_API void rcsoc_state_free(rcsoc_state* s);
RCSOC_API int rcsoc_state_params(const rcsoc_state* s, rcsoc_params* out);
// spin 0 = down, 1 = up; |j| <= J.
RCSOC_API int rcsoc_state_momentum(const rcsoc_state* s, int spin, int j, double* re, double* im);
RCSOC_API int rcsoc_state_basis(const rcsoc_state* s, int* J, int* n_grid);

typedef struct {
  int label;
  int winding;
  double winding_residual;
  double abs_nw_dn, abs_nw_up;
  double abs_s_minus, abs_s_plus;
  double abs_sw_mm, abs_sw_mp;
  double abs_alpha_p, abs_alpha_m, abs_beta_p, abs_beta_m;
  double mu, residual;
  long iterations;
  uint64_t seed;
  int converged, diverged;
  int stability_checked, stable;
  double max_im;
} rcsoc_summary;

// tol_im < 0 skips the spectrum; otherwise UNSTABLE when some Im(omega) > tol_im.
RCSOC_API int rcsoc_state_summary(const rcsoc_state* s, double tol_dw, double tol_im, rcsoc_summary* out);

// ---- excitations ----
RCSOC_API int rcsoc_spectrum_compute(const rcsoc_state* s, double zero_tol, rcsoc_spectrum** out);
RCSOC_API void rcsoc_spectrum_free(rcsoc_spectrum* sp);
RCSOC_API int rcsoc_spectrum_counts(const rcsoc_spectrum* sp, int* n_eigen, int* n_branches, int* zero_count,
                                    int* has_goldstone, double* max_im);
// Branch k in plotting order (gauge modes excluded).
RCSOC_API int rcsoc_spectrum_branch(const rcsoc_spectrum* sp, int k, double* re, double* im, int* sector,
                                    int* goldstone);
// Writes the spectrum CSV for the lowest n branches.
RCSOC_API int rcsoc_spectrum_write_csv(const rcsoc_spectrum* sp, int n, const char* path);

// ---- real time ----
typedef struct {
  double dt;
  int snapshot_every;
  double drift_tol;
  int max_halvings;
} rcsoc_dyn_options;

RCSOC_API void rcsoc_dyn_options_default(rcsoc_dyn_options* o);
RCSOC_API int rcsoc_propagate(const rcsoc_state* s, double t_final, const rcsoc_dyn_options* o,
                              rcsoc_trajectory** out);
RCSOC_API void rcsoc_trajectory_free(rcsoc_trajectory* tr);
RCSOC_API int rcsoc_trajectory_drift(const rcsoc_trajectory* tr, double* order, double* norm, double* energy);
RCSOC_API int rcsoc_trajectory_write_jsonl(const rcsoc_trajectory* tr, const char* path, int full_every);

typedef struct {
  double detuning_sum[3];
  double max_rel_residual[3];
  double observable_error[3];
  double slope;
} rcsoc_lambda_report;

RCSOC_API int rcsoc_lambda_check(const rcsoc_state* s, double detuning_sum, double t_final,
                                 const rcsoc_dyn_options* o, rcsoc_lambda_report* out);

// ---- sweeps ----
typedef struct {
  double eta_min, eta_max;
  int eta_steps;
  double delta_min, delta_max;
  int delta_steps;
  int with_spectrum;
  int n_branches;
  int warm_start;
  int direction;  // 0 up, 1 down
  double tol_dw, tol_im;
  int jobs;
  long max_points;  // < 0: unlimited
} rcsoc_sweep_spec;

typedef struct {
  int complete;
  long solved, reused;
  long n_points;
  int n_boundaries;
  int n_warnings;
} rcsoc_sweep_summary;

RCSOC_API void rcsoc_sweep_spec_default(rcsoc_sweep_spec* s);
RCSOC_API int rcsoc_sweep_run(const rcsoc_sweep_spec* s, const rcsoc_params* base, const rcsoc_solver_config* cfg,
                              const char* out_dir, rcsoc_sweep_summary* out);
// spec may be NULL; otherwise its hash must match the checkpoint (jobs / max_points are taken from it).
RCSOC_API int rcsoc_sweep_resume(const char* checkpoint, const rcsoc_sweep_spec* s, const rcsoc_params* base,
                                 const rcsoc_solver_config* cfg, rcsoc_sweep_summary* out);

// ---- figures (CSV in, SVG out) ----
RCSOC_API int rcsoc_render_phase_diagram(const char* phase_csv, const char* boundaries_csv, const char* column,
                                         const char* svg_out);
// columns: comma-separated phase_points.csv column names
RCSOC_API int rcsoc_render_cut(const char* phase_csv, const char* columns, const char* svg_out);
RCSOC_API int rcsoc_render_momenta(const char* momenta_csv, const char* svg_out);
RCSOC_API int rcsoc_render_spectrum(const char* spectrum_csv, int n_branches, const char* svg_out);

#ifdef __cplusplus
}
#endif

#endif  // RCSOC_RCSOC_H
