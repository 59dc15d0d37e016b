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

#include "rcsoc/rcsoc.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "rcsoc/bogoliubov.hpp"
#include "rcsoc/dynamics.hpp"
#include "rcsoc/render.hpp"
#include "rcsoc/state_io.hpp"
#include "rcsoc/sweep.hpp"

struct rcsoc_state {
  rcsoc::StateFile f;
};

struct rcsoc_spectrum {
  rcsoc::ExcitationSpectrum s;
  std::vector<rcsoc::Mode> branches;
  double eta = 0.0, delta = 0.0;
  double max_im = 0.0;
};

struct rcsoc_trajectory {
  rcsoc::Trajectory tr;
};

namespace {

thread_local std::string g_last;

int fail(int code, const char* what) {
  g_last = what ? what : "";
  return code;
}

// Runs f, mapping exceptions to return codes.
template <class F>
int guard(F&& f) {
  try {
    g_last.clear();
    f();
    return RCSOC_OK;
  } catch (const rcsoc::Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RCSOC_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RCSOC_INTERNAL, e.what());
  } catch (...) {
    return fail(RCSOC_INTERNAL, "unknown exception");
  }
}

void need(const void* p, const char* what) {
  if (!p) throw rcsoc::Error(rcsoc::ErrorCode::InvalidArgument, std::string("null ") + what);
}

rcsoc::ModelParams to_cpp(const rcsoc_params& p) {
  rcsoc::ModelParams m;
  m.delta_a = p.delta_a;
  m.delta_b = p.delta_b;
  m.eta_p = p.eta_p;
  m.eta_m = p.eta_m;
  m.u0_dn = p.u0_dn;
  m.u0_up = p.u0_up;
  m.omega_r = {p.omega_re, p.omega_im};
  m.kappa = p.kappa;
  m.two_photon_detuning = p.two_photon_detuning;
  return m;
}

rcsoc_params to_c(const rcsoc::ModelParams& m) {
  return {m.delta_a, m.delta_b, m.eta_p, m.eta_m, m.u0_dn, m.u0_up, m.omega_r.real(), m.omega_r.imag(),
          m.kappa,   m.two_photon_detuning};
}

rcsoc::SolverConfig to_cpp(const rcsoc_solver_config& c) {
  rcsoc::SolverConfig s;
  s.dt_imag = c.dt_imag;
  s.inner_steps = c.inner_steps;
  s.tol_psi = c.tol_psi;
  s.tol_field = c.tol_field;
  s.max_iters = c.max_iters;
  s.n_seeds = c.n_seeds;
  s.seed0 = c.seed0;
  s.mixing = c.mixing;
  s.newton_polish = c.newton_polish != 0;
  s.J = c.J;
  s.n_grid = c.n_grid;
  return s;
}

rcsoc::TrajectoryOptions to_cpp(const rcsoc_dyn_options* o) {
  rcsoc::TrajectoryOptions t;
  if (o) {
    t.dt = o->dt;
    t.snapshot_every = o->snapshot_every;
    t.drift_tol = o->drift_tol;
    t.max_halvings = o->max_halvings;
  }
  return t;
}

rcsoc::SweepSpec to_cpp(const rcsoc_sweep_spec& s, const rcsoc_params* base, const rcsoc_solver_config* cfg) {
  rcsoc::SweepSpec o;
  o.eta = {s.eta_min, s.eta_max, s.eta_steps};
  o.delta = {s.delta_min, s.delta_max, s.delta_steps};
  o.with_spectrum = s.with_spectrum != 0;
  o.n_branches = s.n_branches;
  o.warm_start = s.warm_start != 0;
  o.direction = s.direction ? rcsoc::SweepDirection::Down : rcsoc::SweepDirection::Up;
  o.tol_dw = s.tol_dw;
  o.tol_im = s.tol_im;
  o.jobs = s.jobs;
  o.max_points = s.max_points;
  if (base) o.base = to_cpp(*base);
  if (cfg) o.cfg = to_cpp(*cfg);
  return o;
}

void fill(rcsoc_sweep_summary* out, const rcsoc::SweepResult& r) {
  if (!out) return;
  out->complete = r.complete ? 1 : 0;
  out->solved = r.solved;
  out->reused = r.reused;
  out->n_points = static_cast<long>(r.points.size());
  out->n_boundaries = 0;
  for (const auto& b : rcsoc::detect_boundaries(r)) out->n_boundaries += static_cast<int>(b.points.size());
  out->n_warnings = static_cast<int>(r.warnings.size());
}

double eta_of(const rcsoc::ModelParams& p) { return p.eta_p; }
double delta_of(const rcsoc::ModelParams& p) { return p.delta_a; }

}  // namespace

extern "C" {

const char* rcsoc_version(void) { return rcsoc::kVersion; }
const char* rcsoc_last_error(void) { return g_last.c_str(); }
const char* rcsoc_error_name(int code) { return rcsoc::error_name(static_cast<rcsoc::ErrorCode>(code)); }

const char* rcsoc_phase_name(int label) {
  if (label < 0 || label > RCSOC_UNCONVERGED) return "?";
  return rcsoc::phase_name(static_cast<rcsoc::Phase>(label));
}

int rcsoc_parse_phase(const char* name) {
  if (!name) return -1;
  const auto ph = rcsoc::parse_phase(name);
  return ph ? static_cast<int>(*ph) : -1;
}

void rcsoc_params_default(rcsoc_params* p) {
  if (p) *p = to_c(rcsoc::ModelParams{});
}

void rcsoc_solver_config_default(rcsoc_solver_config* c) {
  if (!c) return;
  const rcsoc::SolverConfig s;
  *c = {s.dt_imag, s.inner_steps, s.tol_psi, s.tol_field, s.max_iters, s.n_seeds,
        s.seed0,   s.mixing,      s.newton_polish ? 1 : 0, s.J, s.n_grid};
}

void rcsoc_params_symmetric(rcsoc_params* p, double delta, double eta) {
  if (!p) return;
  *p = to_c(rcsoc::ModelParams{});
  p->delta_a = p->delta_b = delta;
  p->eta_p = p->eta_m = eta;
}

int rcsoc_params_validate(const rcsoc_params* p) {
  return guard([&] {
    need(p, "params");
    to_cpp(*p).validate();
  });
}

int rcsoc_solve(const rcsoc_params* p, const rcsoc_solver_config* cfg, rcsoc_state** out) {
  return guard([&] {
    need(p, "params");
    need(out, "output");
    *out = nullptr;
    rcsoc::SolverConfig c;
    if (cfg) c = to_cpp(*cfg);
    auto s = std::make_unique<rcsoc_state>();
    s->f.params = to_cpp(*p);
    s->f.state = rcsoc::solve_steady_state(s->f.params, c);
    *out = s.release();
  });
}

int rcsoc_state_load(const char* path, rcsoc_state** out) {
  return guard([&] {
    need(path, "path");
    need(out, "output");
    *out = nullptr;
    auto s = std::make_unique<rcsoc_state>();
    s->f = rcsoc::state_from_json(rcsoc::read_text_file(path));
    *out = s.release();
  });
}

int rcsoc_state_save(const rcsoc_state* s, const char* path) {
  return guard([&] {
    need(s, "state");
    need(path, "path");
    rcsoc::write_text_file(path, rcsoc::state_to_json(s->f));
  });
}

void rcsoc_state_free(rcsoc_state* s) { delete s; }

int rcsoc_state_params(const rcsoc_state* s, rcsoc_params* out) {
  return guard([&] {
    need(s, "state");
    need(out, "output");
    *out = to_c(s->f.params);
  });
}

int rcsoc_state_momentum(const rcsoc_state* s, int spin, int j, double* re, double* im) {
  return guard([&] {
    need(s, "state");
    const int J = s->f.state.basis.J;
    if ((spin != 0 && spin != 1) || j < -J || j > J)
      throw rcsoc::Error(rcsoc::ErrorCode::InvalidArgument, "spin or momentum out of range");
    const rcsoc::CVec& v = spin == 0 ? s->f.state.coeffs.c_dn : s->f.state.coeffs.c_up;
    if (re) *re = v(j + J).real();
    if (im) *im = v(j + J).imag();
  });
}

int rcsoc_state_basis(const rcsoc_state* s, int* J, int* n_grid) {
  return guard([&] {
    need(s, "state");
    if (J) *J = s->f.state.basis.J;
    if (n_grid) *n_grid = s->f.state.basis.n_grid;
  });
}

int rcsoc_state_summary(const rcsoc_state* s, double tol_dw, double tol_im, rcsoc_summary* out) {
  return guard([&] {
    need(s, "state");
    need(out, "output");
    const rcsoc::SteadyState& ss = s->f.state;
    rcsoc::StabilityFlag stab;
    double max_im = 0.0;
    if (tol_im >= 0.0 && ss.converged()) {
      const auto sp = rcsoc::excitation_spectrum(rcsoc::build_bogoliubov_matrix(ss, s->f.params), &ss);
      const auto st = rcsoc::stability_check(sp, tol_im);
      stab = {true, st.stable};
      max_im = st.max_im;
    }
    const rcsoc::PhasePoint pt = rcsoc::analyze_state(ss, eta_of(s->f.params), delta_of(s->f.params), tol_dw, stab);
    rcsoc_summary r{};
    r.label = static_cast<int>(pt.label);
    r.winding = pt.winding;
    r.winding_residual = pt.winding_residual;
    r.abs_nw_dn = std::abs(pt.nw_dn);
    r.abs_nw_up = std::abs(pt.nw_up);
    r.abs_s_minus = std::abs(pt.s_minus);
    r.abs_s_plus = std::abs(pt.s_plus);
    r.abs_sw_mm = std::abs(pt.sw_minus_m);
    r.abs_sw_mp = std::abs(pt.sw_minus_p);
    r.abs_alpha_p = std::abs(ss.cavity.alpha_p);
    r.abs_alpha_m = std::abs(ss.cavity.alpha_m);
    r.abs_beta_p = std::abs(ss.cavity.beta_p);
    r.abs_beta_m = std::abs(ss.cavity.beta_m);
    r.mu = ss.mu;
    r.residual = ss.residual;
    r.iterations = ss.iterations;
    r.seed = ss.seed;
    r.converged = pt.converged ? 1 : 0;
    r.diverged = pt.diverged ? 1 : 0;
    r.stability_checked = stab.checked ? 1 : 0;
    r.stable = stab.stable ? 1 : 0;
    r.max_im = max_im;
    *out = r;
  });
}

int rcsoc_spectrum_compute(const rcsoc_state* s, double zero_tol, rcsoc_spectrum** out) {
  return guard([&] {
    need(s, "state");
    need(out, "output");
    *out = nullptr;
    rcsoc::SpectrumOptions opt;
    if (zero_tol > 0.0) opt.zero_tol = zero_tol;
    auto sp = std::make_unique<rcsoc_spectrum>();
    sp->s = rcsoc::excitation_spectrum(rcsoc::build_bogoliubov_matrix(s->f.state, s->f.params), &s->f.state, opt);
    sp->branches = rcsoc::lowest_branches(sp->s, static_cast<int>(sp->s.modes.size()));
    sp->max_im = rcsoc::stability_check(sp->s, 0.0).max_im;
    sp->eta = eta_of(s->f.params);
    sp->delta = delta_of(s->f.params);
    *out = sp.release();
  });
}

void rcsoc_spectrum_free(rcsoc_spectrum* sp) { delete sp; }

int rcsoc_spectrum_counts(const rcsoc_spectrum* sp, int* n_eigen, int* n_branches, int* zero_count,
                          int* has_goldstone, double* max_im) {
  return guard([&] {
    need(sp, "spectrum");
    if (n_eigen) *n_eigen = static_cast<int>(sp->s.all.size());
    if (n_branches) *n_branches = static_cast<int>(sp->branches.size());
    if (zero_count) *zero_count = sp->s.zero_count;
    if (has_goldstone) *has_goldstone = sp->s.has_goldstone ? 1 : 0;
    if (max_im) *max_im = sp->max_im;
  });
}

int rcsoc_spectrum_branch(const rcsoc_spectrum* sp, int k, double* re, double* im, int* sector, int* goldstone) {
  return guard([&] {
    need(sp, "spectrum");
    if (k < 0 || k >= static_cast<int>(sp->branches.size()))
      throw rcsoc::Error(rcsoc::ErrorCode::InvalidArgument, "branch index out of range");
    const rcsoc::Mode& m = sp->branches[k];
    if (re) *re = m.omega.real();
    if (im) *im = m.omega.imag();
    if (sector) *sector = m.sector;
    if (goldstone) *goldstone = m.goldstone ? 1 : 0;
  });
}

int rcsoc_spectrum_write_csv(const rcsoc_spectrum* sp, int n, const char* path) {
  return guard([&] {
    need(sp, "spectrum");
    need(path, "path");
    std::string s = rcsoc::spectrum_csv_header() + "\n";
    const int m = std::min<int>(n < 0 ? 0 : n, static_cast<int>(sp->branches.size()));
    for (int k = 0; k < m; ++k) s += rcsoc::spectrum_csv_row(sp->eta, sp->delta, k, sp->branches[k]) + "\n";
    rcsoc::write_text_file(path, s);
  });
}

void rcsoc_dyn_options_default(rcsoc_dyn_options* o) {
  if (!o) return;
  const rcsoc::TrajectoryOptions t;
  *o = {t.dt, t.snapshot_every, t.drift_tol, t.max_halvings};
}

int rcsoc_propagate(const rcsoc_state* s, double t_final, const rcsoc_dyn_options* o, rcsoc_trajectory** out) {
  return guard([&] {
    need(s, "state");
    need(out, "output");
    *out = nullptr;
    auto tr = std::make_unique<rcsoc_trajectory>();
    tr->tr = rcsoc::propagate_effective(s->f.state.coeffs, s->f.state.cavity, s->f.params, t_final, to_cpp(o));
    *out = tr.release();
  });
}

void rcsoc_trajectory_free(rcsoc_trajectory* tr) { delete tr; }

int rcsoc_trajectory_drift(const rcsoc_trajectory* tr, double* order, double* norm, double* energy) {
  return guard([&] {
    need(tr, "trajectory");
    const rcsoc::DriftReport d = rcsoc::drift_report(tr->tr);
    if (order) *order = d.max_order_drift;
    if (norm) *norm = d.max_norm_drift;
    if (energy) *energy = d.max_energy_drift;
  });
}

int rcsoc_trajectory_write_jsonl(const rcsoc_trajectory* tr, const char* path, int full_every) {
  return guard([&] {
    need(tr, "trajectory");
    need(path, "path");
    rcsoc::write_text_file(path, rcsoc::trajectory_jsonl(tr->tr, full_every));
  });
}

int rcsoc_lambda_check(const rcsoc_state* s, double detuning_sum, double t_final, const rcsoc_dyn_options* o,
                       rcsoc_lambda_report* out) {
  return guard([&] {
    need(s, "state");
    need(out, "output");
    const rcsoc::LambdaCheck lc =
        rcsoc::lambda_check(s->f.state.coeffs, s->f.state.cavity, s->f.params, detuning_sum, t_final, to_cpp(o));
    for (int k = 0; k < 3; ++k) {
      out->detuning_sum[k] = lc.rows[k].detuning_sum;
      out->max_rel_residual[k] = lc.rows[k].max_rel_residual;
      out->observable_error[k] = lc.rows[k].observable_error;
    }
    out->slope = lc.slope;
  });
}

void rcsoc_sweep_spec_default(rcsoc_sweep_spec* s) {
  if (!s) return;
  const rcsoc::SweepSpec d;
  *s = {d.eta.min, d.eta.max, d.eta.steps, d.delta.min, d.delta.max, d.delta.steps, d.with_spectrum ? 1 : 0,
        d.n_branches, d.warm_start ? 1 : 0, 0, d.tol_dw, d.tol_im, d.jobs, d.max_points};
}

int rcsoc_sweep_run(const rcsoc_sweep_spec* s, const rcsoc_params* base, const rcsoc_solver_config* cfg,
                    const char* out_dir, rcsoc_sweep_summary* out) {
  return guard([&] {
    need(s, "sweep spec");
    rcsoc::SweepSpec sp = to_cpp(*s, base, cfg);
    if (out_dir) sp.out_dir = out_dir;
    fill(out, rcsoc::run_sweep(sp));
  });
}

int rcsoc_sweep_resume(const char* checkpoint, const rcsoc_sweep_spec* s, const rcsoc_params* base,
                       const rcsoc_solver_config* cfg, rcsoc_sweep_summary* out) {
  return guard([&] {
    need(checkpoint, "checkpoint path");
    if (s) {
      const rcsoc::SweepSpec sp = to_cpp(*s, base, cfg);
      fill(out, rcsoc::resume_sweep(checkpoint, &sp));
    } else {
      fill(out, rcsoc::resume_sweep(checkpoint));
    }
  });
}

int rcsoc_render_phase_diagram(const char* phase_csv, const char* boundaries_csv, const char* column,
                               const char* svg_out) {
  return guard([&] {
    need(phase_csv, "phase csv");
    need(column, "column");
    need(svg_out, "output path");
    const std::string b = boundaries_csv ? rcsoc::read_text_file(boundaries_csv) : std::string();
    rcsoc::write_text_file(svg_out, rcsoc::render_phase_diagram(rcsoc::read_text_file(phase_csv), b, column));
  });
}

int rcsoc_render_cut(const char* phase_csv, const char* columns, const char* svg_out) {
  return guard([&] {
    need(phase_csv, "phase csv");
    need(columns, "columns");
    need(svg_out, "output path");
    std::vector<std::string> cols;
    std::string cur;
    for (const char* c = columns;; ++c) {
      if (*c == ',' || *c == '\0') {
        if (!cur.empty()) cols.push_back(cur);
        cur.clear();
        if (*c == '\0') break;
      } else {
        cur += *c;
      }
    }
    rcsoc::write_text_file(svg_out, rcsoc::render_cut(rcsoc::read_text_file(phase_csv), cols));
  });
}

int rcsoc_render_momenta(const char* momenta_csv, const char* svg_out) {
  return guard([&] {
    need(momenta_csv, "momenta csv");
    need(svg_out, "output path");
    rcsoc::write_text_file(svg_out, rcsoc::render_momenta(rcsoc::read_text_file(momenta_csv)));
  });
}

int rcsoc_render_spectrum(const char* spectrum_csv, int n_branches, const char* svg_out) {
  return guard([&] {
    need(spectrum_csv, "spectrum csv");
    need(svg_out, "output path");
    rcsoc::write_text_file(svg_out, rcsoc::render_spectrum(rcsoc::read_text_file(spectrum_csv), n_branches));
  });
}

}  // extern "C"
