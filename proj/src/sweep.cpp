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

#include "rcsoc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "rcsoc/state_io.hpp"

namespace rcsoc {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char b[17];
  std::snprintf(b, sizeof b, "%016llx", static_cast<unsigned long long>(h));
  return b;
}

json range_j(const Range& r) { return {{"min", r.min}, {"max", r.max}, {"steps", r.steps}}; }
Range j_range(const json& j) { return {j.at("min").get<double>(), j.at("max").get<double>(), j.at("steps").get<int>()}; }

json spec_j(const SweepSpec& s) {
  const SolverConfig& c = s.cfg;
  json cfg = {{"dt_imag", c.dt_imag},     {"inner_steps", c.inner_steps}, {"tol_psi", c.tol_psi},
              {"tol_field", c.tol_field}, {"max_iters", c.max_iters},     {"n_seeds", c.n_seeds},
              {"seed0", c.seed0},         {"mixing", c.mixing},           {"newton_polish", c.newton_polish},
              {"J", c.J},                 {"n_grid", c.n_grid}};
  return {{"eta", range_j(s.eta)},
          {"delta", range_j(s.delta)},
          {"solver", cfg},
          {"with_spectrum", s.with_spectrum},
          {"n_branches", s.n_branches},
          {"warm_start", s.warm_start},
          {"direction", s.direction == SweepDirection::Up ? "up" : "down"},
          {"tol_dw", s.tol_dw},
          {"tol_im", s.tol_im},
          {"params", json::parse(params_to_json(s.base))}};
}

SweepSpec j_spec(const json& j) {
  SweepSpec s;
  s.eta = j_range(j.at("eta"));
  s.delta = j_range(j.at("delta"));
  const json& c = j.at("solver");
  s.cfg.dt_imag = c.at("dt_imag").get<double>();
  s.cfg.inner_steps = c.at("inner_steps").get<int>();
  s.cfg.tol_psi = c.at("tol_psi").get<double>();
  s.cfg.tol_field = c.at("tol_field").get<double>();
  s.cfg.max_iters = c.at("max_iters").get<long>();
  s.cfg.n_seeds = c.at("n_seeds").get<int>();
  s.cfg.seed0 = c.at("seed0").get<std::uint64_t>();
  s.cfg.mixing = c.at("mixing").get<double>();
  s.cfg.newton_polish = c.at("newton_polish").get<bool>();
  s.cfg.J = c.at("J").get<int>();
  s.cfg.n_grid = c.at("n_grid").get<int>();
  s.with_spectrum = j.at("with_spectrum").get<bool>();
  s.n_branches = j.at("n_branches").get<int>();
  s.warm_start = j.at("warm_start").get<bool>();
  s.direction = j.at("direction").get<std::string>() == "down" ? SweepDirection::Down : SweepDirection::Up;
  s.tol_dw = j.at("tol_dw").get<double>();
  s.tol_im = j.at("tol_im").get<double>();
  s.base = params_from_json(j.at("params").dump());
  return s;
}

json branches_j(const std::vector<Mode>& b) {
  json a = json::array();
  for (const Mode& m : b)
    a.push_back({m.omega.real(), m.omega.imag(), m.sector, m.goldstone ? 1 : 0, m.zero ? 1 : 0});
  return a;
}

std::vector<Mode> j_branches(const json& a) {
  std::vector<Mode> out;
  for (const json& e : a) {
    Mode m;
    m.omega = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    m.sector = e.at(2).get<int>();
    m.goldstone = e.at(3).get<int>() != 0;
    m.zero = e.at(4).get<int>() != 0;
    out.push_back(m);
  }
  return out;
}

class CheckpointWriter {
 public:
  explicit CheckpointWriter(const std::string& path, bool append)
      : os_(path, append ? std::ios::app | std::ios::binary : std::ios::trunc | std::ios::binary) {
    if (!os_) throw Error(ErrorCode::Io, "cannot open checkpoint '" + path + "'");
  }
  void line(const std::string& s) {
    std::lock_guard<std::mutex> lk(mu_);
    os_ << s << '\n';
    os_.flush();
  }

 private:
  std::mutex mu_;
  std::ofstream os_;
};

std::string point_line(const std::string& hash, const PointResult& r) {
  json j = {{"spec_hash", hash}, {"i_eta", r.i_eta}, {"i_delta", r.i_delta}, {"failed", r.failed}};
  if (r.failed) {
    j["error"] = r.error;
  } else {
    j["state"] = json::parse(state_to_json(StateFile{ModelParams{}, r.state}));
    j["branches"] = branches_j(r.branches);
    if (r.point.stability_margin) j["max_im"] = *r.point.stability_margin;
  }
  return j.dump();
}

PointResult failed_point(const SweepSpec& spec, int ie, int id, const std::string& what) {
  PointResult r;
  r.i_eta = ie;
  r.i_delta = id;
  r.done = true;
  r.failed = true;
  r.error = what;
  r.point.eta = spec.eta.at(ie);
  r.point.delta = spec.delta.at(id);
  r.point.converged = false;
  r.point.label = Phase::UNCONVERGED;
  return r;
}

// Rebuild a point from its checkpoint record; recomputation is deterministic.
PointResult restore_point(const SweepSpec& spec, const json& j) {
  const int ie = j.at("i_eta").get<int>(), id = j.at("i_delta").get<int>();
  if (ie < 0 || ie >= spec.eta.steps || id < 0 || id >= spec.delta.steps)
    throw Error(ErrorCode::InvalidArgument, "point index out of range");
  if (j.at("failed").get<bool>()) return failed_point(spec, ie, id, j.value("error", std::string()));
  PointResult r;
  r.i_eta = ie;
  r.i_delta = id;
  r.done = true;
  r.state = state_from_json(j.at("state").dump()).state;
  r.branches = j_branches(j.at("branches"));
  StabilityFlag stab;
  if (j.contains("max_im")) {
    stab.checked = true;
    stab.stable = !(j["max_im"].get<double>() > spec.tol_im);
  }
  r.point = analyze_state(r.state, spec.eta.at(ie), spec.delta.at(id), spec.tol_dw, stab);
  if (j.contains("max_im")) r.point.stability_margin = j["max_im"].get<double>();
  return r;
}

std::string manifest_json(const SweepResult& r, double wall) {
  json j = {{"version", kVersion},
            {"spec", spec_j(r.spec)},
            {"spec_hash", r.spec.hash()},
            {"seed0", r.spec.cfg.seed0},
            {"n_seeds", r.spec.cfg.n_seeds},
            {"complete", r.complete},
            {"solved", r.solved},
            {"reused", r.reused},
            {"jobs", r.spec.jobs},
            {"wall_time_s", wall},
            {"warnings", r.warnings}};
  return j.dump(2) + "\n";
}

SweepResult execute(const SweepSpec& spec, std::vector<PointResult> pre, CheckpointWriter* ck,
                    std::vector<std::string> warnings) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepResult res;
  res.spec = spec;
  res.warnings = std::move(warnings);
  const int ne = spec.eta.steps, nd = spec.delta.steps;
  res.points = std::move(pre);
  res.points.resize(static_cast<std::size_t>(ne) * nd);
  const std::string hash = spec.hash();

  std::atomic<int> next_row{0};
  std::atomic<long> budget{spec.max_points};
  std::atomic<long> solved{0}, reused{0};
  std::atomic<bool> stopped{false};

  auto row = [&](int id) {
    const SteadyState* warm = nullptr;
    for (int k = 0; k < ne; ++k) {
      const int ie = spec.direction == SweepDirection::Up ? k : ne - 1 - k;
      PointResult& slot = res.points[static_cast<std::size_t>(id) * ne + ie];
      if (slot.done && !slot.failed) {
        reused.fetch_add(1);
      } else {
        if (spec.max_points >= 0 && budget.fetch_sub(1) <= 0) {
          stopped = true;
          return;
        }
        try {
          slot = solve_point(spec, ie, id, spec.warm_start ? warm : nullptr);
        } catch (const std::exception& e) {
          slot = failed_point(spec, ie, id, e.what());
        }
        solved.fetch_add(1);
        if (ck) ck->line(point_line(hash, slot));
      }
      if (!slot.failed && slot.state.converged()) warm = &slot.state;
    }
  };
  auto worker = [&] {
    for (int id = next_row.fetch_add(1); id < nd; id = next_row.fetch_add(1)) row(id);
  };
  const int jobs = std::max(1, std::min(spec.jobs, nd));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  res.solved = solved;
  res.reused = reused;
  res.complete = !stopped && std::all_of(res.points.begin(), res.points.end(), [](const PointResult& p) { return p.done; });
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!spec.out_dir.empty()) {
    const fs::path dir(spec.out_dir);
    write_text_file((dir / "manifest.json").string(), manifest_json(res, wall));
    if (res.complete) {
      write_text_file((dir / "phase_points.csv").string(), phase_points_csv(res));
      write_text_file((dir / "momenta.csv").string(), momenta_csv(res));
      write_text_file((dir / "boundaries.csv").string(), boundaries_csv(detect_boundaries(res)));
      if (spec.with_spectrum) write_text_file((dir / "spectrum.csv").string(), spectrum_csv(res));
    }
  }
  return res;
}

}  // namespace

void SweepSpec::validate() const {
  for (const Range* r : {&eta, &delta}) {
    if (r->steps < 1) throw Error(ErrorCode::InvalidArgument, "range steps must be >= 1");
    if (!std::isfinite(r->min) || !std::isfinite(r->max)) throw Error(ErrorCode::InvalidArgument, "range not finite");
  }
  if (eta.min < 0.0 || eta.max < 0.0) throw Error(ErrorCode::InvalidArgument, "eta must be >= 0");
  if (n_branches < 1) throw Error(ErrorCode::InvalidArgument, "n_branches must be >= 1");
  if (!(tol_dw >= 0.0) || !(tol_im >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerances must be >= 0");
  if (jobs < 1) throw Error(ErrorCode::InvalidArgument, "jobs must be >= 1");
  cfg.validate();
  params_at(eta.min, delta.min).validate();
}

ModelParams SweepSpec::params_at(double eta_v, double delta_v) const {
  ModelParams p = base;
  p.delta_a = p.delta_b = delta_v;
  p.eta_p = p.eta_m = eta_v;
  return p;
}

std::string SweepSpec::canonical_json() const { return spec_j(*this).dump(); }
std::string SweepSpec::hash() const { return fnv1a_hex(canonical_json()); }

PhasePoint analyze_state(const SteadyState& ss, double eta, double delta, double tol_dw, StabilityFlag stab) {
  PhasePoint pt = order_parameters(ss.coeffs, ss.cavity, ss.mu, ss.basis);
  pt.eta = eta;
  pt.delta = delta;
  pt.residual = ss.residual;
  pt.seed = ss.seed;
  pt.converged = ss.converged();
  pt.diverged = ss.status == SolveStatus::Diverged;
  pt.label = classify_phase(pt, tol_dw, stab);
  return pt;
}

PointResult solve_point(const SweepSpec& spec, int i_eta, int i_delta, const SteadyState* warm) {
  const double eta = spec.eta.at(i_eta), delta = spec.delta.at(i_delta);
  const ModelParams p = spec.params_at(eta, delta);
  PointResult r;
  r.i_eta = i_eta;
  r.i_delta = i_delta;
  r.done = true;
  SolveContext ctx;
  ctx.i_eta = i_eta;
  ctx.i_delta = i_delta;
  ctx.warm = warm;
  r.state = solve_steady_state(p, spec.cfg, ctx);
  StabilityFlag stab;
  std::optional<double> margin;
  if (spec.with_spectrum && r.state.converged()) {
    const ExcitationSpectrum s = excitation_spectrum(build_bogoliubov_matrix(r.state, p), &r.state);
    const StabilityResult st = stability_check(s, spec.tol_im);
    stab = {true, st.stable};
    margin = st.max_im;
    r.branches = lowest_branches(s, spec.n_branches);
    for (Mode& m : r.branches) m.vec.resize(0);
  }
  r.point = analyze_state(r.state, eta, delta, spec.tol_dw, stab);
  r.point.stability_margin = margin;
  return r;
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::unique_ptr<CheckpointWriter> ck;
  if (!spec.out_dir.empty()) {
    fs::create_directories(spec.out_dir);
    ck = std::make_unique<CheckpointWriter>((fs::path(spec.out_dir) / "checkpoint.jsonl").string(), false);
    json head = {{"spec_hash", spec.hash()}, {"spec", spec_j(spec)}, {"version", kVersion}};
    ck->line(head.dump());
  }
  return execute(spec, {}, ck.get(), {});
}

SweepResult resume_sweep(const std::string& checkpoint_path, const SweepSpec* override_spec) {
  std::ifstream is(checkpoint_path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open checkpoint '" + checkpoint_path + "'");
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::InvalidArgument, "empty checkpoint");
  SweepSpec spec;
  std::string hash;
  try {
    const json head = json::parse(line);
    spec = j_spec(head.at("spec"));
    hash = head.at("spec_hash").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad checkpoint header: ") + e.what());
  }
  if (hash != spec.hash()) throw Error(ErrorCode::SpecMismatch, "checkpoint header hash does not match its spec");
  if (override_spec) {
    if (override_spec->hash() != hash) throw Error(ErrorCode::SpecMismatch, "sweep spec differs from checkpoint");
    spec.jobs = override_spec->jobs;
    spec.max_points = override_spec->max_points;
  }
  spec.out_dir = fs::path(checkpoint_path).parent_path().string();
  if (spec.out_dir.empty()) spec.out_dir = ".";
  spec.validate();

  std::vector<PointResult> pre(static_cast<std::size_t>(spec.eta.steps) * spec.delta.steps);
  std::vector<std::string> warnings;
  long lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      if (j.at("spec_hash").get<std::string>() != hash) throw Error(ErrorCode::SpecMismatch, "foreign spec hash");
      PointResult r = restore_point(spec, j);
      PointResult& slot = pre[static_cast<std::size_t>(r.i_delta) * spec.eta.steps + r.i_eta];
      if (!slot.done || slot.failed) slot = std::move(r);
    } catch (const std::exception& e) {
      warnings.push_back("checkpoint line " + std::to_string(lineno) + " ignored: " + e.what());
      std::fprintf(stderr, "warning: checkpoint line %ld ignored (%s); point re-queued\n", lineno, e.what());
    }
  }
  is.close();
  // a crash may leave a partial last line; start appends on a fresh line
  {
    std::ifstream tail(checkpoint_path, std::ios::binary | std::ios::ate);
    bool needs_nl = false;
    if (tail && tail.tellg() > 0) {
      tail.seekg(-1, std::ios::end);
      needs_nl = tail.get() != '\n';
    }
    if (needs_nl) std::ofstream(checkpoint_path, std::ios::app | std::ios::binary) << '\n';
  }
  for (const PointResult& p : pre)
    if (p.failed) warnings.push_back("failed point re-queued");
  CheckpointWriter ck(checkpoint_path, true);
  return execute(spec, std::move(pre), &ck, std::move(warnings));
}

std::vector<Boundary> detect_boundaries(const SweepResult& r) {
  const int ne = r.spec.eta.steps, nd = r.spec.delta.steps;
  std::map<std::pair<int, int>, Boundary> by_pair;
  auto ok = [](const PointResult& p) {
    return p.done && !p.failed && p.point.label != Phase::UNCONVERGED && p.point.label != Phase::UNSTABLE;
  };
  for (int id = 0; id < nd; ++id) {
    // order parameters along the row, increasing eta
    std::vector<double> nw(ne), am(ne);
    for (int ie = 0; ie < ne; ++ie) {
      const PhasePoint& pt = r.at(ie, id).point;
      nw[ie] = std::abs(pt.nw_dn);
      am[ie] = std::abs(pt.cavity.alpha_m);
    }
    auto jump = [&](const std::vector<double>& x, int i) {
      const double d = std::abs(x[i + 1] - x[i]);
      double slope = 0.0;
      if (i >= 1) slope = std::max(slope, std::abs(x[i] - x[i - 1]));
      if (i + 2 < ne) slope = std::max(slope, std::abs(x[i + 2] - x[i + 1]));
      return d > 5.0 * slope && d > 1e-8;
    };
    for (int ie = 0; ie + 1 < ne; ++ie) {
      const PointResult& a = r.at(ie, id);
      const PointResult& b = r.at(ie + 1, id);
      if (!ok(a) || !ok(b) || a.point.label == b.point.label) continue;
      BoundaryPoint bp;
      bp.delta = a.point.delta;
      bp.eta = 0.5 * (a.point.eta + b.point.eta);
      bp.from = a.point.label;
      bp.to = b.point.label;
      bp.topological = a.point.winding != b.point.winding;
      bp.first_order = jump(nw, ie) || jump(am, ie);
      Boundary& B = by_pair.try_emplace({int(bp.from), int(bp.to)}, Boundary{bp.from, bp.to, {}}).first->second;
      B.points.push_back(bp);
    }
  }
  std::vector<Boundary> out;
  for (auto& [k, b] : by_pair) {
    std::stable_sort(b.points.begin(), b.points.end(),
                     [](const BoundaryPoint& x, const BoundaryPoint& y) { return x.delta < y.delta; });
    out.push_back(std::move(b));
  }
  return out;
}

std::string phase_points_csv(const SweepResult& r) {
  std::string s = phase_csv_header() + "\n";
  for (const PointResult& p : r.points)
    if (p.done) s += phase_csv_row(p.point) + "\n";
  return s;
}

std::string spectrum_csv(const SweepResult& r) {
  std::string s = spectrum_csv_header() + "\n";
  for (const PointResult& p : r.points)
    for (std::size_t k = 0; k < p.branches.size(); ++k)
      s += spectrum_csv_row(p.point.eta, p.point.delta, static_cast<int>(k), p.branches[k]) + "\n";
  return s;
}

std::string momenta_csv(const SweepResult& r) {
  static const int js[] = {-2, -1, 0, 1, 2, 3};
  std::string s = "eta,delta,label";
  for (const char* t : {"dn", "up"})
    for (int j : js) s += std::string(",abs_c_") + t + "_" + (j < 0 ? "m" + std::to_string(-j) : std::to_string(j));
  s += "\n";
  char b[64];
  for (const PointResult& p : r.points) {
    if (!p.done) continue;
    std::snprintf(b, sizeof b, "%.6f,%.6f,", p.point.eta, p.point.delta);
    s += b;
    s += phase_name(p.point.label);
    const Coefficients& c = p.point.momenta;
    const int J = (static_cast<int>(c.c_dn.size()) - 1) / 2;
    for (const CVec* v : {&c.c_dn, &c.c_up})
      for (int j : js) {
        const double a = (v->size() > 0 && std::abs(j) <= J) ? std::abs((*v)(j + J)) : 0.0;
        std::snprintf(b, sizeof b, ",%.10e", a);
        s += b;
      }
    s += "\n";
  }
  return s;
}

std::string boundaries_csv(const std::vector<Boundary>& bs) {
  std::string s = "from,to,delta,eta,first_order,topological\n";
  char b[128];
  for (const Boundary& B : bs)
    for (const BoundaryPoint& p : B.points) {
      std::snprintf(b, sizeof b, "%s,%s,%.6f,%.6f,%d,%d\n", phase_name(p.from), phase_name(p.to), p.delta, p.eta,
                    p.first_order ? 1 : 0, p.topological ? 1 : 0);
      s += b;
    }
  return s;
}

}  // namespace rcsoc
