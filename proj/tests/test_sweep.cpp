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


#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "rcsoc/render.hpp"
#include "rcsoc/state_io.hpp"
#include "rcsoc/sweep.hpp"

using namespace rcsoc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("rcsoc_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  return d;
}

// Small but non-trivial: crosses the spiral transition on the upper row.
SweepSpec small_spec() {
  SweepSpec s;
  s.eta = {18.0, 32.0, 4};
  s.delta = {-20.0, -16.0, 2};
  s.cfg.J = 8;
  s.cfg.n_grid = 64;
  return s;
}

std::string slurp(const fs::path& p) { return read_text_file(p.string()); }

}  // namespace

TEST_CASE("ranges and parameters") {
  Range r{0.0, 60.0, 61};
  CHECK(r.at(0) == 0.0);
  CHECK(r.at(27) == doctest::Approx(27.0));
  CHECK(r.at(60) == 60.0);
  CHECK(Range{5.0, 9.0, 1}.at(0) == 5.0);
  SweepSpec s;
  ModelParams p = s.params_at(33.0, -12.0);
  CHECK(p.eta_p == 33.0);
  CHECK(p.eta_m == 33.0);
  CHECK(p.delta_a == -12.0);
  CHECK(p.delta_b == -12.0);
  SweepSpec bad = s;
  bad.eta.steps = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = s;
  bad.delta.max = std::nan("");
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("spec hash ignores plumbing-only fields") {
  SweepSpec a = small_spec(), b = small_spec();
  b.jobs = 7;
  b.out_dir = "/elsewhere";
  b.max_points = 3;
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16);
  b.eta.steps = 5;
  CHECK(a.hash() != b.hash());
}

TEST_CASE("degenerate 1x1 sweep at (-20, 30)") {
  SweepSpec s;
  s.eta = {30.0, 30.0, 1};
  s.delta = {-20.0, -20.0, 1};
  SweepResult r = run_sweep(s);
  REQUIRE(r.points.size() == 1);
  CHECK(r.complete);
  CHECK(r.points[0].point.label == Phase::PW_SS);
  const std::string csv = phase_points_csv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(detect_boundaries(r).empty());
}

TEST_CASE("single-phase sweep has no boundaries") {
  SweepSpec s = small_spec();
  s.eta = {4.0, 12.0, 3};
  s.delta = {-20.0, -20.0, 1};
  SweepResult r = run_sweep(s);
  for (const PointResult& p : r.points) CHECK(p.point.label == Phase::DW_SW);
  CHECK(detect_boundaries(r).empty());
  CHECK(boundaries_csv({}).find('\n') == boundaries_csv({}).size() - 1);  // header only
}

TEST_CASE("sweep outputs are independent of the worker count") {
  SweepSpec s = small_spec();
  s.with_spectrum = true;
  const fs::path d1 = scratch("j1"), d3 = scratch("j3");
  s.out_dir = d1.string();
  s.jobs = 1;
  SweepResult r1 = run_sweep(s);
  s.out_dir = d3.string();
  s.jobs = 3;
  SweepResult r3 = run_sweep(s);
  REQUIRE(r1.complete);
  REQUIRE(r3.complete);
  for (const char* f : {"phase_points.csv", "spectrum.csv", "momenta.csv", "boundaries.csv"}) {
    CAPTURE(f);
    CHECK(slurp(d1 / f) == slurp(d3 / f));
  }
  CHECK(fs::exists(d1 / "manifest.json"));
  CHECK(fs::exists(d1 / "checkpoint.jsonl"));
  // the spiral transition shows up as a topological boundary on the -20 row
  bool topo = false;
  for (const Boundary& b : detect_boundaries(r1))
    for (const BoundaryPoint& bp : b.points) topo |= bp.topological;
  CHECK(topo);
  fs::remove_all(d1);
  fs::remove_all(d3);
}

TEST_CASE("interrupted sweep resumes to identical files") {
  SweepSpec s = small_spec();
  const fs::path full = scratch("full"), part = scratch("part");
  s.out_dir = full.string();
  SweepResult ref = run_sweep(s);
  REQUIRE(ref.complete);

  s.out_dir = part.string();
  s.max_points = 3;
  SweepResult cut = run_sweep(s);
  CHECK_FALSE(cut.complete);
  CHECK(cut.solved == 3);
  CHECK_FALSE(fs::exists(part / "phase_points.csv"));

  SweepResult res = resume_sweep((part / "checkpoint.jsonl").string());
  CHECK(res.complete);
  CHECK(res.reused == 3);
  CHECK(res.solved == 5);
  for (const char* f : {"phase_points.csv", "momenta.csv", "boundaries.csv"}) {
    CAPTURE(f);
    CHECK(slurp(full / f) == slurp(part / f));
  }

  SUBCASE("complete checkpoint: nothing to do") {
    SweepResult again = resume_sweep((part / "checkpoint.jsonl").string());
    CHECK(again.solved == 0);
    CHECK(again.reused == 8);
    CHECK(slurp(full / "phase_points.csv") == slurp(part / "phase_points.csv"));
  }
  SUBCASE("corrupt line is re-queued with a warning") {
    const fs::path ck = part / "checkpoint.jsonl";
    std::string text = slurp(ck);
    std::vector<std::string> lines;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) lines.push_back(l);
    REQUIRE(lines.size() >= 9);
    // find the last record for one point and garble every record of it
    lines[2] = lines[2].substr(0, lines[2].size() / 2);
    std::ostringstream os;
    for (const auto& l : lines) os << l << '\n';
    write_text_file(ck.string(), os.str());
    SweepResult fixed = resume_sweep(ck.string());
    CHECK(fixed.complete);
    CHECK_FALSE(fixed.warnings.empty());
    CHECK(fixed.solved >= 1);
    CHECK(slurp(full / "phase_points.csv") == slurp(part / "phase_points.csv"));
  }
  SUBCASE("spec mismatch is refused") {
    SweepSpec other = small_spec();
    other.tol_dw = 2e-4;
    try {
      resume_sweep((part / "checkpoint.jsonl").string(), &other);
      FAIL("expected SpecMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SpecMismatch);
    }
  }
  fs::remove_all(full);
  fs::remove_all(part);
}

TEST_CASE("state files round-trip exactly") {
  ModelParams p = make_symmetric_params(-20, 30);
  p.omega_r = cplx(-0.9, 0.125);
  p.two_photon_detuning = 0.1 + 0.2;
  SolverConfig cfg;
  cfg.J = 6;
  cfg.n_grid = 32;
  StateFile sf{p, solve_steady_state(p, cfg)};
  const std::string text = state_to_json(sf);
  StateFile back = state_from_json(text);
  CHECK(back.params.omega_r == p.omega_r);
  CHECK(back.params.two_photon_detuning == p.two_photon_detuning);
  CHECK(back.state.coeffs.stacked() == sf.state.coeffs.stacked());
  CHECK(back.state.cavity.vec() == sf.state.cavity.vec());
  CHECK(back.state.mu == sf.state.mu);
  CHECK(back.state.basis.J == 6);
  CHECK(state_to_json(back) == text);
  CHECK_THROWS_AS(state_from_json("{\"params\": 3}"), Error);
  CHECK_THROWS_AS(state_from_json("not json"), Error);
  CHECK_THROWS_AS(read_text_file("/nonexistent/rcsoc/x.json"), Error);
}

TEST_CASE("parameter JSON keeps defaults for missing keys") {
  ModelParams p = params_from_json("{\"delta_a\": -7, \"omega_r\": [-0.5, 0.25]}");
  CHECK(p.delta_a == -7.0);
  CHECK(p.delta_b == ModelParams{}.delta_b);
  CHECK(p.omega_r == cplx(-0.5, 0.25));
  CHECK(params_from_json("{\"omega_r\": -2}").omega_r == cplx(-2.0, 0.0));
  CHECK(params_from_json(params_to_json(p)).omega_r == p.omega_r);
}

TEST_CASE("rendering is a pure function of the CSV") {
  SweepSpec s = small_spec();
  SweepResult r = run_sweep(s);
  const std::string phase = phase_points_csv(r), bnd = boundaries_csv(detect_boundaries(r));
  const std::string svg = render_phase_diagram(phase, bnd, "abs_nw_dn");
  CHECK(svg == render_phase_diagram(phase, bnd, "abs_nw_dn"));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find(phase.substr(0, 40)) != std::string::npos);  // data rides along
  CHECK(svg != render_phase_diagram(phase, bnd, "abs_alpha_m"));
  const std::string cut = render_cut(phase, {"abs_s_plus", "abs_alpha_m", "winding"});
  CHECK(cut == render_cut(phase, {"abs_s_plus", "abs_alpha_m", "winding"}));
  CHECK(render_momenta(momenta_csv(r)).find("</svg>") != std::string::npos);
  CHECK_THROWS_AS(render_phase_diagram(phase, bnd, "no_such_column"), Error);

  CsvTable t = parse_csv(phase);
  CHECK(t.rows.size() == 8);
  CHECK(t.header.at(t.column("label")) == "label");
}
