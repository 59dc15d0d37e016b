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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rcsoc/bogoliubov.hpp"
#include "rcsoc/observables.hpp"

namespace rcsoc {

inline constexpr const char* kVersion = "0.1.0";

struct Range {
  double min = 0.0;
  double max = 0.0;
  int steps = 1;
  double at(int i) const { return steps > 1 ? min + (max - min) * i / (steps - 1) : min; }
};

enum class SweepDirection { Up, Down };  // order of eta within a Delta row

struct SweepSpec {
  Range eta{0.0, 60.0, 61};
  Range delta{-20.0, -20.0, 1};
  SolverConfig cfg;
  bool with_spectrum = false;
  int n_branches = 5;
  bool warm_start = true;
  SweepDirection direction = SweepDirection::Up;
  double tol_dw = 1e-4;
  double tol_im = 0.1;
  ModelParams base;            // everything but delta_a/b and eta_p/m
  std::string out_dir;         // empty: no files
  int jobs = 1;                // worker threads over Delta rows
  long max_points = -1;        // stop after this many fresh solves (simulated interrupt)

  void validate() const;
  ModelParams params_at(double eta, double delta) const;
  std::string canonical_json() const;  // excludes out_dir, jobs, max_points
  std::string hash() const;            // 16 hex digits
};

struct PointResult {
  int i_eta = 0;
  int i_delta = 0;
  bool done = false;
  bool failed = false;       // threw; re-queued on resume
  std::string error;
  PhasePoint point;
  SteadyState state;
  std::vector<Mode> branches;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<PointResult> points;  // row-major: i_delta * eta.steps + i_eta
  long solved = 0;                  // fresh solves in this run
  long reused = 0;                  // taken from the checkpoint
  bool complete = false;
  std::vector<std::string> warnings;

  const PointResult& at(int i_eta, int i_delta) const { return points[i_delta * spec.eta.steps + i_eta]; }
};

// One point: solve, classify, optionally the spectrum.
PointResult solve_point(const SweepSpec& spec, int i_eta, int i_delta, const SteadyState* warm);

// Also used by solve/classify commands.
PhasePoint analyze_state(const SteadyState& ss, double eta, double delta, double tol_dw,
                         StabilityFlag stab = {});

SweepResult run_sweep(const SweepSpec& spec);
SweepResult resume_sweep(const std::string& checkpoint_path, const SweepSpec* override_spec = nullptr);

struct BoundaryPoint {
  double delta = 0.0;
  double eta = 0.0;  // midpoint between the two grid points
  Phase from = Phase::UNCONVERGED;
  Phase to = Phase::UNCONVERGED;
  bool first_order = false;
  bool topological = false;
};

struct Boundary {
  Phase from, to;
  std::vector<BoundaryPoint> points;  // sorted by delta
};

std::vector<Boundary> detect_boundaries(const SweepResult& r);

// File bodies (deterministic).
std::string phase_points_csv(const SweepResult& r);
std::string spectrum_csv(const SweepResult& r);
std::string momenta_csv(const SweepResult& r);
std::string boundaries_csv(const std::vector<Boundary>& b);

}  // namespace rcsoc
