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

#include "rcsoc/state_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rcsoc {
namespace {

using nlohmann::json;

json cj(cplx z) { return json::array({z.real(), z.imag()}); }

cplx jc(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorCode::InvalidArgument, "expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json vj(const CVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(cj(v(i)));
  return a;
}

CVec jv(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidArgument, "expected array of [re, im]");
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = jc(j[i]);
  return v;
}

json pj(const ModelParams& p) {
  return json{{"delta_a", p.delta_a},
              {"delta_b", p.delta_b},
              {"eta_p", p.eta_p},
              {"eta_m", p.eta_m},
              {"u0_dn", p.u0_dn},
              {"u0_up", p.u0_up},
              {"omega_r", cj(p.omega_r)},
              {"kappa", p.kappa},
              {"two_photon_detuning", p.two_photon_detuning}};
}

// Missing keys keep their defaults.
ModelParams jp(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "params must be an object");
  ModelParams p;
  auto num = [&](const char* k, double& dst) {
    if (j.contains(k)) {
      if (!j[k].is_number()) throw Error(ErrorCode::InvalidArgument, std::string("params.") + k + " not a number");
      dst = j[k].get<double>();
    }
  };
  num("delta_a", p.delta_a);
  num("delta_b", p.delta_b);
  num("eta_p", p.eta_p);
  num("eta_m", p.eta_m);
  num("u0_dn", p.u0_dn);
  num("u0_up", p.u0_up);
  num("kappa", p.kappa);
  num("two_photon_detuning", p.two_photon_detuning);
  if (j.contains("omega_r")) {
    if (j["omega_r"].is_number())
      p.omega_r = j["omega_r"].get<double>();
    else
      p.omega_r = jc(j["omega_r"]);
  }
  return p;
}

SolveStatus parse_status(const std::string& s) {
  if (s == status_name(SolveStatus::Converged)) return SolveStatus::Converged;
  if (s == status_name(SolveStatus::NonConvergence)) return SolveStatus::NonConvergence;
  if (s == status_name(SolveStatus::Diverged)) return SolveStatus::Diverged;
  throw Error(ErrorCode::InvalidArgument, "unknown status '" + s + "'");
}

}  // namespace

std::string params_to_json(const ModelParams& p) { return pj(p).dump(2); }

ModelParams params_from_json(const std::string& text) {
  try {
    return jp(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad params JSON: ") + e.what());
  }
}

std::string state_to_json(const StateFile& s) {
  const SteadyState& ss = s.state;
  json j;
  j["params"] = pj(s.params);
  j["basis"] = {{"J", ss.basis.J}, {"n_grid", ss.basis.n_grid}};
  j["c_dn"] = vj(ss.coeffs.c_dn);
  j["c_up"] = vj(ss.coeffs.c_up);
  j["alpha_p"] = cj(ss.cavity.alpha_p);
  j["alpha_m"] = cj(ss.cavity.alpha_m);
  j["beta_p"] = cj(ss.cavity.beta_p);
  j["beta_m"] = cj(ss.cavity.beta_m);
  j["mu"] = ss.mu;
  j["mu_imag"] = ss.mu_imag;
  j["residual"] = ss.residual;
  j["iterations"] = ss.iterations;
  j["seed"] = ss.seed;
  j["status"] = status_name(ss.status);
  return j.dump(2) + "\n";
}

StateFile state_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    StateFile f;
    if (j.contains("params")) f.params = jp(j.at("params"));
    SteadyState& ss = f.state;
    ss.basis.J = j.at("basis").at("J").get<int>();
    ss.basis.n_grid = j.at("basis").at("n_grid").get<int>();
    ss.basis.validate();
    ss.coeffs.c_dn = jv(j.at("c_dn"));
    ss.coeffs.c_up = jv(j.at("c_up"));
    if (ss.coeffs.c_dn.size() != ss.basis.size() || ss.coeffs.c_up.size() != ss.basis.size())
      throw Error(ErrorCode::DimensionMismatch, "coefficient count does not match basis");
    ss.cavity.alpha_p = jc(j.at("alpha_p"));
    ss.cavity.alpha_m = jc(j.at("alpha_m"));
    ss.cavity.beta_p = jc(j.at("beta_p"));
    ss.cavity.beta_m = jc(j.at("beta_m"));
    ss.mu = j.value("mu", 0.0);
    ss.mu_imag = j.value("mu_imag", 0.0);
    ss.residual = j.value("residual", 0.0);
    ss.iterations = j.value("iterations", 0L);
    ss.seed = j.value("seed", std::uint64_t{0});
    ss.status = parse_status(j.value("status", std::string(status_name(SolveStatus::Converged))));
    return f;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad state JSON: ") + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace rcsoc
