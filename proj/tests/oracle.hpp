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


// Reference implementations for the tests. Everything here is written from the
// model definitions with direct Fourier sums and grid quadrature; nothing calls
// into the library except for the plain data types.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "rcsoc/model.hpp"

namespace oracle {

using rcsoc::cplx;
using rcsoc::CVec;
using rcsoc::ModelParams;
using Field = std::vector<cplx>;
using Amps = std::array<cplx, 4>;  // a+, a-, b+, b-

inline constexpr double kL = 2.0 * rcsoc::kPi;
inline const cplx kI{0.0, 1.0};

struct Grid {
  int J = 12;
  int ng = 128;
  double dz() const { return kL / ng; }
  double z(int i) const { return dz() * i; }
  int n() const { return 2 * J + 1; }
};

inline Field synth(const CVec& c, const Grid& g) {
  Field f(g.ng);
  for (int i = 0; i < g.ng; ++i) {
    cplx s = 0.0;
    for (int k = 0; k < g.n(); ++k) s += c[k] * std::exp(kI * double(k - g.J) * g.z(i));
    f[i] = s / std::sqrt(kL);
  }
  return f;
}

inline CVec analyze(const Field& f, const Grid& g) {
  CVec c(g.n());
  for (int k = 0; k < g.n(); ++k) {
    cplx s = 0.0;
    for (int i = 0; i < g.ng; ++i) s += f[i] * std::exp(-kI * double(k - g.J) * g.z(i));
    c[k] = s * g.dz() / std::sqrt(kL);
  }
  return c;
}

struct Moments {
  double n_dn = 0, n_up = 0;
  cplx nw_dn, nw_up, s_minus, sw_p, sw_m;
};

// e^{+2iz} weights throughout (the library's orientation).
inline Moments moments(const Field& d, const Field& u, const Grid& g) {
  Moments m;
  for (int i = 0; i < g.ng; ++i) {
    const cplx e = std::exp(2.0 * kI * g.z(i));
    m.n_dn += std::norm(d[i]);
    m.n_up += std::norm(u[i]);
    m.nw_dn += e * std::norm(d[i]);
    m.nw_up += e * std::norm(u[i]);
    m.s_minus += std::conj(d[i]) * u[i];
    m.sw_p += std::conj(e) * std::conj(d[i]) * u[i];
    m.sw_m += e * std::conj(d[i]) * u[i];
  }
  const double h = g.dz();
  m.n_dn *= h; m.n_up *= h;
  m.nw_dn *= h; m.nw_up *= h; m.s_minus *= h; m.sw_p *= h; m.sw_m *= h;
  return m;
}

struct Profiles {
  std::vector<double> ud, uu;
  Field raman;
};

// Light shifts and Raman coupling seen by the atoms for given intracavity fields.
inline Profiles profiles(const Amps& a, const ModelParams& p, const Grid& g) {
  Profiles q;
  q.ud.resize(g.ng); q.uu.resize(g.ng); q.raman.resize(g.ng);
  for (int i = 0; i < g.ng; ++i) {
    const cplx ep = std::exp(kI * g.z(i)), em = std::conj(ep);
    // field of each polarization along the cavity: a+ runs as e^{-iz}, a- as e^{+iz}
    const cplx fa = a[0] * em + a[1] * ep;
    const cplx fb = a[2] * em + a[3] * ep;
    q.ud[i] = p.u0_dn * std::norm(fa);
    q.uu[i] = p.u0_up * std::norm(fb);
    q.raman[i] = p.omega_r * std::conj(fa) * fb;
  }
  return q;
}

// Atom-light interaction energy for fixed atoms as a function of the fields.
inline double coupling_energy(const Field& d, const Field& u, const Amps& a, const ModelParams& p,
                              const Grid& g) {
  const Profiles q = profiles(a, p, g);
  double w = 0.0;
  for (int i = 0; i < g.ng; ++i)
    w += q.ud[i] * std::norm(d[i]) + q.uu[i] * std::norm(u[i]) +
         2.0 * (std::conj(d[i]) * q.raman[i] * u[i]).real();
  return w * g.dz();
}

// Wirtinger derivative dW/d conj(a_r); W is quadratic so central differences are exact up to rounding.
inline Amps coupling_gradient(const Field& d, const Field& u, const Amps& a, const ModelParams& p,
                              const Grid& g) {
  Amps out{};
  const double h = 1e-3;
  for (int r = 0; r < 4; ++r) {
    Amps xp = a, xm = a, yp = a, ym = a;
    xp[r] += h; xm[r] -= h; yp[r] += kI * h; ym[r] -= kI * h;
    const double dx = (coupling_energy(d, u, xp, p, g) - coupling_energy(d, u, xm, p, g)) / (2 * h);
    const double dy = (coupling_energy(d, u, yp, p, g) - coupling_energy(d, u, ym, p, g)) / (2 * h);
    out[r] = 0.5 * (dx + kI * dy);
  }
  return out;
}

// da/dt for damped, pumped modes at fixed atoms.
inline Amps cavity_rhs(const Field& d, const Field& u, const Amps& a, const ModelParams& p, const Grid& g) {
  const Amps grad = coupling_gradient(d, u, a, p, g);
  const double det[4] = {p.delta_a, p.delta_a, p.delta_b, p.delta_b};
  const double eta[4] = {p.eta_p, 0.0, 0.0, p.eta_m};
  Amps r{};
  for (int k = 0; k < 4; ++k) r[k] = (kI * det[k] - p.kappa) * a[k] - kI * grad[k] + eta[k];
  return r;
}

// W is a Hermitian form in the amplitudes, so the gradient is T a; columns of T from unit fields.
using Form = std::array<std::array<cplx, 4>, 4>;
inline Form coupling_form(const Field& d, const Field& u, const ModelParams& p, const Grid& g) {
  Form t{};
  for (int s = 0; s < 4; ++s) {
    Amps e{};
    e[s] = 1.0;
    const Amps col = coupling_gradient(d, u, e, p, g);
    for (int r = 0; r < 4; ++r) t[r][s] = col[r];
  }
  return t;
}

// RK4 on da/dt = (i Delta - kappa) a - i T a + eta.
inline Amps integrate_cavity(const Field& d, const Field& u, Amps a, const ModelParams& p, const Grid& g,
                             double t, double dt) {
  const Form T = coupling_form(d, u, p, g);
  const double det[4] = {p.delta_a, p.delta_a, p.delta_b, p.delta_b};
  const double eta[4] = {p.eta_p, 0.0, 0.0, p.eta_m};
  auto rhs = [&](const Amps& x) {
    Amps r{};
    for (int k = 0; k < 4; ++k) {
      cplx ta = 0.0;
      for (int s = 0; s < 4; ++s) ta += T[k][s] * x[s];
      r[k] = (kI * det[k] - p.kappa) * x[k] - kI * ta + eta[k];
    }
    return r;
  };
  auto add = [](const Amps& x, const Amps& y, double s) {
    Amps r; for (int k = 0; k < 4; ++k) r[k] = x[k] + s * y[k]; return r;
  };
  const long n = std::lround(t / dt);
  for (long s = 0; s < n; ++s) {
    const Amps k1 = rhs(a);
    const Amps k2 = rhs(add(a, k1, dt / 2));
    const Amps k3 = rhs(add(a, k2, dt / 2));
    const Amps k4 = rhs(add(a, k3, dt));
    for (int k = 0; k < 4; ++k) a[k] += dt / 6 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
  }
  return a;
}

// H psi on the grid: kinetic j^2 via a direct Fourier sum, the rest pointwise.
inline void apply_h(const Field& d, const Field& u, const Amps& a, const ModelParams& p, const Grid& g,
                    Field& hd, Field& hu) {
  auto kin = [&](const Field& f) {
    Grid wide{g.ng / 2 - 1, g.ng};
    CVec c = analyze(f, wide);
    for (int k = 0; k < wide.n(); ++k) c[k] *= double(k - wide.J) * double(k - wide.J);
    return synth(c, wide);
  };
  const Profiles q = profiles(a, p, g);
  hd = kin(d);
  hu = kin(u);
  for (int i = 0; i < g.ng; ++i) {
    hd[i] += (q.ud[i] - 0.5 * p.two_photon_detuning) * d[i] + q.raman[i] * u[i];
    hu[i] += (q.uu[i] + 0.5 * p.two_photon_detuning) * u[i] + std::conj(q.raman[i]) * d[i];
  }
}

// Full mean-field flow in the frame rotating at mu. X = (c_dn, c_up, a).
inline CVec flow(const CVec& X, const ModelParams& p, const Grid& g, double mu) {
  const int n = g.n();
  const Field d = synth(X.head(n), g), u = synth(X.segment(n, n), g);
  const Amps a{X[2 * n], X[2 * n + 1], X[2 * n + 2], X[2 * n + 3]};
  Field hd, hu;
  apply_h(d, u, a, p, g, hd, hu);
  CVec out(2 * n + 4);
  out.head(n) = -kI * (analyze(hd, g) - mu * X.head(n));
  out.segment(n, n) = -kI * (analyze(hu, g) - mu * X.segment(n, n));
  const Amps r = cavity_rhs(d, u, a, p, g);
  for (int k = 0; k < 4; ++k) out[2 * n + k] = r[k];
  return out;
}

// Random normalized coefficients on |j| <= jmax.
inline CVec random_coeffs(std::mt19937_64& rng, int J, int jmax) {
  std::normal_distribution<double> nd;
  CVec c = CVec::Zero(2 * J + 1);
  for (int j = -jmax; j <= jmax; ++j) c[j + J] = cplx(nd(rng), nd(rng));
  return c;
}

}  // namespace oracle
