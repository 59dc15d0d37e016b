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

#include "rcsoc/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "rcsoc/error.hpp"

namespace rcsoc {
namespace {

constexpr double W = 640, H = 420, ML = 70, MR = 150, MT = 40, MB = 50;

double num(const std::string& s) {
  try {
    return std::stod(s);
  } catch (...) {
    throw Error(ErrorCode::InvalidArgument, "not a number in CSV: '" + s + "'");
  }
}

std::string fmt(const char* f, double v) {
  char b[64];
  std::snprintf(b, sizeof b, f, v);
  return b;
}

std::string provenance(const std::string& name, const std::string& csv) {
  std::string body = csv;
  for (std::size_t p = body.find("--"); p != std::string::npos; p = body.find("--", p)) body.replace(p, 2, "- -");
  return "<!-- data: " + name + "\n" + body + "-->\n";
}

struct Axes {
  double x0, x1, y0, y1;
  double px(double x) const { return ML + (x1 > x0 ? (x - x0) / (x1 - x0) : 0.5) * (W - ML - MR); }
  double py(double y) const { return H - MB - (y1 > y0 ? (y - y0) / (y1 - y0) : 0.5) * (H - MT - MB); }
};

std::string open_svg(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", W) + "\" height=\"" + fmt("%.0f", H) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         "<text x=\"" + fmt("%.0f", W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + title + "</text>\n";
}

std::string frame(const Axes& a, const std::string& xl, const std::string& yl) {
  std::string s;
  s += "<rect x=\"" + fmt("%.1f", ML) + "\" y=\"" + fmt("%.1f", MT) + "\" width=\"" + fmt("%.1f", W - ML - MR) +
       "\" height=\"" + fmt("%.1f", H - MT - MB) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double x = a.x0 + (a.x1 - a.x0) * k / 4, y = a.y0 + (a.y1 - a.y0) * k / 4;
    s += "<text x=\"" + fmt("%.1f", a.px(x)) + "\" y=\"" + fmt("%.1f", H - MB + 16) + "\" text-anchor=\"middle\">" +
         fmt("%.3g", x) + "</text>\n";
    s += "<text x=\"" + fmt("%.1f", ML - 6) + "\" y=\"" + fmt("%.1f", a.py(y) + 4) + "\" text-anchor=\"end\">" +
         fmt("%.3g", y) + "</text>\n";
  }
  s += "<text x=\"" + fmt("%.1f", ML + (W - ML - MR) / 2) + "\" y=\"" + fmt("%.1f", H - 12) +
       "\" text-anchor=\"middle\">" + xl + "</text>\n";
  s += "<text x=\"16\" y=\"" + fmt("%.1f", MT + (H - MT - MB) / 2) + "\" transform=\"rotate(-90 16 " +
       fmt("%.1f", MT + (H - MT - MB) / 2) + ")\" text-anchor=\"middle\">" + yl + "</text>\n";
  return s;
}

// viridis-like ramp through five anchors
std::string colour(double t) {
  static const double c[5][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(t));
  const double f = t - i;
  char b[16];
  std::snprintf(b, sizeof b, "#%02x%02x%02x", int(c[i][0] + f * (c[i + 1][0] - c[i][0])),
                int(c[i][1] + f * (c[i + 1][1] - c[i][1])), int(c[i][2] + f * (c[i + 1][2] - c[i][2])));
  return b;
}

const char* palette(std::size_t k) {
  static const char* p[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                            "#8c564b", "#e377c2", "#7f7f7f", "#17becf", "#bcbd22"};
  return p[k % 10];
}

struct Series {
  std::string name;
  std::vector<double> x, y;
};

std::string line_plot(const std::string& title, const std::string& xl, const std::string& yl,
                      const std::vector<Series>& ss, const std::string& prov) {
  Axes a{1e300, -1e300, 1e300, -1e300};
  for (const Series& s : ss)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      a.x0 = std::min(a.x0, s.x[i]);
      a.x1 = std::max(a.x1, s.x[i]);
      a.y0 = std::min(a.y0, s.y[i]);
      a.y1 = std::max(a.y1, s.y[i]);
    }
  if (a.x0 > a.x1) a = {0, 1, 0, 1};
  if (a.y1 - a.y0 < 1e-12) a.y1 = a.y0 + 1.0;
  std::string out = open_svg(title) + prov + frame(a, xl, yl);
  for (std::size_t k = 0; k < ss.size(); ++k) {
    std::string pts;
    for (std::size_t i = 0; i < ss[k].x.size(); ++i)
      if (std::isfinite(ss[k].y[i])) pts += fmt("%.2f", a.px(ss[k].x[i])) + "," + fmt("%.2f", a.py(ss[k].y[i])) + " ";
    out += "<polyline fill=\"none\" stroke=\"" + std::string(palette(k)) + "\" stroke-width=\"1.5\" points=\"" + pts +
           "\"/>\n";
    const double ly = MT + 14 + 16.0 * k;
    out += "<line x1=\"" + fmt("%.1f", W - MR + 10) + "\" x2=\"" + fmt("%.1f", W - MR + 30) + "\" y1=\"" +
           fmt("%.1f", ly - 4) + "\" y2=\"" + fmt("%.1f", ly - 4) + "\" stroke=\"" + palette(k) +
           "\" stroke-width=\"2\"/>\n<text x=\"" + fmt("%.1f", W - MR + 34) + "\" y=\"" + fmt("%.1f", ly) + "\">" +
           ss[k].name + "</text>\n";
  }
  return out + "</svg>\n";
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  throw Error(ErrorCode::InvalidArgument, "CSV has no column '" + name + "'");
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream is(text);
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    if (first) {
      t.header = std::move(f);
      first = false;
    } else {
      if (f.size() != t.header.size()) throw Error(ErrorCode::InvalidArgument, "ragged CSV row: " + line);
      t.rows.push_back(std::move(f));
    }
  }
  if (first) throw Error(ErrorCode::InvalidArgument, "empty CSV");
  return t;
}

std::string render_phase_diagram(const std::string& phase_csv, const std::string& boundaries_csv,
                                 const std::string& column) {
  const CsvTable t = parse_csv(phase_csv);
  const int ce = t.column("eta"), cd = t.column("delta"), cv = t.column(column);
  std::set<double> etas, deltas;
  double vmax = 0.0;
  for (const auto& r : t.rows) {
    etas.insert(num(r[ce]));
    deltas.insert(num(r[cd]));
    const double v = num(r[cv]);
    if (std::isfinite(v)) vmax = std::max(vmax, v);
  }
  const std::vector<double> ev(etas.begin(), etas.end()), dv(deltas.begin(), deltas.end());
  // cell edges halfway between grid values
  auto edges = [](const std::vector<double>& v) {
    std::vector<double> e(v.size() + 1);
    if (v.size() == 1) return std::vector<double>{v[0] - 0.5, v[0] + 0.5};
    for (std::size_t i = 1; i < v.size(); ++i) e[i] = 0.5 * (v[i - 1] + v[i]);
    e[0] = v[0] - (e[1] - v[0]);
    e.back() = v.back() + (v.back() - e[v.size() - 1]);
    return e;
  };
  const auto ee = edges(ev), de = edges(dv);
  const Axes a{ee.front(), ee.back(), de.front(), de.back()};
  std::string out = open_svg("|" + column + "| over (eta, Delta)") + provenance("phase_points.csv", phase_csv);
  if (!boundaries_csv.empty()) out += provenance("boundaries.csv", boundaries_csv);
  for (const auto& r : t.rows) {
    const std::size_t i = std::lower_bound(ev.begin(), ev.end(), num(r[ce])) - ev.begin();
    const std::size_t j = std::lower_bound(dv.begin(), dv.end(), num(r[cd])) - dv.begin();
    const double v = num(r[cv]);
    const double x0 = a.px(ee[i]), x1 = a.px(ee[i + 1]), y0 = a.py(de[j + 1]), y1 = a.py(de[j]);
    out += "<rect x=\"" + fmt("%.2f", x0) + "\" y=\"" + fmt("%.2f", y0) + "\" width=\"" + fmt("%.2f", x1 - x0 + 0.3) +
           "\" height=\"" + fmt("%.2f", y1 - y0 + 0.3) + "\" fill=\"" +
           (std::isfinite(v) ? colour(vmax > 0 ? v / vmax : 0.0) : std::string("#cccccc")) + "\"/>\n";
  }
  out += frame(a, "eta", "Delta");
  if (!boundaries_csv.empty()) {
    const CsvTable b = parse_csv(boundaries_csv);
    const int bf = b.column("from"), bt = b.column("to"), bd = b.column("delta"), be = b.column("eta"),
              bo = b.column("first_order");
    std::map<std::string, std::vector<std::pair<double, double>>> lines;
    std::map<std::string, bool> first;
    for (const auto& r : b.rows) {
      const std::string k = r[bf] + ">" + r[bt];
      lines[k].push_back({num(r[bd]), num(r[be])});
      first[k] = first[k] || r[bo] == "1";
    }
    for (auto& [k, pts] : lines) {
      std::sort(pts.begin(), pts.end());
      std::string s;
      for (auto& [d, e] : pts) s += fmt("%.2f", a.px(e)) + "," + fmt("%.2f", a.py(d)) + " ";
      const bool fo = first[k];
      out += "<polyline fill=\"none\" stroke=\"" + std::string(fo ? "#e41a1c" : "#ffd700") + "\" stroke-width=\"2\"" +
             (fo ? "" : " stroke-dasharray=\"6,4\"") + " points=\"" + s + "\"/>\n";
      for (auto& [d, e] : pts)
        out += "<circle cx=\"" + fmt("%.2f", a.px(e)) + "\" cy=\"" + fmt("%.2f", a.py(d)) + "\" r=\"2\" fill=\"" +
               (fo ? "#e41a1c" : "#ffd700") + "\"/>\n";
    }
  }
  // colour bar
  for (int k = 0; k < 50; ++k) {
    const double y = MT + (H - MT - MB) * (1.0 - (k + 1) / 50.0);
    out += "<rect x=\"" + fmt("%.1f", W - MR + 20) + "\" y=\"" + fmt("%.2f", y) + "\" width=\"16\" height=\"" +
           fmt("%.2f", (H - MT - MB) / 50.0 + 0.3) + "\" fill=\"" + colour((k + 0.5) / 50.0) + "\"/>\n";
  }
  out += "<text x=\"" + fmt("%.1f", W - MR + 40) + "\" y=\"" + fmt("%.1f", MT + 10) + "\">" + fmt("%.3g", vmax) +
         "</text>\n<text x=\"" + fmt("%.1f", W - MR + 40) + "\" y=\"" + fmt("%.1f", H - MB) + "\">0</text>\n";
  return out + "</svg>\n";
}

std::string render_cut(const std::string& phase_csv, const std::vector<std::string>& columns) {
  const CsvTable t = parse_csv(phase_csv);
  const int ce = t.column("eta"), cd = t.column("delta");
  if (t.rows.empty()) throw Error(ErrorCode::InvalidArgument, "no rows to plot");
  const std::string d0 = t.rows.front()[cd];
  std::vector<Series> ss;
  for (const std::string& c : columns) {
    const int cc = t.column(c);
    Series s{c, {}, {}};
    for (const auto& r : t.rows)
      if (r[cd] == d0) {
        s.x.push_back(num(r[ce]));
        s.y.push_back(num(r[cc]));
      }
    ss.push_back(std::move(s));
  }
  return line_plot("cut at Delta = " + d0, "eta", "value", ss, provenance("phase_points.csv", phase_csv));
}

std::string render_momenta(const std::string& momenta_csv) {
  const CsvTable t = parse_csv(momenta_csv);
  const int ce = t.column("eta"), cd = t.column("delta");
  if (t.rows.empty()) throw Error(ErrorCode::InvalidArgument, "no rows to plot");
  const std::string d0 = t.rows.front()[cd];
  std::vector<Series> ss;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (t.header[c].rfind("abs_c_", 0) != 0) continue;
    Series s{t.header[c].substr(6), {}, {}};
    for (const auto& r : t.rows)
      if (r[cd] == d0) {
        s.x.push_back(num(r[ce]));
        s.y.push_back(num(r[c]));
      }
    ss.push_back(std::move(s));
  }
  return line_plot("momentum amplitudes, Delta = " + d0, "eta", "|c|", ss, provenance("momenta.csv", momenta_csv));
}

std::string render_spectrum(const std::string& spectrum_csv, int n_branches) {
  const CsvTable t = parse_csv(spectrum_csv);
  const int ce = t.column("eta"), cd = t.column("delta"), cb = t.column("branch_index"), cr = t.column("re_omega");
  std::string d0 = t.rows.empty() ? "" : t.rows.front()[cd];
  std::vector<Series> ss(static_cast<std::size_t>(std::max(1, n_branches)));
  for (std::size_t k = 0; k < ss.size(); ++k) ss[k].name = "branch " + std::to_string(k);
  for (const auto& r : t.rows) {
    if (r[cd] != d0) continue;
    const int b = static_cast<int>(num(r[cb]));
    if (b < 0 || b >= static_cast<int>(ss.size())) continue;
    ss[b].x.push_back(num(r[ce]));
    ss[b].y.push_back(num(r[cr]));
  }
  return line_plot("lowest excitations, Delta = " + d0, "eta", "Re omega", ss,
                   provenance("spectrum.csv", spectrum_csv));
}

}  // namespace rcsoc
