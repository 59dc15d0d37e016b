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

namespace rcsoc {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int column(const std::string& name) const;  // InvalidArgument if absent
};

CsvTable parse_csv(const std::string& text);

// Heat map over (eta, delta) coloured by `column` of phase_points.csv, with boundary overlays
// (first-order solid, second-order dashed). boundaries_csv may be empty.
std::string render_phase_diagram(const std::string& phase_csv, const std::string& boundaries_csv,
                                 const std::string& column);

// Line plots against eta for the first Delta row in the file.
std::string render_cut(const std::string& phase_csv, const std::vector<std::string>& columns);
std::string render_momenta(const std::string& momenta_csv);
std::string render_spectrum(const std::string& spectrum_csv, int n_branches);

}  // namespace rcsoc
