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

#include "rcsoc/model.hpp"

namespace rcsoc {

// A steady state together with the parameters it was solved for.
struct StateFile {
  ModelParams params;
  SteadyState state;
};

std::string params_to_json(const ModelParams& p);
ModelParams params_from_json(const std::string& text);

// Complex numbers are [re, im] pairs; doubles round-trip exactly.
std::string state_to_json(const StateFile& s);
StateFile state_from_json(const std::string& text);  // InvalidArgument on malformed input

void write_text_file(const std::string& path, const std::string& text);  // Io
std::string read_text_file(const std::string& path);                     // Io

}  // namespace rcsoc
