// Copyright 2026 The oqrw authors
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

#ifndef OQRW_IO_JSON_HPP
#define OQRW_IO_JSON_HPP

#include <string>

#include "reducibility.hpp"

namespace oqrw {

// Document formats.  Matrices are arrays of rows; an entry is either a bare
// real number or a two-element [re, im] array.  Writers always emit the
// [re, im] form.
//
// model:    {"kind": "explicit",  "hdim": d, "sites": [...],
//            "ops": [{"from": j, "to": i, "matrix": ...}, ...]}
//           {"kind": "lattice1d", "hdim": d, "window": W,
//            "offsets": [{"offset": o, "matrix": ...}, ...]}
//           {"kind": "classical", "P": [[...], ...]}
// state:    {"blocks": [{"site": j, "matrix": ...}, ...]}
// cylinder: {"factors": [[{"site": j, "matrix": ...}, ...], ...]}
//           one inner list per step; unlisted sites act as identity.

Model load_model_json(const std::string& text);
Model load_model_file(const std::string& path);

BlockState load_state_json(const std::string& text);
BlockState load_state_file(const std::string& path);

CylinderObservable load_cylinder_json(const std::string& text);
CylinderObservable load_cylinder_file(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

std::string state_to_json(const BlockState& s);
std::string validation_to_json(const ValidationReport& r);

// One row per (step, occupied site): "step,site,probability" with 17
// significant digits, steps ascending then sites ascending.
std::string distribution_csv(const Trajectory& t);

// Value plus convergence and consistency diagnostics of one evaluation.
std::string qmc_report_json(const QmcValue& v, const MarkovPairReport& pair);

std::string analysis_to_json(const Analysis& a);
std::string classes_to_json(const ClassicalClasses& c);
std::string invariant_to_json(const InvariantInfo& info, const BlockState* s);

}  // namespace oqrw

#endif  // OQRW_IO_JSON_HPP
