// Copyright 2026 The qfilter Authors
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

#include "qfilter/filters.hpp"

namespace qfilter {

/// Serializes an observation record as CSV: `# key=value` header lines
/// (detection, t0, dt, n_steps, and, when provenance is present,
/// master_seed and traj_index), a `k,dy` or `k,dN` column line, then one
/// row per step. Doubles use shortest round-trip formatting, so
/// parse_record(emit_record(r)) reproduces r exactly.
std::string emit_record(const ObservationRecord& record);

/// Inverse of emit_record. Throws std::invalid_argument with a line number
/// on malformed input, on missing header keys, and when the row count does
/// not match the declared n_steps (naming expected and found counts).
ObservationRecord parse_record(const std::string& text);

/// Whole-file helpers; both throw std::runtime_error naming the path.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qfilter
