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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfilter/master.hpp"
#include "qfilter/operators.hpp"
#include "qfilter/simulate.hpp"

namespace qfilter {

/// Carries every problem found in one parse, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);

  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// A fully validated scenario: the model and run parameters are already
/// built, so downstream commands never re-validate. `echo` preserves the
/// normalized key-value view for summaries.
struct ScenarioConfig {
  SystemModel model;
  TimeGrid grid;
  std::size_t n_traj = 1;
  std::uint64_t master_seed = 1;
  std::vector<NamedObservable> observables;
  std::size_t records_limit = 1;
  bool plots = false;
  std::string preset;  // empty for explicit models
  std::vector<std::pair<std::string, std::string>> echo;
};

/// Parses the declarative key-value format (see README). Throws
/// ConfigError listing every syntax and semantic problem found.
ScenarioConfig parse_config(const std::string& text);

}  // namespace qfilter
