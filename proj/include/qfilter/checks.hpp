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
#include <string>
#include <utility>
#include <vector>

namespace qfilter {

/// One named check. `passed` is authoritative; `measured` and `tolerance`
/// are the headline numbers (details carry any further figures). All
/// numbers are rendered with shortest round-trip formatting so summaries
/// are byte-reproducible.
struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;  // single line
};

struct CheckOptions {
  std::uint64_t master_seed = 20260814;
  /// Shrinks the Monte Carlo ensembles so the whole suite runs in seconds.
  /// Statistical bounds are scaled with the sample sizes.
  bool quick = false;
  /// Test-only hook: flips the sign of dA·dA† in the Itô table used by the
  /// unitarity check, which must then fail and name the surviving slot.
  bool fault_ito_sign = false;
};

struct RunSummary {
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<CheckResult> checks;
  std::size_t diverged = 0;  // trajectories excluded across all ensembles
  /// Console display only; never serialized, to keep summaries
  /// byte-identical between runs.
  double wall_seconds = 0.0;
};

/// Runs the full suite (symbolic identities, integrator accuracy, probe
/// statistics, filter equivalence, determinism) in a fixed order.
RunSummary run_all_checks(const CheckOptions& opts);

bool all_checks_passed(const RunSummary& summary);

/// Aligned human-readable table, one row per check.
std::string render_check_table(const RunSummary& summary);

/// Structured key-value summary file contents (config echo, counts, one
/// block per check). Excludes wall time by design.
std::string render_summary_file(const RunSummary& summary);

}  // namespace qfilter
