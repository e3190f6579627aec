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
#include <optional>
#include <string>

namespace qfilter {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDiverged = 3;

struct CliOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides the config's master_seed
  bool quiet = false;
  std::string record_path;  // filter subcommand input
};

/// Each command validates fully, builds every output in memory, and only
/// then writes files; a failure leaves the output directory untouched.
/// Errors are printed to stderr and mapped onto the exit codes above.
int cmd_simulate(const CliOptions& options);
int cmd_filter(const CliOptions& options);
int cmd_check(const CliOptions& options);
int cmd_symbolic(const CliOptions& options);

}  // namespace qfilter
