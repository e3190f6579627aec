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

#include <cstdint>

#include "CLI11.hpp"
#include "qfilter/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qfilter: quantum filtering and trajectory simulation toolkit"};
  app.require_subcommand(1);

  qfilter::CliOptions options;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    CLI::Option* config =
        sub->add_option("--config", options.config_path, "scenario config file");
    if (config_required) config->required();
    sub->add_option("--out", options.out_dir, "output directory");
    sub->add_option("--seed", options.seed, "master seed override");
    sub->add_flag("--quiet", options.quiet, "suppress progress output");
  };

  CLI::App* simulate = app.add_subcommand(
      "simulate", "run a trajectory ensemble and write records/statistics");
  add_common(simulate, true);

  CLI::App* filter = app.add_subcommand(
      "filter", "replay a stored record through the normalized and linear filters");
  add_common(filter, true);
  filter->add_option("--record", options.record_path, "observation record CSV")
      ->required();

  CLI::App* check =
      app.add_subcommand("check", "run the full invariant and statistics suite");
  add_common(check, false);

  CLI::App* symbolic = app.add_subcommand(
      "symbolic", "print dU, d(U\xE2\x80\xA0U) and the observable flows");
  add_common(symbolic, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? qfilter::kExitOk : qfilter::kExitUsage;
  }

  if (app.got_subcommand(simulate)) return qfilter::cmd_simulate(options);
  if (app.got_subcommand(filter)) return qfilter::cmd_filter(options);
  if (app.got_subcommand(check)) return qfilter::cmd_check(options);
  return qfilter::cmd_symbolic(options);
}
