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

// Acceptance gate. Runs the full check suite twice at the pinned seed and
// prints one line per acceptance criterion. Two criteria fail by design of
// the first-order integration scheme (see README, "Known limitations"); the
// default exit status is 0 exactly when the observed pass/fail pattern
// matches that documented expectation, so any regression in the passing
// criteria and any silent change in the failing ones both trip the gate.
// With --strict the exit status is 0 only if all twelve criteria pass.

#include <algorithm>
#include <cstring>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "qfilter/checks.hpp"

using namespace qfilter;

namespace {

const CheckResult& find_check(const RunSummary& summary, const char* name) {
  auto it = std::find_if(summary.checks.begin(), summary.checks.end(),
                         [&](const CheckResult& c) { return c.name == name; });
  if (it == summary.checks.end()) {
    std::cerr << "acceptance: missing check '" << name << "'\n";
    std::exit(2);
  }
  return *it;
}

struct Criterion {
  int number;
  std::string label;
  bool expected_pass;
  bool passed;
  std::string detail;
};

Criterion from_check(int number, std::string label, bool expected_pass,
                     const CheckResult& c) {
  return {number, std::move(label), expected_pass, c.passed, c.detail};
}

Criterion from_checks(int number, std::string label, bool expected_pass,
                      const CheckResult& a, const CheckResult& b) {
  return {number, std::move(label), expected_pass, a.passed && b.passed,
          a.detail + "; " + b.detail};
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else {
      std::cerr << "usage: qfilter_acceptance [--strict]\n";
      return 2;
    }
  }

  CheckOptions options;  // full scale, seed 20260814
  std::cout << "qfilter acceptance: running the full check suite twice "
               "(seed "
            << options.master_seed << ") ...\n"
            << std::flush;
  const RunSummary first = run_all_checks(options);
  const RunSummary second = run_all_checks(options);
  const bool reruns_identical =
      render_summary_file(first) == render_summary_file(second);

  std::vector<Criterion> criteria;
  criteria.push_back(from_check(1, "Ito table exhaustiveness", true,
                                find_check(first, "ito_table_exhaustive")));
  criteria.push_back(from_check(2, "unitarity of the HP solution", true,
                                find_check(first, "hp_unitarity_random")));
  criteria.push_back(from_check(3, "Lindblad drift of the flow", true,
                                find_check(first, "flow_lindblad_drift")));
  criteria.push_back(from_check(4, "generator duality", true,
                                find_check(first, "generator_duality")));
  criteria.push_back(from_checks(5, "master-equation accuracy", true,
                                 find_check(first, "master_decay_endpoint"),
                                 find_check(first, "master_rk4_order")));
  criteria.push_back(from_checks(6, "trajectory unbiasedness", false,
                                 find_check(first, "unbiased_decay"),
                                 find_check(first, "unbiased_rabi")));
  criteria.push_back(from_check(7, "Zakai/normalized equivalence", false,
                                find_check(first, "zakai_equivalence")));
  criteria.push_back(from_check(8, "Wiener probe statistics", true,
                                find_check(first, "wiener_statistics")));
  criteria.push_back(from_check(9, "Poisson probe statistics", true,
                                find_check(first, "poisson_statistics")));
  criteria.push_back(from_check(10, "first-jump law", true,
                                find_check(first, "first_jump_law")));
  criteria.push_back(from_check(11, "innovation orthogonality", true,
                                find_check(first, "innovation_orthogonality")));
  Criterion determinism = from_check(12, "determinism", true,
                                     find_check(first, "replay_determinism"));
  determinism.passed = determinism.passed && reruns_identical;
  determinism.detail +=
      reruns_identical ? "; two full runs render byte-identical summaries"
                       : "; two full runs RENDER DIFFERENT SUMMARIES";
  criteria.push_back(determinism);

  std::cout << '\n';
  bool all_pass = true;
  bool as_documented = true;
  for (const Criterion& c : criteria) {
    all_pass = all_pass && c.passed;
    as_documented = as_documented && (c.passed == c.expected_pass);
    std::cout << "criterion " << std::setw(2) << c.number << "  "
              << std::left << std::setw(34) << c.label << std::right
              << (c.passed ? "PASS" : "FAIL") << "  " << c.detail;
    if (!c.passed && !c.expected_pass) {
      std::cout << "  [known failure of the first-order scheme]";
    }
    std::cout << '\n';
  }

  const int n_pass = static_cast<int>(
      std::count_if(criteria.begin(), criteria.end(),
                    [](const Criterion& c) { return c.passed; }));
  std::cout << '\n'
            << n_pass << "/" << criteria.size() << " criteria pass\n";
  if (!all_pass) {
    std::cout
        << "criteria 6 and 7 fail with the first-order stochastic scheme: the\n"
           "per-step positivity clamp biases the ensemble mean, and the\n"
           "normalized/linear Euler pair separates pathwise at strong order\n"
           "1/2. See the \"Known limitations\" section of the README and the\n"
           "failing checks' detail lines above for the measured sizes.\n";
  }
  if (strict) {
    std::cout << "strict mode: exit 0 requires all 12 criteria to pass\n";
    return all_pass ? 0 : 1;
  }
  std::cout << (as_documented
                    ? "observed pattern matches the documented expectation\n"
                    : "observed pattern DOES NOT match the documented "
                      "expectation\n");
  return as_documented ? 0 : 1;
}
