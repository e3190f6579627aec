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

// Benchmark: serial reference vs OpenMP trajectory ensemble, with a
// byte-equality check between the two accumulations.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "qfilter/simulate.hpp"

namespace {

double run_timed(const qfilter::SimulationSpec& spec, qfilter::ExecMode mode,
                 qfilter::EnsembleResult& out) {
  const auto start = std::chrono::steady_clock::now();
  out = qfilter::simulate_ensemble(spec, mode);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

bool identical(const qfilter::EnsembleResult& a,
               const qfilter::EnsembleResult& b) {
  if (a.n_traj != b.n_traj || a.observables.size() != b.observables.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.observables.size(); ++i) {
    if (a.observables[i].mean != b.observables[i].mean) return false;
    if (a.observables[i].std_error != b.observables[i].std_error) return false;
  }
  for (std::size_t k = 0; k < a.mean_states.states.size(); ++k) {
    if (a.mean_states.states[k].mat() != b.mean_states.states[k].mat()) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qfilter;
  const std::size_t n_traj =
      argc > 1 ? static_cast<std::size_t>(std::atoll(argv[1])) : 2000;
  const std::size_t n_steps =
      argc > 2 ? static_cast<std::size_t>(std::atoll(argv[2])) : 2000;

  SimulationSpec spec;
  spec.model = make_model(Operator::Zero(2, 2), sigma_minus(),
                          DensityMatrix::checked(projector(2, 0)),
                          Detection::kHomodyne);
  spec.grid = TimeGrid{0.0, 1e-3, n_steps};
  spec.n_traj = n_traj;
  spec.master_seed = 20260814;
  spec.observables = {{"sigma_z", pauli_z()}};

  std::printf("qubit decay homodyne ensemble: %zu trajectories x %zu steps\n",
              n_traj, n_steps);
  EnsembleResult serial, parallel;
  const double t_serial = run_timed(spec, ExecMode::kSerial, serial);
  const double t_parallel = run_timed(spec, ExecMode::kParallel, parallel);
  const bool match = identical(serial, parallel);

  std::printf("  serial   %8.3f s  (%.1f ktraj-steps/s)\n", t_serial,
              n_traj * n_steps / t_serial / 1e3);
  std::printf("  parallel %8.3f s  (%.1f ktraj-steps/s)\n", t_parallel,
              n_traj * n_steps / t_parallel / 1e3);
  std::printf("  speedup  %8.2fx\n", t_serial / t_parallel);
  std::printf("  accumulations byte-identical: %s\n", match ? "yes" : "NO");
  return match ? 0 : 1;
}
