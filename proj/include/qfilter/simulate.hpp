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
#include <functional>
#include <string>
#include <vector>

#include "qfilter/filters.hpp"
#include "qfilter/master.hpp"
#include "qfilter/operators.hpp"

namespace qfilter {

struct NamedObservable {
  std::string name;
  Operator op;  // Hermitian within 1e-10
};

struct SimulationSpec {
  SystemModel model;
  TimeGrid grid;
  std::size_t n_traj = 1;
  std::uint64_t master_seed = 1;
  std::vector<NamedObservable> observables;
};

/// Throws std::invalid_argument on an invalid grid, n_traj = 0,
/// non-Hermitian or mis-sized observables, or a counting model whose
/// initial jump probability tr[L†L rho0]*dt exceeds 0.1 (the Bernoulli
/// thinning guard).
void validate_spec(const SimulationSpec& spec);

/// One simulated trajectory. `noise` holds the increments that actually
/// drove the filter: the roundtripped Wiener increments dy_k - signal*dt
/// (homodyne) or the compensated counts dN_k - rate*dt (counting);
/// innovations() recovers exactly these values from the record.
struct TrajectoryResult {
  std::uint64_t index = 0;
  ObservationRecord record;
  FilterTrajectory filter;
  std::vector<double> noise;
  bool diverged = false;
  std::size_t diverged_step = 0;
  std::string diverged_message;
};

struct DivergenceInfo {
  std::uint64_t trajectory_index = 0;
  std::size_t step = 0;
  std::string message;
};

struct ObservableSeries {
  std::string name;
  std::vector<double> mean;       // n_steps + 1 entries
  std::vector<double> std_error;  // sample std / sqrt(n); zero for n = 1
};

struct EnsembleResult {
  TimeGrid grid;
  std::size_t n_traj = 0;
  std::size_t n_diverged = 0;
  StateTrajectory mean_states;  // trajectory average, repaired
  std::vector<ObservableSeries> observables;
  std::vector<DivergenceInfo> divergences;
};

enum class ExecMode { kSerial, kParallel };

/// Simulates trajectory `index` of the ensemble (a pure function of spec
/// and index). A diverged trajectory is returned truncated with the
/// failure location filled in, not thrown.
TrajectoryResult simulate_trajectory(const SimulationSpec& spec,
                                     std::uint64_t index);

/// Runs all n_traj trajectories and hands each result to `sink` in
/// trajectory-index order. Parallel mode computes bounded-size blocks of
/// trajectories concurrently but still delivers in order, so any
/// accumulation done by the sink is bitwise identical to a serial run.
void for_each_trajectory(const SimulationSpec& spec, ExecMode mode,
                         const std::function<void(TrajectoryResult&&)>& sink);

/// Full per-trajectory results, homodyne detection. Memory grows with
/// n_traj * n_steps; prefer simulate_ensemble for large ensembles.
std::vector<TrajectoryResult> simulate_homodyne(const SimulationSpec& spec);

/// Full per-trajectory results, counting detection.
std::vector<TrajectoryResult> simulate_counting(const SimulationSpec& spec);

/// Pointwise state means and observable means with standard errors.
/// Diverged trajectories are excluded from the statistics and reported in
/// `divergences`.
EnsembleResult ensemble_average(const SimulationSpec& spec,
                                const std::vector<TrajectoryResult>& results);

/// Streaming ensemble run: accumulates the same statistics as
/// ensemble_average without retaining trajectories. Throws DivergenceError
/// when more than 0.1% of trajectories diverge.
EnsembleResult simulate_ensemble(const SimulationSpec& spec, ExecMode mode);

}  // namespace qfilter
