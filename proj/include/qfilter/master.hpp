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

#include <cstddef>
#include <vector>

#include "qfilter/operators.hpp"

namespace qfilter {

/// Uniform time grid: points t0 + k*dt for k = 0..n_steps.
struct TimeGrid {
  double t0 = 0.0;
  double dt = 0.0;
  std::size_t n_steps = 0;

  double time_at(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
  double horizon() const { return time_at(n_steps); }
};

/// Throws std::invalid_argument unless dt > 0, n_steps >= 1 and the
/// horizon is finite.
void validate_grid(const TimeGrid& grid);

bool operator==(const TimeGrid& a, const TimeGrid& b);

struct StateTrajectory {
  TimeGrid grid;
  std::vector<DensityMatrix> states;  // n_steps + 1 entries
};

enum class OdeMethod { kEuler, kRk4 };

/// One integration step of drho/dt = L*(rho) before repair; exposed so
/// tests can probe pre-repair trace and positivity drift.
Operator master_step_raw(const SystemModel& m, const Operator& rho, double dt,
                         OdeMethod method);

/// Integrates the unconditional master equation, repairing each state
/// through nearest_density. Non-finite entries abort with the step index
/// attached (DivergenceError).
StateTrajectory integrate_master(const SystemModel& m, const TimeGrid& grid,
                                 OdeMethod method = OdeMethod::kRk4);

}  // namespace qfilter
