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

#include "qfilter/master.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qfilter {

void validate_grid(const TimeGrid& grid) {
  if (!(grid.dt > 0.0) || !std::isfinite(grid.dt)) {
    throw std::invalid_argument("time grid: dt must be positive and finite, got " +
                                std::to_string(grid.dt));
  }
  if (grid.n_steps == 0) {
    throw std::invalid_argument("time grid: n_steps must be at least 1");
  }
  if (!std::isfinite(grid.t0) || !std::isfinite(grid.horizon())) {
    throw std::invalid_argument("time grid: endpoints must be finite");
  }
}

bool operator==(const TimeGrid& a, const TimeGrid& b) {
  return a.t0 == b.t0 && a.dt == b.dt && a.n_steps == b.n_steps;
}

Operator master_step_raw(const SystemModel& m, const Operator& rho, double dt,
                         OdeMethod method) {
  switch (method) {
    case OdeMethod::kEuler:
      return rho + dt * lindblad_schrodinger(m, rho);
    case OdeMethod::kRk4: {
      const Operator k1 = lindblad_schrodinger(m, rho);
      const Operator k2 = lindblad_schrodinger(m, rho + (0.5 * dt) * k1);
      const Operator k3 = lindblad_schrodinger(m, rho + (0.5 * dt) * k2);
      const Operator k4 = lindblad_schrodinger(m, rho + dt * k3);
      return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  throw std::logic_error("master_step_raw: unknown method");
}

StateTrajectory integrate_master(const SystemModel& m, const TimeGrid& grid,
                                 OdeMethod method) {
  validate_grid(grid);
  StateTrajectory out;
  out.grid = grid;
  out.states.reserve(grid.n_steps + 1);
  out.states.push_back(m.initial_state);
  for (std::size_t k = 0; k < grid.n_steps; ++k) {
    Operator next = master_step_raw(m, out.states.back().mat(), grid.dt, method);
    if (!all_finite(next)) {
      throw DivergenceError("master equation produced non-finite state", k);
    }
    try {
      out.states.push_back(nearest_density(next));
    } catch (const DivergenceError& e) {
      throw DivergenceError(e.what(), k);
    }
  }
  return out;
}

}  // namespace qfilter
