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

#include "qfilter/filters.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qfilter/detail/step_engine.hpp"

namespace qfilter {

namespace {

void require_step_args(double dt, double dy) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("step: dt must be positive and finite, got " +
                                std::to_string(dt));
  }
  if (!std::isfinite(dy)) {
    throw std::invalid_argument("step: observation increment is not finite");
  }
}

DensityMatrix repair_step(const Operator& raw) {
  if (!all_finite(raw)) {
    throw DivergenceError("filter step produced non-finite state");
  }
  return nearest_density(raw);
}

}  // namespace

void validate_record(const ObservationRecord& record) {
  validate_grid(record.grid);
  if (record.increments.size() != record.grid.n_steps) {
    throw std::invalid_argument(
        "observation record: " + std::to_string(record.increments.size()) +
        " increments for " + std::to_string(record.grid.n_steps) + " steps");
  }
  for (std::size_t k = 0; k < record.increments.size(); ++k) {
    const double v = record.increments[k];
    if (!std::isfinite(v)) {
      throw std::invalid_argument("observation record: non-finite increment at step " +
                                  std::to_string(k));
    }
    if (record.detection == Detection::kCounting && v != 0.0 && v != 1.0) {
      throw std::invalid_argument(
          "observation record: counting increment at step " + std::to_string(k) +
          " is " + std::to_string(v) + ", expected 0 or 1");
    }
  }
}

Operator homodyne_sme_step_raw(const SystemModel& m, const DensityMatrix& rho,
                               double dy, double dt) {
  require_step_args(dt, dy);
  detail::StepEngine engine(m);
  Operator out;
  engine.homodyne_step_raw(rho.mat(), dy, dt, out);
  return out;
}

DensityMatrix homodyne_sme_step(const SystemModel& m, const DensityMatrix& rho,
                                double dy, double dt) {
  return repair_step(homodyne_sme_step_raw(m, rho, dy, dt));
}

Operator counting_sme_step_raw(const SystemModel& m, const DensityMatrix& rho,
                               int dn, double dt) {
  require_step_args(dt, 0.0);
  if (dn != 0 && dn != 1) {
    throw std::invalid_argument("counting step: dN must be 0 or 1, got " +
                                std::to_string(dn));
  }
  detail::StepEngine engine(m);
  Operator smooth;
  engine.counting_smooth_raw(rho.mat(), dt, smooth);
  if (dn == 0) {
    return smooth;
  }
  Operator jumped;
  engine.counting_jump(smooth, jumped);
  return jumped;
}

DensityMatrix counting_sme_step(const SystemModel& m, const DensityMatrix& rho,
                                int dn, double dt) {
  return repair_step(counting_sme_step_raw(m, rho, dn, dt));
}

Operator zakai_step(const SystemModel& m, const Operator& sigma, double dy,
                    double dt) {
  require_step_args(dt, dy);
  if (!all_finite(sigma)) {
    throw std::invalid_argument("zakai step: non-finite state");
  }
  detail::StepEngine engine(m);
  Operator out;
  engine.zakai_step_raw(sigma, dy, dt, out);
  if (!all_finite(out)) {
    throw DivergenceError("zakai step produced non-finite state");
  }
  if (!(out.trace().real() > 0.0)) {
    throw DivergenceError(
        "zakai step drove the trace nonpositive; the step size is too large "
        "for this noise record");
  }
  return out;
}

DensityMatrix normalize_linear(const Operator& sigma) {
  const double tr = sigma.trace().real();
  if (!(tr > 0.0) || !std::isfinite(tr)) {
    throw std::invalid_argument("normalize_linear: trace " + std::to_string(tr) +
                                " is not positive");
  }
  return nearest_density(sigma / tr);
}

FilterTrajectory run_filter(const SystemModel& m,
                            const ObservationRecord& record, FilterKind kind) {
  validate_record(record);
  if (m.detection != record.detection) {
    throw std::invalid_argument("run_filter: record detection does not match the model");
  }
  if (kind == FilterKind::kLinear && record.detection != Detection::kHomodyne) {
    throw std::invalid_argument("run_filter: the linear filter is implemented for homodyne detection only");
  }

  FilterTrajectory traj;
  traj.grid = record.grid;
  traj.kind = kind;
  const std::size_t n = record.grid.n_steps;
  const double dt = record.grid.dt;
  detail::StepEngine engine(m);
  Operator raw(m.dim(), m.dim());

  if (kind == FilterKind::kLinear) {
    traj.linear_states.reserve(n + 1);
    traj.norms.reserve(n + 1);
    traj.linear_states.push_back(m.initial_state.mat());
    traj.norms.push_back(m.initial_state.mat().trace().real());
    for (std::size_t k = 0; k < n; ++k) {
      engine.zakai_step_raw(traj.linear_states.back(), record.increments[k], dt, raw);
      if (!all_finite(raw)) {
        throw DivergenceError("linear filter produced non-finite state", k);
      }
      const double tr = raw.trace().real();
      if (!(tr > 0.0)) {
        throw DivergenceError(
            "linear filter trace became nonpositive; the step size is too "
            "large for this noise record",
            k);
      }
      traj.linear_states.push_back(raw);
      traj.norms.push_back(tr);
    }
    return traj;
  }

  traj.states.reserve(n + 1);
  traj.states.push_back(m.initial_state);
  for (std::size_t k = 0; k < n; ++k) {
    const Operator& rho = traj.states.back().mat();
    try {
      if (record.detection == Detection::kHomodyne) {
        engine.homodyne_step_raw(rho, record.increments[k], dt, raw);
      } else {
        engine.counting_smooth_raw(rho, dt, raw);
        if (record.increments[k] == 1.0) {
          Operator jumped(m.dim(), m.dim());
          engine.counting_jump(raw, jumped);
          raw = jumped;
        }
      }
      if (!all_finite(raw)) {
        throw DivergenceError("filter produced non-finite state", k);
      }
      traj.states.push_back(nearest_density(raw));
    } catch (const DivergenceError& e) {
      throw DivergenceError(e.what(), k);
    }
  }
  return traj;
}

std::vector<double> innovations(const SystemModel& m,
                                const ObservationRecord& record,
                                const FilterTrajectory& traj) {
  validate_record(record);
  if (traj.kind != FilterKind::kNormalized) {
    throw std::invalid_argument("innovations: trajectory must come from the normalized filter");
  }
  if (!(traj.grid == record.grid) || traj.states.size() != record.grid.n_steps + 1) {
    throw std::invalid_argument("innovations: record and trajectory lengths do not match");
  }
  detail::StepEngine engine(m);
  const double dt = record.grid.dt;
  std::vector<double> out(record.grid.n_steps);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Operator& rho = traj.states[k].mat();
    const double pred = record.detection == Detection::kHomodyne
                            ? engine.homodyne_signal(rho)
                            : engine.counting_rate(rho);
    out[k] = record.increments[k] - pred * dt;
  }
  return out;
}

}  // namespace qfilter
