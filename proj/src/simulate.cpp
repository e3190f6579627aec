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

#include "qfilter/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "qfilter/detail/step_engine.hpp"
#include "qfilter/rng.hpp"

namespace qfilter {

namespace {

void validate_observables(const SystemModel& model,
                          const std::vector<NamedObservable>& observables) {
  for (const NamedObservable& obs : observables) {
    if (obs.op.rows() != model.dim() || obs.op.cols() != model.dim()) {
      throw std::invalid_argument("observable " + obs.name + ": is " +
                                  std::to_string(obs.op.rows()) + "x" +
                                  std::to_string(obs.op.cols()) +
                                  ", expected dimension " +
                                  std::to_string(model.dim()));
    }
    if (!all_finite(obs.op)) {
      throw std::invalid_argument("observable " + obs.name + ": non-finite entries");
    }
    const double defect = hermiticity_defect(obs.op);
    if (defect > kHermitianTol) {
      throw std::invalid_argument("observable " + obs.name +
                                  ": not Hermitian, max deviation " +
                                  std::to_string(defect));
    }
  }
}

/// Streaming mean/stderr statistics over non-diverged trajectories;
/// shared by ensemble_average and simulate_ensemble so both aggregate in
/// the same fixed order.
class EnsembleAccumulator {
 public:
  explicit EnsembleAccumulator(const SimulationSpec& spec) : spec_(&spec) {
    const std::size_t n_points = spec.grid.n_steps + 1;
    state_sum_.assign(n_points, Operator::Zero(spec.model.dim(), spec.model.dim()));
    obs_sum_.assign(spec.observables.size(), std::vector<double>(n_points, 0.0));
    obs_sumsq_.assign(spec.observables.size(), std::vector<double>(n_points, 0.0));
  }

  void add(const TrajectoryResult& t) {
    ++n_total_;
    if (t.diverged) {
      divergences_.push_back({t.index, t.diverged_step, t.diverged_message});
      return;
    }
    ++n_kept_;
    const std::size_t n_points = state_sum_.size();
    for (std::size_t k = 0; k < n_points; ++k) {
      state_sum_[k] += t.filter.states[k].mat();
    }
    for (std::size_t o = 0; o < spec_->observables.size(); ++o) {
      const Operator& x = spec_->observables[o].op;
      for (std::size_t k = 0; k < n_points; ++k) {
        const double v = trace_of_product(x, t.filter.states[k].mat()).real();
        obs_sum_[o][k] += v;
        obs_sumsq_[o][k] += v * v;
      }
    }
  }

  EnsembleResult finalize() {
    if (n_kept_ == 0) {
      throw DivergenceError("ensemble: every trajectory diverged");
    }
    EnsembleResult res;
    res.grid = spec_->grid;
    res.n_traj = n_total_;
    res.n_diverged = divergences_.size();
    res.divergences = std::move(divergences_);
    res.mean_states.grid = spec_->grid;
    res.mean_states.states.reserve(state_sum_.size());
    const double inv_n = 1.0 / static_cast<double>(n_kept_);
    for (const Operator& sum : state_sum_) {
      res.mean_states.states.push_back(nearest_density(inv_n * sum));
    }
    res.observables.reserve(spec_->observables.size());
    for (std::size_t o = 0; o < spec_->observables.size(); ++o) {
      ObservableSeries series;
      series.name = spec_->observables[o].name;
      series.mean.resize(state_sum_.size());
      series.std_error.resize(state_sum_.size());
      for (std::size_t k = 0; k < state_sum_.size(); ++k) {
        const double mean = obs_sum_[o][k] * inv_n;
        series.mean[k] = mean;
        if (n_kept_ > 1) {
          const double nf = static_cast<double>(n_kept_);
          const double var =
              std::max(0.0, (obs_sumsq_[o][k] - nf * mean * mean) / (nf - 1.0));
          series.std_error[k] = std::sqrt(var / nf);
        } else {
          series.std_error[k] = 0.0;
        }
      }
      res.observables.push_back(std::move(series));
    }
    return res;
  }

 private:
  const SimulationSpec* spec_;
  std::size_t n_total_ = 0;
  std::size_t n_kept_ = 0;
  std::vector<Operator> state_sum_;
  std::vector<std::vector<double>> obs_sum_;
  std::vector<std::vector<double>> obs_sumsq_;
  std::vector<DivergenceInfo> divergences_;
};

}  // namespace

void validate_spec(const SimulationSpec& spec) {
  validate_grid(spec.grid);
  if (spec.n_traj == 0) {
    throw std::invalid_argument("simulation: n_traj must be at least 1");
  }
  validate_observables(spec.model, spec.observables);
  if (spec.model.detection == Detection::kCounting) {
    detail::StepEngine engine(spec.model);
    const double p0 = engine.counting_rate(spec.model.initial_state.mat()) * spec.grid.dt;
    if (p0 > 0.1) {
      throw std::invalid_argument(
          "counting simulation: initial jump probability rate*dt = " +
          std::to_string(p0) +
          " exceeds 0.1; Bernoulli thinning needs a smaller dt");
    }
  }
}

TrajectoryResult simulate_trajectory(const SimulationSpec& spec,
                                     std::uint64_t index) {
  const SystemModel& m = spec.model;
  const TimeGrid& grid = spec.grid;
  const double dt = grid.dt;
  const double sqrt_dt = std::sqrt(dt);

  TrajectoryResult out;
  out.index = index;
  out.record.grid = grid;
  out.record.detection = m.detection;
  out.record.seed_provenance = SeedProvenance{spec.master_seed, index};
  out.record.increments.reserve(grid.n_steps);
  out.noise.reserve(grid.n_steps);
  out.filter.grid = grid;
  out.filter.kind = FilterKind::kNormalized;
  out.filter.states.reserve(grid.n_steps + 1);
  out.filter.states.push_back(m.initial_state);

  TrajectoryRng rng(derive_seed(spec.master_seed, index));
  detail::StepEngine engine(m);
  Operator raw(m.dim(), m.dim());
  Operator jumped(m.dim(), m.dim());

  for (std::size_t k = 0; k < grid.n_steps; ++k) {
    const Operator& rho = out.filter.states.back().mat();
    try {
      if (m.detection == Detection::kHomodyne) {
        const double signal = engine.homodyne_signal(rho);
        const double dy = signal * dt + sqrt_dt * rng.gaussian();
        const double dw = engine.homodyne_step_raw(rho, dy, dt, raw);
        out.record.increments.push_back(dy);
        out.noise.push_back(dw);
      } else {
        const double rate = engine.counting_rate(rho);
        const double p = rate * dt;
        if (p > 1.0) {
          throw std::invalid_argument(
              "counting simulation: jump probability rate*dt = " +
              std::to_string(p) + " exceeds 1 at step " + std::to_string(k) +
              "; reduce dt");
        }
        const int dn = rng.uniform() < p ? 1 : 0;
        engine.counting_smooth_raw(rho, dt, raw);
        if (dn == 1) {
          engine.counting_jump(raw, jumped);
          raw.swap(jumped);
        }
        out.record.increments.push_back(static_cast<double>(dn));
        out.noise.push_back(static_cast<double>(dn) - p);
      }
      if (!all_finite(raw)) {
        throw DivergenceError("trajectory produced non-finite state", k);
      }
      out.filter.states.push_back(nearest_density(raw));
    } catch (const DivergenceError& e) {
      out.diverged = true;
      out.diverged_step = k;
      out.diverged_message = e.what();
      break;
    }
  }
  return out;
}

void for_each_trajectory(const SimulationSpec& spec, ExecMode mode,
                         const std::function<void(TrajectoryResult&&)>& sink) {
  validate_spec(spec);
  const std::uint64_t n = spec.n_traj;

  if (mode == ExecMode::kSerial) {
    for (std::uint64_t i = 0; i < n; ++i) {
      sink(simulate_trajectory(spec, i));
    }
    return;
  }

  // Trajectories are computed in bounded blocks so parallel workers never
  // share state, then delivered strictly in index order: the sink sees the
  // same sequence as a serial run, byte for byte.
  constexpr std::uint64_t kBlock = 64;
  std::vector<TrajectoryResult> block(static_cast<std::size_t>(std::min(kBlock, n)));
  for (std::uint64_t start = 0; start < n; start += kBlock) {
    const std::int64_t count = static_cast<std::int64_t>(std::min(kBlock, n - start));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t j = 0; j < count; ++j) {
      block[static_cast<std::size_t>(j)] =
          simulate_trajectory(spec, start + static_cast<std::uint64_t>(j));
    }
    for (std::int64_t j = 0; j < count; ++j) {
      sink(std::move(block[static_cast<std::size_t>(j)]));
    }
  }
}

namespace {

std::vector<TrajectoryResult> collect(const SimulationSpec& spec,
                                      Detection expected, const char* name) {
  if (spec.model.detection != expected) {
    throw std::invalid_argument(std::string(name) +
                                ": model detection does not match");
  }
  std::vector<TrajectoryResult> out;
  out.reserve(spec.n_traj);
  for_each_trajectory(spec, ExecMode::kParallel,
                      [&out](TrajectoryResult&& t) { out.push_back(std::move(t)); });
  return out;
}

}  // namespace

std::vector<TrajectoryResult> simulate_homodyne(const SimulationSpec& spec) {
  return collect(spec, Detection::kHomodyne, "simulate_homodyne");
}

std::vector<TrajectoryResult> simulate_counting(const SimulationSpec& spec) {
  return collect(spec, Detection::kCounting, "simulate_counting");
}

EnsembleResult ensemble_average(const SimulationSpec& spec,
                                const std::vector<TrajectoryResult>& results) {
  if (results.empty()) {
    throw std::invalid_argument("ensemble_average: empty result list");
  }
  validate_observables(spec.model, spec.observables);
  EnsembleAccumulator acc(spec);
  for (const TrajectoryResult& t : results) {
    if (!(t.record.grid == spec.grid)) {
      throw std::invalid_argument("ensemble_average: grid mismatch at trajectory " +
                                  std::to_string(t.index));
    }
    acc.add(t);
  }
  return acc.finalize();
}

EnsembleResult simulate_ensemble(const SimulationSpec& spec, ExecMode mode) {
  EnsembleAccumulator acc(spec);
  for_each_trajectory(spec, mode,
                      [&acc](TrajectoryResult&& t) { acc.add(t); });
  EnsembleResult res = acc.finalize();
  if (res.n_diverged * 1000 > spec.n_traj) {
    throw DivergenceError(std::to_string(res.n_diverged) + " of " +
                          std::to_string(spec.n_traj) +
                          " trajectories diverged, more than 0.1%");
  }
  return res;
}

}  // namespace qfilter
