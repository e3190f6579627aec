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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "doctest.h"
#include "qfilter/rng.hpp"
#include "qfilter/simulate.hpp"
#include "test_helpers.hpp"

using namespace qfilter;
using namespace qfilter::testing;

TEST_CASE("derive_seed") {
  SUBCASE("deterministic") {
    CHECK(derive_seed(123, 45) == derive_seed(123, 45));
    CHECK(derive_seed(123, 45) != derive_seed(123, 46));
    CHECK(derive_seed(123, 45) != derive_seed(124, 45));
  }

  SUBCASE("no collisions over a wide index scan") {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(1u << 20);
    for (std::uint64_t i = 0; i < (1u << 20); ++i) {
      CHECK_MESSAGE(seen.insert(derive_seed(977, i)).second, "index ", i);
    }
  }

  SUBCASE("single-bit index flips scramble about half the output bits") {
    // With two finalizer rounds, adjacent indices should flip ~32 bits.
    std::uint64_t total = 0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
      const std::uint64_t a = derive_seed(1, static_cast<std::uint64_t>(i));
      const std::uint64_t b =
          derive_seed(1, static_cast<std::uint64_t>(i) ^ (1ULL << (i % 64)));
      total += static_cast<std::uint64_t>(std::popcount(a ^ b));
    }
    const double avg = static_cast<double>(total) / n;
    CHECK(avg > 24.0);
    CHECK(avg < 40.0);
  }
}

TEST_CASE("TrajectoryRng") {
  SUBCASE("streams are reproducible") {
    TrajectoryRng a(9001);
    TrajectoryRng b(9001);
    for (int i = 0; i < 100; ++i) {
      CHECK(a.uniform() == b.uniform());
      CHECK(a.gaussian() == b.gaussian());
    }
  }

  SUBCASE("uniform range") {
    TrajectoryRng rng(5);
    for (int i = 0; i < 10000; ++i) {
      const double u = rng.uniform();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
  }

  SUBCASE("gaussian moments") {
    TrajectoryRng rng(31415);
    const int n = 200000;
    double sum = 0.0;
    double sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = rng.gaussian();
      sum += g;
      sumsq += g * g;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    // 4 sigma bounds: sd(mean) = 1/sqrt(n), sd(var) = sqrt(2/n)
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
  }
}

TEST_CASE("validate_spec") {
  SimulationSpec spec;
  spec.model = decay_model(1.0);
  spec.grid = {0.0, 1e-3, 100};
  CHECK_NOTHROW(validate_spec(spec));

  SUBCASE("n_traj") {
    spec.n_traj = 0;
    CHECK_THROWS_AS(validate_spec(spec), std::invalid_argument);
  }

  SUBCASE("grid") {
    spec.grid.dt = 0.0;
    CHECK_THROWS_AS(validate_spec(spec), std::invalid_argument);
  }

  SUBCASE("observable dimension") {
    spec.observables.push_back({"bad", identity(3)});
    CHECK_THROWS_AS(validate_spec(spec), std::invalid_argument);
  }

  SUBCASE("observable Hermiticity, named in the message") {
    spec.observables.push_back({"skew", sigma_minus()});
    try {
      validate_spec(spec);
      FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("skew") != std::string::npos);
    }
  }

  SUBCASE("counting thinning guard") {
    // L = 2 I gives rate 4; dt = 0.05 puts rate*dt = 0.2 over the 0.1 cap.
    SystemModel m = make_model(Operator::Zero(2, 2), Operator(2.0 * identity(2)),
                               DensityMatrix::checked(projector(2, 0)),
                               Detection::kCounting);
    spec.model = m;
    spec.grid = {0.0, 0.05, 10};
    CHECK_THROWS_AS(validate_spec(spec), std::invalid_argument);
    spec.grid.dt = 0.01;  // rate*dt = 0.04 is fine
    CHECK_NOTHROW(validate_spec(spec));
  }
}

TEST_CASE("simulate_trajectory basics") {
  SUBCASE("L = 0: record equals noise and the state never moves") {
    DensityMatrix rho = DensityMatrix::checked(mat2(0.7, 0.1, 0.1, 0.3));
    SimulationSpec spec;
    spec.model = make_model(Operator::Zero(2, 2), Operator::Zero(2, 2), rho,
                            Detection::kHomodyne);
    spec.grid = {0.0, 1e-2, 200};
    spec.master_seed = 6;
    TrajectoryResult t = simulate_trajectory(spec, 0);
    REQUIRE_FALSE(t.diverged);
    REQUIRE(t.record.increments.size() == 200);
    for (std::size_t k = 0; k < 200; ++k) {
      CHECK(t.record.increments[k] == t.noise[k]);  // signal is zero
    }
    for (const DensityMatrix& s : t.filter.states) {
      CHECK(max_diff(s.mat(), rho.mat()) < 1e-12);
    }
    REQUIRE(t.record.seed_provenance.has_value());
    CHECK(t.record.seed_provenance->master_seed == 6);
    CHECK(t.record.seed_provenance->trajectory_index == 0);
  }

  SUBCASE("homodyne record matches the seeded rng draws") {
    SimulationSpec spec;
    spec.model = decay_model(1.0);
    spec.grid = {0.0, 1e-3, 50};
    spec.master_seed = 101;
    TrajectoryResult t = simulate_trajectory(spec, 7);

    // replay the construction by hand: dy_k = signal_k dt + sqrt(dt) g_k
    TrajectoryRng rng(derive_seed(101, 7));
    const double sqrt_dt = std::sqrt(spec.grid.dt);
    for (std::size_t k = 0; k < 50; ++k) {
      const double signal =
          expectation(t.filter.states[k],
                      spec.model.coupling + spec.model.coupling.adjoint())
              .real();
      const double dy = signal * spec.grid.dt + sqrt_dt * rng.gaussian();
      // same formula, but expectation() sums the trace in a different
      // order than the step engine; allow roundoff
      CHECK(t.record.increments[k] == doctest::Approx(dy).epsilon(1e-12));
    }
  }

  SUBCASE("distinct trajectories see distinct noise") {
    SimulationSpec spec;
    spec.model = decay_model(1.0);
    spec.grid = {0.0, 1e-3, 10};
    spec.master_seed = 55;
    TrajectoryResult a = simulate_trajectory(spec, 0);
    TrajectoryResult b = simulate_trajectory(spec, 1);
    CHECK(a.record.increments != b.record.increments);
  }
}

TEST_CASE("counting simulation") {
  SUBCASE("constant-rate model: state is bitwise constant through jumps") {
    // L = sqrt(0.5) I: the smooth generator cancels exactly and a jump maps
    // rho to (lambda rho)/lambda entry by entry, so every state in the
    // trajectory is the initial matrix down to the last bit.
    SystemModel m = make_model(Operator::Zero(2, 2),
                               Operator(std::sqrt(0.5) * identity(2)),
                               DensityMatrix::checked(projector(2, 0)),
                               Detection::kCounting);
    SimulationSpec spec;
    spec.model = m;
    spec.grid = {0.0, 1e-2, 2000};
    spec.master_seed = 404;
    TrajectoryResult t = simulate_trajectory(spec, 0);
    REQUIRE_FALSE(t.diverged);
    int jumps = 0;
    for (double v : t.record.increments) jumps += v == 1.0 ? 1 : 0;
    // lambda T = 0.5 * 20 = 10 expected events
    CHECK(jumps > 0);
    CHECK(jumps < 30);
    const Operator& rho0 = m.initial_state.mat();
    for (const DensityMatrix& s : t.filter.states) {
      for (Eigen::Index r = 0; r < 2; ++r) {
        for (Eigen::Index c = 0; c < 2; ++c) {
          CHECK(s.mat()(r, c) == rho0(r, c));
        }
      }
    }
  }

  SUBCASE("decay model: at most one emission, then darkness") {
    SimulationSpec spec;
    spec.model = decay_model(1.0, Detection::kCounting);
    spec.grid = {0.0, 1e-2, 800};
    spec.master_seed = 77;
    spec.n_traj = 50;
    std::vector<TrajectoryResult> all = simulate_counting(spec);
    int emitted = 0;
    for (const TrajectoryResult& t : all) {
      REQUIRE_FALSE(t.diverged);
      int jumps = 0;
      std::size_t jump_at = 0;
      for (std::size_t k = 0; k < t.record.increments.size(); ++k) {
        if (t.record.increments[k] == 1.0) {
          ++jumps;
          jump_at = k;
        }
      }
      CHECK(jumps <= 1);
      if (jumps == 1) {
        ++emitted;
        // after the jump the state sits in the dark state
        CHECK(max_diff(t.filter.states.back().mat(), projector(2, 1)) < 1e-12);
        // and no increments fire afterwards (checked via jump_at being last)
        for (std::size_t k = jump_at + 1; k < t.record.increments.size(); ++k) {
          CHECK(t.record.increments[k] == 0.0);
        }
      }
    }
    // P(emit by T=8) = 1 - e^-8 = 0.99966; most of 50 must have emitted
    CHECK(emitted >= 45);
  }

  SUBCASE("compensated noise matches dN - rate*dt") {
    SimulationSpec spec;
    spec.model = decay_model(1.0, Detection::kCounting);
    spec.grid = {0.0, 1e-2, 100};
    spec.master_seed = 31;
    TrajectoryResult t = simulate_trajectory(spec, 2);
    std::vector<double> dm = innovations(spec.model, t.record, t.filter);
    REQUIRE(dm.size() == t.noise.size());
    for (std::size_t k = 0; k < dm.size(); ++k) {
      CHECK(dm[k] == t.noise[k]);
    }
  }
}

TEST_CASE("parallel execution is bitwise identical to serial") {
  SimulationSpec spec;
  spec.model = rabi_decay_model(2.0, 1.0);
  spec.grid = {0.0, 1e-3, 60};
  spec.n_traj = 81;  // crosses the block boundary
  spec.master_seed = 2026;
  spec.observables.push_back({"sz", pauli_z()});

  std::vector<TrajectoryResult> serial;
  std::vector<TrajectoryResult> parallel;
  for_each_trajectory(spec, ExecMode::kSerial,
                      [&serial](TrajectoryResult&& t) { serial.push_back(std::move(t)); });
  for_each_trajectory(spec, ExecMode::kParallel,
                      [&parallel](TrajectoryResult&& t) { parallel.push_back(std::move(t)); });

  REQUIRE(serial.size() == 81);
  REQUIRE(parallel.size() == 81);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].index == i);
    CHECK(parallel[i].index == i);
    REQUIRE(serial[i].record.increments.size() ==
            parallel[i].record.increments.size());
    for (std::size_t k = 0; k < serial[i].record.increments.size(); ++k) {
      CHECK(serial[i].record.increments[k] == parallel[i].record.increments[k]);
      CHECK(serial[i].noise[k] == parallel[i].noise[k]);
    }
    for (std::size_t k = 0; k < serial[i].filter.states.size(); ++k) {
      const Operator& a = serial[i].filter.states[k].mat();
      const Operator& b = parallel[i].filter.states[k].mat();
      for (Eigen::Index r = 0; r < 2; ++r) {
        for (Eigen::Index c = 0; c < 2; ++c) {
          CHECK(a(r, c) == b(r, c));
        }
      }
    }
  }

  SUBCASE("streaming ensembles agree bitwise too") {
    EnsembleResult es = simulate_ensemble(spec, ExecMode::kSerial);
    EnsembleResult ep = simulate_ensemble(spec, ExecMode::kParallel);
    REQUIRE(es.observables.size() == 1);
    REQUIRE(ep.observables.size() == 1);
    for (std::size_t k = 0; k < es.observables[0].mean.size(); ++k) {
      CHECK(es.observables[0].mean[k] == ep.observables[0].mean[k]);
      CHECK(es.observables[0].std_error[k] == ep.observables[0].std_error[k]);
    }
    for (std::size_t k = 0; k < es.mean_states.states.size(); ++k) {
      CHECK(max_diff(es.mean_states.states[k].mat(),
                     ep.mean_states.states[k].mat()) == 0.0);
    }
  }
}

TEST_CASE("ensemble statistics") {
  SUBCASE("wrapper detection checks") {
    SimulationSpec spec;
    spec.model = decay_model(1.0, Detection::kCounting);
    spec.grid = {0.0, 1e-2, 10};
    CHECK_THROWS_AS(simulate_homodyne(spec), std::invalid_argument);
    spec.model = decay_model(1.0);
    CHECK_THROWS_AS(simulate_counting(spec), std::invalid_argument);
  }

  SUBCASE("single trajectory has zero standard error") {
    SimulationSpec spec;
    spec.model = decay_model(1.0);
    spec.grid = {0.0, 1e-3, 20};
    spec.n_traj = 1;
    spec.observables.push_back({"sz", pauli_z()});
    EnsembleResult res = simulate_ensemble(spec, ExecMode::kSerial);
    CHECK(res.n_traj == 1);
    for (double se : res.observables[0].std_error) CHECK(se == 0.0);
  }

  SUBCASE("ensemble_average validates input") {
    SimulationSpec spec;
    spec.model = decay_model(1.0);
    spec.grid = {0.0, 1e-3, 20};
    CHECK_THROWS_AS(ensemble_average(spec, {}), std::invalid_argument);

    TrajectoryResult t = simulate_trajectory(spec, 0);
    t.record.grid.n_steps = 19;
    CHECK_THROWS_AS(ensemble_average(spec, {t}), std::invalid_argument);
  }

  SUBCASE("diverged trajectories are excluded and reported") {
    SimulationSpec spec;
    spec.model = decay_model(1.0);
    spec.grid = {0.0, 1e-3, 30};
    spec.n_traj = 4;
    spec.observables.push_back({"sz", pauli_z()});
    std::vector<TrajectoryResult> results = simulate_homodyne(spec);
    REQUIRE(results.size() == 4);

    // hand-build the expected mean over trajectories {0, 2, 3}
    std::vector<TrajectoryResult> kept = {results[0], results[2], results[3]};
    results[1].diverged = true;
    results[1].diverged_step = 11;
    results[1].diverged_message = "synthetic";

    EnsembleResult res = ensemble_average(spec, results);
    CHECK(res.n_traj == 4);
    CHECK(res.n_diverged == 1);
    REQUIRE(res.divergences.size() == 1);
    CHECK(res.divergences[0].trajectory_index == 1);
    CHECK(res.divergences[0].step == 11);

    for (std::size_t k = 0; k <= 30; ++k) {
      double sum = 0.0;
      for (const TrajectoryResult& t : kept) {
        sum += trace_of_product(pauli_z(), t.filter.states[k].mat()).real();
      }
      CHECK(res.observables[0].mean[k] ==
            doctest::Approx(sum / 3.0).epsilon(1e-12));
    }
  }

  SUBCASE("L = 0 ensemble mean equals the initial state exactly") {
    DensityMatrix rho = DensityMatrix::checked(mat2(0.6, 0.2, 0.2, 0.4));
    SimulationSpec spec;
    spec.model = make_model(Operator::Zero(2, 2), Operator::Zero(2, 2), rho,
                            Detection::kHomodyne);
    spec.grid = {0.0, 1e-2, 40};
    spec.n_traj = 16;
    spec.observables.push_back({"sz", pauli_z()});
    EnsembleResult res = simulate_ensemble(spec, ExecMode::kParallel);
    for (const DensityMatrix& s : res.mean_states.states) {
      CHECK(max_diff(s.mat(), rho.mat()) < 1e-12);
    }
    for (double se : res.observables[0].std_error) {
      CHECK(se < 1e-12);  // all trajectories identical
    }
  }

  SUBCASE("decay ensemble mean tracks the master equation") {
    SimulationSpec spec;
    spec.model = decay_model(1.0);
    spec.grid = {0.0, 5e-3, 200};
    spec.n_traj = 500;
    spec.master_seed = 424242;
    spec.observables.push_back({"sz", pauli_z()});
    EnsembleResult res = simulate_ensemble(spec, ExecMode::kParallel);
    CHECK(res.n_diverged == 0);
    // exact <sigma_z>(t) = 2 e^{-t} - 1; allow 4 standard errors plus the
    // O(dt) Euler bias
    for (std::size_t k = 0; k <= 200; k += 50) {
      const double t = spec.grid.time_at(k);
      const double exact = 2.0 * std::exp(-t) - 1.0;
      const double tol = 4.0 * res.observables[0].std_error[k] + 0.02;
      CHECK(std::abs(res.observables[0].mean[k] - exact) < tol);
    }
  }
}
