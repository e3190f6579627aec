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

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "doctest.h"
#include "qfilter/master.hpp"
#include "qfilter/operators.hpp"
#include "test_helpers.hpp"

using namespace qfilter;
using namespace qfilter::testing;

TEST_CASE("validate_grid rejects degenerate grids") {
  CHECK_THROWS_AS(validate_grid({0.0, 0.0, 10}), std::invalid_argument);
  CHECK_THROWS_AS(validate_grid({0.0, -0.1, 10}), std::invalid_argument);
  CHECK_THROWS_AS(validate_grid({0.0, 0.1, 0}), std::invalid_argument);
  CHECK_NOTHROW(validate_grid({0.0, 0.1, 1}));
}

TEST_CASE("integrate_master: constant trajectory for trivial dynamics") {
  DensityMatrix rho = DensityMatrix::checked(mat2(0.7, 0.1, 0.1, 0.3));
  SystemModel m = make_model(Operator::Zero(2, 2), Operator::Zero(2, 2), rho,
                             Detection::kHomodyne);
  StateTrajectory traj = integrate_master(m, {0.0, 0.01, 50}, OdeMethod::kRk4);
  REQUIRE(traj.states.size() == 51);
  for (const DensityMatrix& state : traj.states) {
    CHECK(max_diff(state.mat(), rho.mat()) < 1e-12);
  }
}

TEST_CASE("integrate_master: qubit decay endpoint") {
  SystemModel m = decay_model(1.0);
  StateTrajectory traj = integrate_master(m, {0.0, 1e-3, 1000}, OdeMethod::kRk4);
  const double rho_ee = traj.states.back().mat()(0, 0).real();
  CHECK(std::abs(rho_ee - std::exp(-1.0)) < 1e-6);
}

TEST_CASE("integrate_master: closed-system Rabi oscillation") {
  const double omega = 2.0 * std::numbers::pi;
  SystemModel m = make_model(0.5 * omega * pauli_x(), Operator::Zero(2, 2),
                             DensityMatrix::checked(projector(2, 0)),
                             Detection::kHomodyne);
  StateTrajectory traj = integrate_master(m, {0.0, 1e-3, 1000}, OdeMethod::kRk4);
  const double sz = expectation(traj.states.back(), pauli_z()).real();
  CHECK(std::abs(sz - 1.0) < 1e-6);

  // quarter period: <sigma_z>(1/4) = cos(pi/2) = 0
  const double sz_quarter = expectation(traj.states[250], pauli_z()).real();
  CHECK(std::abs(sz_quarter) < 1e-6);
}

TEST_CASE("master stepping: trace and positivity before repair") {
  for (int scenario = 0; scenario < 2; ++scenario) {
    SystemModel m = scenario == 0
                        ? decay_model(1.0)
                        : rabi_decay_model(2.0 * std::numbers::pi, 1.0);
    const double dt = 1e-2;
    DensityMatrix state = m.initial_state;
    for (int k = 0; k < 200; ++k) {
      Operator raw = master_step_raw(m, state.mat(), dt, OdeMethod::kRk4);
      CHECK(std::abs(raw.trace().real() - 1.0) <= 1e-9);
      Operator h = 0.5 * (raw + raw.adjoint());
      Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues().minCoeff() >= -1e-8);
      state = nearest_density(raw);
    }
  }
}

TEST_CASE("RK4 convergence order on the decay scenario") {
  SystemModel m = decay_model(1.0);
  const double exact = std::exp(-1.0);
  // dt in [1e-3, 1e-2], each landing exactly on t = 1
  const std::vector<std::pair<double, std::size_t>> grids = {
      {1e-2, 100}, {5e-3, 200}, {2.5e-3, 400}, {2e-3, 500}};
  std::vector<double> log_dt;
  std::vector<double> log_err;
  for (const auto& [dt, n] : grids) {
    StateTrajectory traj = integrate_master(m, {0.0, dt, n}, OdeMethod::kRk4);
    const double err = std::abs(traj.states.back().mat()(0, 0).real() - exact);
    REQUIRE(err > 0.0);
    log_dt.push_back(std::log2(dt));
    log_err.push_back(std::log2(err));
  }
  // least-squares slope of log2(err) vs log2(dt)
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < log_dt.size(); ++i) {
    mx += log_dt[i];
    my += log_err[i];
  }
  mx /= static_cast<double>(log_dt.size());
  my /= static_cast<double>(log_dt.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < log_dt.size(); ++i) {
    num += (log_dt[i] - mx) * (log_err[i] - my);
    den += (log_dt[i] - mx) * (log_dt[i] - mx);
  }
  const double slope = num / den;
  CHECK(slope >= 3.5);
  CHECK(slope <= 4.5);
}

TEST_CASE("Euler converges at first order") {
  SystemModel m = decay_model(1.0);
  const double exact = std::exp(-1.0);
  auto endpoint_err = [&](double dt, std::size_t n) {
    StateTrajectory traj = integrate_master(m, {0.0, dt, n}, OdeMethod::kEuler);
    return std::abs(traj.states.back().mat()(0, 0).real() - exact);
  };
  const double e1 = endpoint_err(1e-2, 100);
  const double e2 = endpoint_err(5e-3, 200);
  const double ratio = e1 / e2;
  CHECK(ratio > 1.6);
  CHECK(ratio < 2.4);
}

TEST_CASE("decay fixed point: ground state at long times") {
  SystemModel m = decay_model(1.0);
  StateTrajectory traj = integrate_master(m, {0.0, 1e-2, 2000}, OdeMethod::kRk4);
  CHECK(trace_distance(traj.states.back().mat(), projector(2, 1)) <= 1e-8);
}
