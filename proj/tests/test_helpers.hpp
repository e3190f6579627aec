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

#include <cmath>
#include <random>

#include "qfilter/operators.hpp"

namespace qfilter::testing {

inline Operator mat2(Complex a, Complex b, Complex c, Complex d) {
  Operator m(2, 2);
  m << a, b, c, d;
  return m;
}

inline double max_diff(const Operator& a, const Operator& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline Operator random_matrix(std::mt19937& gen, Eigen::Index dim) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Operator m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      m(i, j) = Complex(dist(gen), dist(gen));
    }
  }
  return m;
}

inline Operator random_hermitian(std::mt19937& gen, Eigen::Index dim) {
  Operator m = random_matrix(gen, dim);
  return Operator(0.5 * (m + m.adjoint()));
}

inline DensityMatrix random_density(std::mt19937& gen, Eigen::Index dim) {
  Operator m = random_matrix(gen, dim);
  Operator psd = m * m.adjoint();
  psd /= psd.trace().real();
  return nearest_density(psd);
}

inline SystemModel random_model(std::mt19937& gen, Eigen::Index dim,
                                Detection detection = Detection::kHomodyne) {
  return make_model(random_hermitian(gen, dim), random_matrix(gen, dim),
                    random_density(gen, dim), detection);
}

/// gamma = 1 amplitude-damping qubit: H = 0, L = sqrt(gamma) sigma_minus,
/// rho0 = |e><e|.
inline SystemModel decay_model(double gamma = 1.0,
                               Detection detection = Detection::kHomodyne) {
  return make_model(Operator::Zero(2, 2), std::sqrt(gamma) * sigma_minus(),
                    DensityMatrix::checked(projector(2, 0)), detection);
}

inline SystemModel rabi_decay_model(double omega, double gamma,
                                    Detection detection = Detection::kHomodyne) {
  return make_model(0.5 * omega * pauli_x(), std::sqrt(gamma) * sigma_minus(),
                    DensityMatrix::checked(projector(2, 0)), detection);
}

}  // namespace qfilter::testing
