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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qfilter {

using Complex = std::complex<double>;

/// Dense complex matrix on the system Hilbert space. Hamiltonians carry
/// units of frequency (hbar = 1), coupling operators frequency^(1/2).
using Operator = Eigen::MatrixXcd;

// Dimension cap and validation/repair thresholds. 1e-10 separates "valid"
// from "repairable" (1e-6); anything worse is treated as broken.
inline constexpr Eigen::Index kMaxDim = 64;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kRepairableTol = 1e-6;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

/// Thrown when a state trajectory leaves the representable set (non-finite
/// entries, or no positive weight left after eigenvalue clamping).
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t step = 0)
      : std::runtime_error(what), step(step) {}
  std::size_t step;
};

bool all_finite(const Operator& a);

/// max_ij |a_ij - conj(a_ji)|
double hermiticity_defect(const Operator& a);

double max_abs(const Operator& a);

/// tr(a*b) without forming the product.
Complex trace_of_product(const Operator& a, const Operator& b);

/// Conjugate transpose.
Operator adjoint(const Operator& a);

/// [a, b] = ab - ba. Throws std::invalid_argument on dimension mismatch.
Operator commutator(const Operator& a, const Operator& b);

/// Hermitian, positive-semidefinite, unit-trace operator; the carrier of
/// both unconditional and conditional states.
class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-10), unit trace (1e-10) and positivity
  /// (min eigenvalue >= -1e-10); throws std::invalid_argument otherwise.
  static DensityMatrix checked(Operator op);

  const Operator& mat() const { return op_; }
  Eigen::Index dim() const { return op_.rows(); }

 private:
  friend DensityMatrix nearest_density(const Operator& a);
  explicit DensityMatrix(Operator op) : op_(std::move(op)) {}
  Operator op_;
};

/// tr(rho x). Imaginary part vanishes (up to roundoff) for Hermitian x.
Complex expectation(const DensityMatrix& rho, const Operator& x);

enum class Detection { kHomodyne, kCounting };

/// Finite-dimensional system coupled to a single vacuum probe channel,
/// observed by homodyne or photon-counting detection. The scattering
/// operator is fixed to the identity; the field couples through L only.
struct SystemModel {
  Operator hamiltonian;  // H, Hermitian
  Operator coupling;     // L
  // Trivial valid placeholder so the struct can be built field by field;
  // make_model replaces it.
  DensityMatrix initial_state = DensityMatrix::checked(Operator::Identity(1, 1));
  Detection detection = Detection::kHomodyne;

  Eigen::Index dim() const { return hamiltonian.rows(); }
};

/// Validates dimensions (matching, within [1, 64]), finiteness and
/// Hermiticity of H; throws std::invalid_argument with the failed field.
SystemModel make_model(Operator hamiltonian, Operator coupling,
                       DensityMatrix initial_state, Detection detection);

/// Heisenberg generator i[H,x] + L†xL - (L†L x + x L†L)/2.
Operator lindblad_heisenberg(const SystemModel& m, const Operator& x);

/// Schrodinger (trace-dual) generator -i[H,rho] + L rho L† - {L†L, rho}/2.
Operator lindblad_schrodinger(const SystemModel& m, const Operator& rho);

/// Repairs accumulated integration error: hermitize via (a+a†)/2,
/// eigendecompose, clamp negative eigenvalues to zero, renormalize the
/// trace to one. Idempotent on valid density matrices. Throws
/// std::invalid_argument if a is not repairable (hermiticity defect above
/// 1e-6) and DivergenceError if no weight survives the clamping.
DensityMatrix nearest_density(const Operator& a);

/// (1/2) * sum of |eigenvalues| of the hermitized difference a - b.
double trace_distance(const Operator& a, const Operator& b);

// Common operators. Qubit convention: basis index 0 is the excited state
// (sigma_z = +1), index 1 the ground state, sigma_minus = |g><e|.
Operator identity(Eigen::Index dim);
Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
Operator sigma_plus();
Operator sigma_minus();
Operator projector(Eigen::Index dim, Eigen::Index k);  // |k><k|

}  // namespace qfilter
