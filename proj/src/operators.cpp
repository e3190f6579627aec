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

#include "qfilter/operators.hpp"

#include <cmath>
#include <sstream>

namespace qfilter {

namespace {

void require_square(const Operator& a, const char* name) {
  if (a.rows() != a.cols()) {
    std::ostringstream os;
    os << name << ": matrix must be square, got " << a.rows() << "x"
       << a.cols();
    throw std::invalid_argument(os.str());
  }
  if (a.rows() < 1) {
    throw std::invalid_argument(std::string(name) + ": dimension must be >= 1");
  }
}

void require_same_dim(const Operator& a, const Operator& b, const char* where) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << where << ": dimension mismatch (" << a.rows() << "x" << a.cols()
       << " vs " << b.rows() << "x" << b.cols() << ")";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

bool all_finite(const Operator& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const Complex& z = a(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

double hermiticity_defect(const Operator& a) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
    }
  }
  return worst;
}

double max_abs(const Operator& a) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      worst = std::max(worst, std::abs(a(i, j)));
    }
  }
  return worst;
}

Complex trace_of_product(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "trace_of_product");
  Complex sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      sum += a(i, j) * b(j, i);
    }
  }
  return sum;
}

Operator adjoint(const Operator& a) { return a.adjoint(); }

Operator commutator(const Operator& a, const Operator& b) {
  require_square(a, "commutator");
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

DensityMatrix DensityMatrix::checked(Operator op) {
  require_square(op, "DensityMatrix");
  if (!all_finite(op)) {
    throw std::invalid_argument("DensityMatrix: non-finite entries");
  }
  const double defect = hermiticity_defect(op);
  if (defect > kHermitianTol) {
    std::ostringstream os;
    os << "DensityMatrix: not Hermitian, max |op - op\xE2\x80\xA0| = " << defect;
    throw std::invalid_argument(os.str());
  }
  const double trace_err = std::abs(op.trace() - Complex(1.0));
  if (trace_err > kTraceTol) {
    std::ostringstream os;
    os << "DensityMatrix: trace deviates from 1 by " << trace_err;
    throw std::invalid_argument(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Operator> es(op, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -kPsdTol) {
    std::ostringstream os;
    os << "DensityMatrix: not positive semidefinite, min eigenvalue = "
       << min_eig;
    throw std::invalid_argument(os.str());
  }
  return DensityMatrix(std::move(op));
}

Complex expectation(const DensityMatrix& rho, const Operator& x) {
  require_same_dim(rho.mat(), x, "expectation");
  return trace_of_product(rho.mat(), x);
}

SystemModel make_model(Operator hamiltonian, Operator coupling,
                       DensityMatrix initial_state, Detection detection) {
  require_square(hamiltonian, "SystemModel.hamiltonian");
  require_square(coupling, "SystemModel.coupling");
  const Eigen::Index d = hamiltonian.rows();
  if (d > kMaxDim) {
    std::ostringstream os;
    os << "SystemModel: dimension " << d << " exceeds the cap of " << kMaxDim;
    throw std::invalid_argument(os.str());
  }
  if (coupling.rows() != d || initial_state.dim() != d) {
    throw std::invalid_argument(
        "SystemModel: hamiltonian, coupling and initial_state dimensions "
        "must match");
  }
  if (!all_finite(hamiltonian) || !all_finite(coupling)) {
    throw std::invalid_argument("SystemModel: non-finite operator entries");
  }
  const double defect = hermiticity_defect(hamiltonian);
  if (defect > kHermitianTol) {
    std::ostringstream os;
    os << "SystemModel.hamiltonian: not Hermitian, max |H - H\xE2\x80\xA0| = "
       << defect;
    throw std::invalid_argument(os.str());
  }
  return SystemModel{std::move(hamiltonian), std::move(coupling),
                     std::move(initial_state), detection};
}

Operator lindblad_heisenberg(const SystemModel& m, const Operator& x) {
  require_same_dim(m.hamiltonian, x, "lindblad_heisenberg");
  const Operator& h = m.hamiltonian;
  const Operator& l = m.coupling;
  const Operator l_adj = l.adjoint();
  const Operator l_adj_l = l_adj * l;
  return Complex(0, 1) * (h * x - x * h) + l_adj * x * l -
         0.5 * (l_adj_l * x + x * l_adj_l);
}

Operator lindblad_schrodinger(const SystemModel& m, const Operator& rho) {
  require_same_dim(m.hamiltonian, rho, "lindblad_schrodinger");
  const Operator& h = m.hamiltonian;
  const Operator& l = m.coupling;
  const Operator l_adj = l.adjoint();
  const Operator l_adj_l = l_adj * l;
  return Complex(0, -1) * (h * rho - rho * h) + l * rho * l_adj -
         0.5 * (l_adj_l * rho + rho * l_adj_l);
}

namespace {

// Closed-form spectral repair for 2x2 Hermitian matrices; the per-step
// repair dominates trajectory stepping, so this avoids the iterative
// solver on the common qubit case.
Operator clamped_reconstruction_2x2(const Operator& h) {
  const double a = h(0, 0).real();
  const double c = h(1, 1).real();
  const Complex b = h(0, 1);
  const double mid = 0.5 * (a + c);
  const double off = std::norm(b);
  const double rad = std::sqrt(0.25 * (a - c) * (a - c) + off);
  const double lo = mid - rad;
  const double hi = mid + rad;
  if (lo >= 0.0) {
    return h;  // already positive, nothing to clamp
  }
  if (hi <= 0.0) {
    // Both eigenvalues clamp to zero.
    throw DivergenceError("nearest_density: zero trace after clamping");
  }
  Operator out(2, 2);
  if (rad == 0.0) {
    // h = mid * I with mid <= 0 handled above.
    out.setZero();
    out(0, 0) = out(1, 1) = hi;
    return out;
  }
  // Eigenvector for hi, picking the numerically larger pivot.
  Complex v0, v1;
  if (std::abs(hi - c) >= std::abs(hi - a)) {
    v0 = hi - c;
    v1 = std::conj(b);
  } else {
    v0 = b;
    v1 = hi - a;
  }
  const double nrm = std::norm(v0) + std::norm(v1);
  if (nrm == 0.0) {
    out.setZero();
    out(0, 0) = out(1, 1) = hi;
    return out;
  }
  const double scale = hi / nrm;
  out(0, 0) = scale * std::norm(v0);
  out(1, 1) = scale * std::norm(v1);
  out(0, 1) = scale * v0 * std::conj(v1);
  out(1, 0) = std::conj(out(0, 1));
  return out;
}

}  // namespace

DensityMatrix nearest_density(const Operator& a) {
  require_square(a, "nearest_density");
  if (!all_finite(a)) {
    throw DivergenceError("nearest_density: non-finite entries");
  }
  const double defect = hermiticity_defect(a);
  if (defect > kRepairableTol) {
    std::ostringstream os;
    os << "nearest_density: input is not repairable, hermiticity defect "
       << defect << " exceeds " << kRepairableTol;
    throw std::invalid_argument(os.str());
  }
  Operator h = 0.5 * (a + a.adjoint());
  Operator rebuilt;
  if (h.rows() == 2) {
    rebuilt = clamped_reconstruction_2x2(h);
  } else {
    Eigen::SelfAdjointEigenSolver<Operator> es(h);
    if (es.info() != Eigen::Success) {
      throw DivergenceError("nearest_density: eigendecomposition failed");
    }
    if (es.eigenvalues().minCoeff() >= 0.0) {
      rebuilt = h;
    } else {
      Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
      rebuilt = es.eigenvectors() * vals.asDiagonal() *
                es.eigenvectors().adjoint();
    }
  }
  const double tr = rebuilt.trace().real();
  if (!(tr > 0.0)) {
    throw DivergenceError("nearest_density: zero trace after clamping");
  }
  rebuilt /= tr;
  // Final symmetrization pins op == op† exactly, which the stepping
  // kernels rely on.
  Operator out = 0.5 * (rebuilt + rebuilt.adjoint());
  return DensityMatrix(std::move(out));
}

double trace_distance(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "trace_distance");
  Operator d = a - b;
  Operator h = 0.5 * (d + d.adjoint());
  if (h.rows() == 2) {
    const double m = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double r = std::sqrt(0.25 * std::pow(h(0, 0).real() - h(1, 1).real(), 2) +
                               std::norm(h(0, 1)));
    return 0.5 * (std::abs(m + r) + std::abs(m - r));
  }
  Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Operator identity(Eigen::Index dim) { return Operator::Identity(dim, dim); }

Operator pauli_x() {
  Operator m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Operator pauli_y() {
  Operator m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Operator pauli_z() {
  Operator m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Operator sigma_plus() {
  Operator m = Operator::Zero(2, 2);
  m(0, 1) = 1;
  return m;
}

Operator sigma_minus() {
  Operator m = Operator::Zero(2, 2);
  m(1, 0) = 1;
  return m;
}

Operator projector(Eigen::Index dim, Eigen::Index k) {
  if (k < 0 || k >= dim) {
    throw std::invalid_argument("projector: index out of range");
  }
  Operator m = Operator::Zero(dim, dim);
  m(k, k) = 1;
  return m;
}

}  // namespace qfilter
