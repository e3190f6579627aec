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

#include <map>
#include <optional>
#include <string>

#include "qfilter/operators.hpp"

namespace qfilter {

/// Fundamental increments of the probe field: dt, the annihilation and
/// creation increments dA, dA†, and the gauge (counting) increment dΛ.
enum class ItoIncrement { kDt, kDA, kDAdag, kDLambda };

/// Basis of formal expressions: the increments plus a unit slot carrying
/// the non-differential operator part.
enum class ItoBasis { kUnit, kDt, kDA, kDAdag, kDLambda };

ItoBasis to_basis(ItoIncrement k);

/// Product table for the fundamental increments. The vacuum table has
/// exactly four nonzero entries:
///   dA·dA† = dt, dA·dΛ = dA, dΛ·dA† = dA†, dΛ·dΛ = dΛ;
/// every other product, including anything involving dt, vanishes.
/// Entries carry a scalar factor (1 in the physical table) so tests can
/// inject sign faults and watch derivations break.
struct ItoTable {
  struct Entry {
    ItoIncrement kind;
    Complex factor;
  };

  std::optional<Entry> entries[4][4];

  static const ItoTable& standard();
  std::optional<Entry> product(ItoIncrement a, ItoIncrement b) const;
};

/// Product of two fundamental increments under the standard vacuum table;
/// nullopt means the product is zero.
std::optional<ItoIncrement> ito_table(ItoIncrement a, ItoIncrement b);

/// Formal sum of system-operator coefficients times basis elements. All
/// coefficients share one dimension; exact-zero coefficients are pruned.
class ItoExpression {
 public:
  explicit ItoExpression(Eigen::Index dim);

  Eigen::Index dim() const { return dim_; }
  const std::map<ItoBasis, Operator>& terms() const { return terms_; }

  /// Accumulates coeff into the given slot, pruning exact zeros.
  void add_term(ItoBasis basis, const Operator& coeff);

  bool has_term(ItoBasis basis) const;
  /// Coefficient of the given basis element (zero matrix if absent).
  Operator coefficient(ItoBasis basis) const;

  double max_coefficient_abs() const;
  bool is_zero(double tol) const { return max_coefficient_abs() <= tol; }

 private:
  Eigen::Index dim_;
  std::map<ItoBasis, Operator> terms_;
};

ItoExpression operator+(const ItoExpression& a, const ItoExpression& b);
ItoExpression operator-(const ItoExpression& a, const ItoExpression& b);

/// Quantum Itô product d(XY) = (dX)Y + X(dY) + (dX)(dY): coefficients
/// multiply in written order, increment products resolve through the
/// table. Adaptedness (system coefficients commuting with forward
/// increments) is built into the representation.
ItoExpression expr_mul(const ItoExpression& a, const ItoExpression& b,
                       const ItoTable& table = ItoTable::standard());

/// Conjugate coefficients and swap dA ↔ dA†; dt and dΛ are self-adjoint.
ItoExpression expr_adjoint(const ItoExpression& a);

/// Coefficient bundle of the system-probe unitary equation
/// dU = (creation·dA† + annihilation·dA + gauge·dΛ + drift·dt)·U.
struct HpCoefficients {
  Operator creation;      // L
  Operator annihilation;  // -L†
  Operator gauge;         // 0 (identity scattering)
  Operator drift;         // -(L†L/2 + iH)
};

HpCoefficients hp_coefficients(const SystemModel& m);

/// dU as a formal expression (coefficients acting on U from the left).
ItoExpression hp_differential(const SystemModel& m);

/// Symbolic expansion of d(U†U) = dU†·U + U†·dU + dU†·dU. Returns the
/// residual expression, which is empty (all coefficients below 1e-12)
/// for every valid model under the standard table.
ItoExpression check_unitarity(const SystemModel& m,
                              const ItoTable& table = ItoTable::standard());

/// d j_t(x) for the flow j_t(x) = U†xU, expanded through the Itô rule:
/// the dt coefficient reproduces the Heisenberg Lindblad generator, the
/// martingale part is [x,L]·dA† + [L†,x]·dA.
ItoExpression flow_differential(const SystemModel& m, const Operator& x,
                                const ItoTable& table = ItoTable::standard());

/// Vacuum expectation annihilates dA, dA†, dΛ; returns the dt drift.
Operator vacuum_drift(const ItoExpression& e);

/// Plain UTF-8 rendering, e.g. "[[0, 0], [1, 0]]·dA† + ...". Empty
/// expressions render as "0".
std::string to_string(const ItoExpression& e);

}  // namespace qfilter
