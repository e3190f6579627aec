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

#include "qfilter/ito.hpp"

#include <sstream>

#include "qfilter/numfmt.hpp"

namespace qfilter {

namespace {

int increment_index(ItoIncrement k) { return static_cast<int>(k); }

ItoIncrement from_basis(ItoBasis b) {
  switch (b) {
    case ItoBasis::kDt:
      return ItoIncrement::kDt;
    case ItoBasis::kDA:
      return ItoIncrement::kDA;
    case ItoBasis::kDAdag:
      return ItoIncrement::kDAdag;
    case ItoBasis::kDLambda:
      return ItoIncrement::kDLambda;
    case ItoBasis::kUnit:
      break;
  }
  throw std::logic_error("from_basis: unit has no increment");
}

}  // namespace

ItoBasis to_basis(ItoIncrement k) {
  switch (k) {
    case ItoIncrement::kDt:
      return ItoBasis::kDt;
    case ItoIncrement::kDA:
      return ItoBasis::kDA;
    case ItoIncrement::kDAdag:
      return ItoBasis::kDAdag;
    case ItoIncrement::kDLambda:
      return ItoBasis::kDLambda;
  }
  throw std::logic_error("to_basis: bad increment");
}

const ItoTable& ItoTable::standard() {
  static const ItoTable table = [] {
    ItoTable t;
    auto set = [&t](ItoIncrement a, ItoIncrement b, ItoIncrement r) {
      t.entries[increment_index(a)][increment_index(b)] = Entry{r, 1.0};
    };
    set(ItoIncrement::kDA, ItoIncrement::kDAdag, ItoIncrement::kDt);
    set(ItoIncrement::kDA, ItoIncrement::kDLambda, ItoIncrement::kDA);
    set(ItoIncrement::kDLambda, ItoIncrement::kDAdag, ItoIncrement::kDAdag);
    set(ItoIncrement::kDLambda, ItoIncrement::kDLambda, ItoIncrement::kDLambda);
    return t;
  }();
  return table;
}

std::optional<ItoTable::Entry> ItoTable::product(ItoIncrement a,
                                                 ItoIncrement b) const {
  return entries[increment_index(a)][increment_index(b)];
}

std::optional<ItoIncrement> ito_table(ItoIncrement a, ItoIncrement b) {
  auto e = ItoTable::standard().product(a, b);
  if (!e) return std::nullopt;
  return e->kind;
}

ItoExpression::ItoExpression(Eigen::Index dim) : dim_(dim) {
  if (dim < 1) {
    throw std::invalid_argument("ItoExpression: dimension must be >= 1");
  }
}

void ItoExpression::add_term(ItoBasis basis, const Operator& coeff) {
  if (coeff.rows() != dim_ || coeff.cols() != dim_) {
    throw std::invalid_argument("ItoExpression::add_term: dimension mismatch");
  }
  auto it = terms_.find(basis);
  if (it == terms_.end()) {
    if (max_abs(coeff) == 0.0) return;
    terms_.emplace(basis, coeff);
    return;
  }
  it->second += coeff;
  if (max_abs(it->second) == 0.0) terms_.erase(it);
}

bool ItoExpression::has_term(ItoBasis basis) const {
  return terms_.count(basis) > 0;
}

Operator ItoExpression::coefficient(ItoBasis basis) const {
  auto it = terms_.find(basis);
  if (it == terms_.end()) return Operator::Zero(dim_, dim_);
  return it->second;
}

double ItoExpression::max_coefficient_abs() const {
  double worst = 0.0;
  for (const auto& [basis, coeff] : terms_) {
    worst = std::max(worst, max_abs(coeff));
  }
  return worst;
}

ItoExpression operator+(const ItoExpression& a, const ItoExpression& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("ItoExpression +: dimension mismatch");
  }
  ItoExpression out = a;
  for (const auto& [basis, coeff] : b.terms()) out.add_term(basis, coeff);
  return out;
}

ItoExpression operator-(const ItoExpression& a, const ItoExpression& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("ItoExpression -: dimension mismatch");
  }
  ItoExpression out = a;
  for (const auto& [basis, coeff] : b.terms()) {
    out.add_term(basis, Operator(-coeff));
  }
  return out;
}

ItoExpression expr_mul(const ItoExpression& a, const ItoExpression& b,
                       const ItoTable& table) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("expr_mul: dimension mismatch");
  }
  ItoExpression out(a.dim());
  for (const auto& [ba, ca] : a.terms()) {
    for (const auto& [bb, cb] : b.terms()) {
      if (ba == ItoBasis::kUnit) {
        out.add_term(bb, Operator(ca * cb));
      } else if (bb == ItoBasis::kUnit) {
        out.add_term(ba, Operator(ca * cb));
      } else {
        // Both factors are increments; resolve through the table. dt
        // absorbs everything to zero, so only table hits survive.
        auto entry = table.product(from_basis(ba), from_basis(bb));
        if (entry) {
          out.add_term(to_basis(entry->kind), Operator(entry->factor * ca * cb));
        }
      }
    }
  }
  return out;
}

ItoExpression expr_adjoint(const ItoExpression& a) {
  ItoExpression out(a.dim());
  for (const auto& [basis, coeff] : a.terms()) {
    ItoBasis adj = basis;
    if (basis == ItoBasis::kDA) adj = ItoBasis::kDAdag;
    if (basis == ItoBasis::kDAdag) adj = ItoBasis::kDA;
    out.add_term(adj, Operator(coeff.adjoint()));
  }
  return out;
}

HpCoefficients hp_coefficients(const SystemModel& m) {
  const Operator& h = m.hamiltonian;
  const Operator& l = m.coupling;
  const Operator l_adj = l.adjoint();
  HpCoefficients c;
  c.creation = l;
  c.annihilation = -l_adj;
  c.gauge = Operator::Zero(m.dim(), m.dim());
  c.drift = -0.5 * (l_adj * l) - Complex(0, 1) * h;
  return c;
}

ItoExpression hp_differential(const SystemModel& m) {
  const HpCoefficients c = hp_coefficients(m);
  ItoExpression e(m.dim());
  e.add_term(ItoBasis::kDAdag, c.creation);
  e.add_term(ItoBasis::kDA, c.annihilation);
  e.add_term(ItoBasis::kDLambda, c.gauge);
  e.add_term(ItoBasis::kDt, c.drift);
  return e;
}

ItoExpression check_unitarity(const SystemModel& m, const ItoTable& table) {
  const ItoExpression e = hp_differential(m);
  const ItoExpression e_adj = expr_adjoint(e);
  return e_adj + e + expr_mul(e_adj, e, table);
}

ItoExpression flow_differential(const SystemModel& m, const Operator& x,
                                const ItoTable& table) {
  if (x.rows() != m.dim() || x.cols() != m.dim()) {
    throw std::invalid_argument("flow_differential: dimension mismatch");
  }
  const ItoExpression e = hp_differential(m);
  const ItoExpression e_adj = expr_adjoint(e);
  ItoExpression xu(m.dim());
  xu.add_term(ItoBasis::kUnit, x);
  // d(U†xU) = dU†·xU + U†x·dU + dU†x·dU, i.e. e†x + xe + e†xe between
  // U† and U.
  return expr_mul(e_adj, xu, table) + expr_mul(xu, e, table) +
         expr_mul(expr_mul(e_adj, xu, table), e, table);
}

Operator vacuum_drift(const ItoExpression& e) {
  return e.coefficient(ItoBasis::kDt);
}

namespace {

std::string basis_label(ItoBasis b) {
  switch (b) {
    case ItoBasis::kUnit:
      return "";
    case ItoBasis::kDt:
      return "\xC2\xB7""dt";
    case ItoBasis::kDA:
      return "\xC2\xB7""dA";
    case ItoBasis::kDAdag:
      return "\xC2\xB7""dA\xE2\x80\xA0";
    case ItoBasis::kDLambda:
      return "\xC2\xB7""d\xCE\x9B";
  }
  return "";
}

std::string format_matrix(const Operator& m) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i > 0) os << ", ";
    os << "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ", ";
      // Drop negative zeros; they are noise in a derivation printout.
      const Complex v = m(i, j);
      os << format_complex(Complex(v.real() == 0.0 ? 0.0 : v.real(),
                                   v.imag() == 0.0 ? 0.0 : v.imag()));
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace

std::string to_string(const ItoExpression& e) {
  if (e.terms().empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [basis, coeff] : e.terms()) {
    if (!first) os << " + ";
    first = false;
    os << format_matrix(coeff) << basis_label(basis);
  }
  return os.str();
}

}  // namespace qfilter
