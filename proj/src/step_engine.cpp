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

#include "qfilter/detail/step_engine.hpp"

#include <string>

#include "qfilter/filters.hpp"

namespace qfilter::detail {

StepEngine::StepEngine(const SystemModel& m)
    : h_(m.hamiltonian),
      l_(m.coupling),
      l_adj_(m.coupling.adjoint()),
      ldl_(l_adj_ * l_),
      lpld_(l_ + l_adj_),
      w1_(Operator::Zero(m.dim(), m.dim())),
      w2_(Operator::Zero(m.dim(), m.dim())),
      w3_(Operator::Zero(m.dim(), m.dim())),
      lind_(Operator::Zero(m.dim(), m.dim())) {}

double StepEngine::homodyne_signal(const Operator& rho) const {
  return trace_of_product(lpld_, rho).real();
}

double StepEngine::counting_rate(const Operator& rho) const {
  return trace_of_product(ldl_, rho).real();
}

void StepEngine::lindblad_into(const Operator& rho, Operator& out) {
  w1_.noalias() = l_ * rho;        // L rho
  w2_.noalias() = w1_ * l_adj_;    // L rho L†
  w3_.noalias() = ldl_ * rho;      // L†L rho
  w3_.noalias() += rho * ldl_;     // {L†L, rho}
  out.noalias() = h_ * rho;
  out.noalias() -= rho * h_;       // [H, rho]
  out = Complex(0.0, -1.0) * out + w2_ - 0.5 * w3_;
}

double StepEngine::homodyne_step_raw(const Operator& rho, double dy, double dt,
                                     Operator& out) {
  const double signal = homodyne_signal(rho);
  const double dw = dy - signal * dt;
  lindblad_into(rho, lind_);  // leaves w1_ = L rho
  out = rho + dt * lind_ + dw * (w1_ + w1_.adjoint() - signal * rho);
  return dw;
}

void StepEngine::counting_smooth_raw(const Operator& rho, double dt,
                                     Operator& out) {
  const double rate = counting_rate(rho);
  w3_.noalias() = ldl_ * rho;
  w3_.noalias() += rho * ldl_;     // {L†L, rho}
  out.noalias() = h_ * rho;
  out.noalias() -= rho * h_;       // [H, rho]
  out = rho + dt * (Complex(0.0, -1.0) * out - 0.5 * w3_ + rate * rho);
}

void StepEngine::counting_jump(const Operator& rho, Operator& out) {
  const double rate = counting_rate(rho);
  if (!(rate > kJumpFloor)) {
    throw DivergenceError(
        "counting jump requested with rate trace " + std::to_string(rate) +
        " at or below the jump floor; record is inconsistent with the model");
  }
  w1_.noalias() = l_ * rho;
  out.noalias() = w1_ * l_adj_;
  out /= rate;
}

void StepEngine::zakai_step_raw(const Operator& sigma, double dy, double dt,
                                Operator& out) {
  lindblad_into(sigma, lind_);  // leaves w1_ = L sigma
  out = sigma + dt * lind_ + dy * (w1_ + w1_.adjoint());
}

}  // namespace qfilter::detail
