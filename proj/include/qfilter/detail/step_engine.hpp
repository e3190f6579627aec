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

#include "qfilter/operators.hpp"

namespace qfilter::detail {

/// Shared stepping kernel behind the filter step operations and the
/// trajectory simulator. Caches L†, L†L, L+L† and scratch matrices so the
/// per-step cost is a handful of small gemms with no allocation. The
/// simulator and the filter replay must go through the same engine entry
/// points: bitwise reproducibility of the replay depends on both sides
/// performing identical arithmetic in identical order.
///
/// Not thread-safe; use one engine per thread.
class StepEngine {
 public:
  explicit StepEngine(const SystemModel& m);

  Eigen::Index dim() const { return h_.rows(); }

  /// tr[(L+L†)rho], the homodyne signal drift.
  double homodyne_signal(const Operator& rho) const;

  /// tr[L†L rho], the counting jump rate.
  double counting_rate(const Operator& rho) const;

  /// out = -i[H,rho] + L rho L† - {L†L, rho}/2. out must not alias rho.
  void lindblad_into(const Operator& rho, Operator& out);

  /// Euler-Maruyama homodyne SME update, pre-repair. Uses the innovation
  /// dy - tr[(L+L†)rho]dt internally and returns it, so a record built as
  /// dy = signal*dt + dW round-trips to the same innovation bitwise.
  double homodyne_step_raw(const Operator& rho, double dy, double dt,
                           Operator& out);

  /// No-jump counting update rho + dt*(L*(rho) - L rho L† + tr[L†L rho] rho),
  /// pre-repair.
  void counting_smooth_raw(const Operator& rho, double dt, Operator& out);

  /// out = L rho L† / tr[L†L rho]. Throws DivergenceError when the rate is
  /// at or below kJumpFloor: a jump recorded there is inconsistent with the
  /// model, not a roundoff accident.
  void counting_jump(const Operator& rho, Operator& out);

  /// Linear (unnormalized) update sigma + L*(sigma)dt + (L sigma + sigma L†)dy.
  /// No repair and no normalization.
  void zakai_step_raw(const Operator& sigma, double dy, double dt,
                      Operator& out);

 private:
  Operator h_;      // H
  Operator l_;      // L
  Operator l_adj_;  // L†
  Operator ldl_;    // L†L
  Operator lpld_;   // L + L†
  Operator w1_;     // scratch: holds L*rho after lindblad_into
  Operator w2_;
  Operator w3_;
  Operator lind_;
};

}  // namespace qfilter::detail
