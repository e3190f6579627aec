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

#include <cstdint>
#include <optional>
#include <vector>

#include "qfilter/master.hpp"
#include "qfilter/operators.hpp"

namespace qfilter {

/// A jump recorded while tr[L†L rho] is at or below this floor signals a
/// record inconsistent with the model rather than a numerical accident:
/// the jump map L rho L† / tr[L†L rho] is 0/0 there.
inline constexpr double kJumpFloor = 1e-12;

struct SeedProvenance {
  std::uint64_t master_seed = 0;
  std::uint64_t trajectory_index = 0;
};

/// Discrete observation path: per-step increments dy_k (homodyne, real)
/// or dN_k in {0,1} (counting, stored as 0.0/1.0).
struct ObservationRecord {
  TimeGrid grid;
  Detection detection = Detection::kHomodyne;
  std::vector<double> increments;  // n_steps entries
  std::optional<SeedProvenance> seed_provenance;
};

/// Throws std::invalid_argument unless the grid is valid, the increment
/// count matches n_steps, homodyne increments are finite, and counting
/// increments are exactly 0 or 1.
void validate_record(const ObservationRecord& record);

enum class FilterKind { kNormalized, kLinear };

/// Conditional-state path. Normalized filters fill `states`; the linear
/// filter fills `linear_states` plus `norms` (the trace weights, which are
/// data, not an error to be repaired away).
struct FilterTrajectory {
  TimeGrid grid;
  FilterKind kind = FilterKind::kNormalized;
  std::vector<DensityMatrix> states;
  std::vector<Operator> linear_states;
  std::vector<double> norms;
};

// Single filtering steps (Euler-Maruyama plus nearest_density repair).
// The _raw variants expose the pre-repair update for accuracy probes.

/// drho = L*(rho)dt + (L rho + rho L† - tr[(L+L†)rho] rho)(dy - tr[(L+L†)rho]dt)
Operator homodyne_sme_step_raw(const SystemModel& m, const DensityMatrix& rho,
                               double dy, double dt);
DensityMatrix homodyne_sme_step(const SystemModel& m, const DensityMatrix& rho,
                                double dy, double dt);

/// dN = 0: drho = (L*(rho) - L rho L† + tr[L†L rho] rho)dt.
/// dN = 1: the same smooth part, then rho -> L rho L† / tr[L†L rho].
Operator counting_sme_step_raw(const SystemModel& m, const DensityMatrix& rho,
                               int dn, double dt);
DensityMatrix counting_sme_step(const SystemModel& m, const DensityMatrix& rho,
                                int dn, double dt);

/// dsigma = L*(sigma)dt + (L sigma + sigma L†)dy. Linear: no repair, no
/// normalization. Throws DivergenceError if tr drops to <= 0.
Operator zakai_step(const SystemModel& m, const Operator& sigma, double dy,
                    double dt);

/// nearest_density(sigma / tr(sigma)); throws std::invalid_argument on
/// nonpositive trace.
DensityMatrix normalize_linear(const Operator& sigma);

/// Iterates the matching step operation over a record. The linear kind is
/// implemented for homodyne detection only. Step errors propagate with the
/// step index attached.
FilterTrajectory run_filter(const SystemModel& m,
                            const ObservationRecord& record, FilterKind kind);

/// Innovation increments from the pre-step conditional states:
/// dw_k = dy_k - tr[(L+L†)rho_k]dt (homodyne),
/// dm_k = dN_k - tr[L†L rho_k]dt (counting).
std::vector<double> innovations(const SystemModel& m,
                                const ObservationRecord& record,
                                const FilterTrajectory& traj);

}  // namespace qfilter
