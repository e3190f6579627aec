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
#include <cstdint>
#include <numbers>
#include <random>

namespace qfilter {

/// One round of the splitmix64 finalizer (Steele, Lea, Flood 2014); a
/// bijection on 64-bit words.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

/// Per-trajectory seed: two finalizer rounds over the master seed XORed
/// with a golden-ratio-salted index. Every stage is a bijection in the
/// index, so distinct indices give distinct seeds for any fixed master
/// seed (not just over the tested 10^6 sample).
inline constexpr std::uint64_t derive_seed(std::uint64_t master_seed,
                                           std::uint64_t index) {
  const std::uint64_t salted = 0x9e3779b97f4a7c15ULL * (index + 1);
  return mix64(mix64(master_seed ^ salted));
}

/// Per-trajectory random stream: mt19937_64 driven uniforms and Box-Muller
/// gaussians. The distributions are hand-rolled because the standard
/// library's distribution objects are implementation-defined; this keeps
/// records reproducible across standard libraries for a fixed platform.
class TrajectoryRng {
 public:
  explicit TrajectoryRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via the basic Box-Muller transform; generates pairs,
  /// caches the second value.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qfilter
