/*
 Copyright 2026 The lqgsi Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <cstdint>

#include "lqgsi/linalg.hpp"

namespace lqgsi {

/// Counter-based generator.  Output i of stream s under seed k is
///
///   splitmix64(key + (i + 1) * 0x9E3779B97F4A7C15),  key = splitmix64(k ^ splitmix64(s))
///
/// where splitmix64 is the finalizer of Steele, Lea and Flood.  Because every
/// draw is a pure function of (seed, stream, counter), streams can be handed to
/// threads without affecting the numbers they produce.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal by the Marsaglia polar method: draw u1 then u2 uniform
  /// on (-1, 1), reject while s = u1^2 + u2^2 is 0 or >= 1, return
  /// u1 * sqrt(-2 ln s / s) and cache u2 * sqrt(-2 ln s / s) for the next call.
  double gaussian();
  void fill_gaussian(Vec& out);

  std::uint64_t counter() const noexcept { return counter_; }

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Stream ids used by the simulator: (batch << 8) | kind.
enum class NoiseKind : std::uint64_t { Process = 0, Observation = 1, Encoder = 2, Initial = 3 };

constexpr std::uint64_t stream_id(std::uint64_t batch, NoiseKind kind) {
  return (batch << 8) | static_cast<std::uint64_t>(kind);
}

}  // namespace lqgsi
