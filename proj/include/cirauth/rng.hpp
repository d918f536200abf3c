// Copyright 2026 The cirauth Authors
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

#include <array>
#include <complex>
#include <cstdint>
#include <limits>

#include <Eigen/Core>

namespace cirauth {

/// Philox4x32-10 block function. Exposed for known-answer testing.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/**
 * Counter-based random stream addressed by (seed, stream_id).
 *
 * The seed is the Philox key; the stream id occupies the upper half of the
 * 128-bit counter and the draw index the lower half, so any two streams are
 * disjoint slices of the same keyed permutation. Draws depend only on the
 * address and the number of values already consumed, never on which thread
 * runs the stream.
 *
 * Satisfies UniformRandomBitGenerator.
 */
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  /// Standard normal via Box-Muller; the second variate of each pair is
  /// cached.
  double normal();

  /// Fresh stream sharing this generator's seed.
  Rng substream(std::uint64_t stream_id) const { return {seed_, stream_id}; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;  // 32-bit words consumed from buffer_
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// n draws from CN(0, variance): real and imaginary parts independent
/// N(0, variance / 2). Throws InvalidParameter unless variance > 0.
Eigen::VectorXcd sample_complex_gaussian(Rng& rng, Eigen::Index n,
                                         double variance);

}  // namespace cirauth
