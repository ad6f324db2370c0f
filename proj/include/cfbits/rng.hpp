// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace cfbits {

/// Deterministic random stream with named substream derivation.
///
/// All variate transforms (bounded integers, normals) are implemented here
/// instead of relying on std:: distributions, whose sequences are
/// implementation-defined. This keeps every run replayable: a consumer that
/// documents its draw order can be re-driven in a test with a cloned stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Derives an independent child stream. Children depend only on this
  /// stream's construction seed, never on how many draws were consumed.
  Rng substream(std::uint64_t index) const;
  Rng substream(std::string_view name) const;

  std::uint64_t next_u64();

  /// Uniform double in [0, 1).
  double uniform();

  /// Uniform integer in [lo, hi], inclusive. Unbiased (Lemire rejection).
  int uniform_int(int lo, int hi);

  /// Standard normal via Box-Muller. Consumes exactly two uniforms.
  double normal();

  /// Circularly symmetric complex normal with E|z|^2 = 1.
  std::complex<double> complex_normal();

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace cfbits
