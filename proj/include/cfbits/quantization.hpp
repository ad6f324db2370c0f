// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace cfbits {

/// Distortion table for the minimum-MSE symmetric uniform quantizer with 2^b
/// levels and Gaussian input, used by the additive quantization noise model:
/// a b-bit link applies gain (1 - rho(b)) and adds uncorrelated noise of
/// variance rho(b) * (1 - rho(b)) * input power.
///
/// rho(0) = 1 by convention: a zero-rate link conveys nothing, so both the
/// AQNM gain and the quantization-noise power vanish. Entries 1..5 are the
/// classic published values (Max, 1960); entries 6..12 are precomputed by the
/// same construction (step-size minimization, see the test-suite oracle).
class QuantizationProfile {
 public:
  static constexpr int kTableMaxBits = 12;
  static constexpr int kDefaultMaxBits = 12;
  static constexpr int kPublishedMaxBits = 5;

  explicit QuantizationProfile(int max_bits = kDefaultMaxBits);

  /// Distortion for an allocation of `bits`. Throws std::domain_error outside
  /// [0, max_bits].
  double rho(int bits) const;

  /// AQNM linear gain 1 - rho(bits).
  double gain(int bits) const;

  int max_bits() const { return max_bits_; }

  /// "published" for 1..5, "convention" for 0, "computed" for the extension.
  static std::string provenance(int bits);

  static const std::array<double, kTableMaxBits + 1>& table();

 private:
  int max_bits_;
};

/// Diagonal of the AQNM gain matrix for one UE: entry m is (1 - rho(b_m)).
std::vector<double> omega_diagonal(std::span<const int> bits_per_ap,
                                   const QuantizationProfile& profile);

}  // namespace cfbits
