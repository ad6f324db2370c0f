// SPDX-License-Identifier: Apache-2.0
#include "cfbits/quantization.hpp"

#include <stdexcept>

namespace cfbits {
namespace {

constexpr std::array<double, QuantizationProfile::kTableMaxBits + 1> kRhoTable = {
    1.0,        // 0 bits: zero-rate convention
    0.3634,     // published
    0.1188,     // published
    0.03744,    // published
    0.01154,    // published
    0.003490,   // published
    1.040045408792e-03,  // computed extension (uniform-quantizer MSE minimum)
    3.043327708236e-04,
    8.768618578416e-05,
    2.491902964586e-05,
    6.997005196089e-06,
    1.944413127913e-06,
    5.355365370823e-07,
};

}  // namespace

QuantizationProfile::QuantizationProfile(int max_bits) : max_bits_(max_bits) {
  if (max_bits < 0 || max_bits > kTableMaxBits)
    throw std::domain_error("QuantizationProfile: max_bits must be in [0, " +
                            std::to_string(kTableMaxBits) + "]");
}

double QuantizationProfile::rho(int bits) const {
  if (bits < 0 || bits > max_bits_)
    throw std::domain_error("rho: bit count " + std::to_string(bits) + " outside [0, " +
                            std::to_string(max_bits_) + "]");
  return kRhoTable[bits];
}

double QuantizationProfile::gain(int bits) const { return 1.0 - rho(bits); }

std::string QuantizationProfile::provenance(int bits) {
  if (bits == 0) return "convention";
  if (bits <= kPublishedMaxBits) return "published";
  return "computed";
}

const std::array<double, QuantizationProfile::kTableMaxBits + 1>& QuantizationProfile::table() {
  return kRhoTable;
}

std::vector<double> omega_diagonal(std::span<const int> bits_per_ap,
                                   const QuantizationProfile& profile) {
  std::vector<double> diag(bits_per_ap.size());
  for (std::size_t m = 0; m < bits_per_ap.size(); ++m) diag[m] = profile.gain(bits_per_ap[m]);
  return diag;
}

}  // namespace cfbits
