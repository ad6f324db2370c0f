// SPDX-License-Identifier: Apache-2.0
#include "cfbits/types.hpp"

namespace cfbits {

void SystemConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (num_aps < 1) fail("num_aps must be >= 1");
  if (num_ues < 1) fail("num_ues must be >= 1");
  if (antennas_per_ap < 1) fail("antennas_per_ap must be >= 1");
  if (bit_budget < 0) fail("bit_budget must be >= 0");
  if (pilot_length < num_ues) fail("pilot_length must be >= num_ues (orthogonal pilots)");
  if (pilot_power_w <= 0.0) fail("pilot_power_w must be > 0");
  if (uplink_power_w <= 0.0) fail("uplink_power_w must be > 0");
  if (noise_power_w <= 0.0) fail("noise_power_w must be > 0");
  if (bandwidth_hz <= 0.0) fail("bandwidth_hz must be > 0");
  if (carrier_freq_hz <= 0.0) fail("carrier_freq_hz must be > 0");
  if (shadowing_std_db < 0.0) fail("shadowing_std_db must be >= 0");
}

std::string objective_name(Objective objective) {
  return objective == Objective::kTotalSe ? "total" : "maxmin";
}

Objective objective_from_name(const std::string& name) {
  if (name == "total") return Objective::kTotalSe;
  if (name == "maxmin") return Objective::kMaxMinSe;
  throw std::invalid_argument("unknown objective '" + name + "' (expected total|maxmin)");
}

long long total_bits(const BitGrid& bits) {
  long long sum = 0;
  for (int v : bits.data()) sum += v;
  return sum;
}

bool within_bit_caps(const BitGrid& bits, int max_bits) {
  for (int v : bits.data())
    if (v < 0 || v > max_bits) return false;
  return true;
}

std::optional<std::vector<int>> uniform_ap_view(const BitGrid& bits) {
  std::vector<int> view(bits.rows());
  for (int m = 0; m < bits.rows(); ++m) {
    view[m] = bits(m, 0);
    for (int k = 1; k < bits.cols(); ++k)
      if (bits(m, k) != view[m]) return std::nullopt;
  }
  return view;
}

}  // namespace cfbits
