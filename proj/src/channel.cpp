// SPDX-License-Identifier: Apache-2.0
#include "cfbits/channel.hpp"

#include <cmath>

namespace cfbits {

double derive_noise_power_w(double bandwidth_hz, double noise_figure_db, double temperature_k) {
  return bandwidth_hz * kBoltzmannJPerK * temperature_k * db_to_linear(noise_figure_db);
}

double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double pathloss_db(double distance_m, double carrier_ghz, double shadow_db) {
  if (distance_m <= 0.0) throw std::domain_error("pathloss_db: distance must be > 0");
  return 36.7 * std::log10(distance_m) + 22.7 + 26.0 * std::log10(carrier_ghz) + shadow_db;
}

RealGrid beta_from_geometry(const Geometry& geometry, const SystemConfig& config, Rng& rng) {
  const int num_aps = static_cast<int>(geometry.ap_positions.size());
  const int num_ues = static_cast<int>(geometry.ue_positions.size());
  RealGrid beta(num_aps, num_ues);
  const double carrier_ghz = config.carrier_freq_hz / 1e9;
  for (int m = 0; m < num_aps; ++m) {
    for (int k = 0; k < num_ues; ++k) {
      const auto& ap = geometry.ap_positions[m];
      const auto& ue = geometry.ue_positions[k];
      const double dx = ap[0] - ue[0];
      const double dy = ap[1] - ue[1];
      const double distance = std::max(std::hypot(dx, dy), kMinApUeDistanceM);
      const double shadow = config.shadowing_std_db * rng.normal();
      beta(m, k) = std::pow(10.0, -pathloss_db(distance, carrier_ghz, shadow) / 10.0);
    }
  }
  return beta;
}

double gamma_from_beta(double beta, const SystemConfig& config) {
  const double pilot_energy = config.pilot_length * config.pilot_power_w;
  return pilot_energy * beta * beta / (config.noise_power_w + pilot_energy * beta);
}

ChannelStatistics build_channel_statistics(const Geometry& geometry, const SystemConfig& config,
                                           Rng& rng) {
  ChannelStatistics stats;
  stats.beta = beta_from_geometry(geometry, config, rng);
  stats.gamma = RealGrid(stats.beta.rows(), stats.beta.cols());
  for (int m = 0; m < stats.beta.rows(); ++m)
    for (int k = 0; k < stats.beta.cols(); ++k)
      stats.gamma(m, k) = gamma_from_beta(stats.beta(m, k), config);
  return stats;
}

std::vector<std::array<double, 2>> default_ap_positions(int num_aps, double half_spacing_m) {
  std::vector<std::array<double, 2>> positions;
  positions.reserve(num_aps);
  if (num_aps == 4) {
    positions = {{-half_spacing_m, -half_spacing_m},
                 {half_spacing_m, -half_spacing_m},
                 {-half_spacing_m, half_spacing_m},
                 {half_spacing_m, half_spacing_m}};
    return positions;
  }
  // Square grid, row-major, centered on the origin.
  int side = 1;
  while (side * side < num_aps) ++side;
  for (int i = 0; i < num_aps; ++i) {
    const int r = i / side;
    const int c = i % side;
    const double step = side > 1 ? 2.0 * half_spacing_m / (side - 1) : 0.0;
    positions.push_back({-half_spacing_m + c * step, -half_spacing_m + r * step});
  }
  return positions;
}

std::vector<std::array<double, 2>> draw_ue_positions(int num_ues, double area_side_m,
                                                     std::array<double, 2> center, Rng& rng) {
  std::vector<std::array<double, 2>> positions;
  positions.reserve(num_ues);
  for (int k = 0; k < num_ues; ++k) {
    const double x = center[0] + (rng.uniform() - 0.5) * area_side_m;
    const double y = center[1] + (rng.uniform() - 0.5) * area_side_m;
    positions.push_back({x, y});
  }
  return positions;
}

}  // namespace cfbits
