// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cfbits/rng.hpp"
#include "cfbits/types.hpp"

namespace cfbits {

inline constexpr double kBoltzmannJPerK = 1.381e-23;
inline constexpr double kNoiseTemperatureK = 290.0;

/// AP-UE distances below this floor are clamped before the pathloss model,
/// which diverges as the distance goes to zero.
inline constexpr double kMinApUeDistanceM = 1.0;

/// Thermal noise power over the signal bandwidth, linear watts.
double derive_noise_power_w(double bandwidth_hz, double noise_figure_db,
                            double temperature_k = kNoiseTemperatureK);

double dbm_to_watts(double dbm);
double db_to_linear(double db);

/// UMi pathloss in dB: 36.7 log10(d) + 22.7 + 26 log10(f_c) + shadowing,
/// with d in meters and f_c in GHz. Throws std::domain_error for d <= 0.
double pathloss_db(double distance_m, double carrier_ghz, double shadow_db);

/// Large-scale gain matrix from geometry; one fresh shadowing draw per AP-UE
/// pair (row-major order). Pure function of (geometry, config, stream state).
RealGrid beta_from_geometry(const Geometry& geometry, const SystemConfig& config, Rng& rng);

/// Variance of the per-element LMMSE channel estimate for a given large-scale
/// gain: tau_p * p_p * beta^2 / (sigma_n^2 + tau_p * p_p * beta).
double gamma_from_beta(double beta, const SystemConfig& config);

ChannelStatistics build_channel_statistics(const Geometry& geometry, const SystemConfig& config,
                                           Rng& rng);

/// The four-corner AP layout at (+-half_spacing, +-half_spacing) when M == 4;
/// a centered square grid spanning the same extent otherwise.
std::vector<std::array<double, 2>> default_ap_positions(int num_aps, double half_spacing_m);

/// UE positions drawn uniformly over an axis-aligned square.
std::vector<std::array<double, 2>> draw_ue_positions(int num_ues, double area_side_m,
                                                     std::array<double, 2> center, Rng& rng);

}  // namespace cfbits
