// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cfbits/quantization.hpp"
#include "cfbits/rng.hpp"
#include "cfbits/types.hpp"

namespace cfbits {

/// One draw of instantaneous channels: true channels g, LMMSE estimates
/// g_hat, and estimation errors e = g - g_hat, each an M x K family of
/// length-N complex vectors.
struct ChannelRealization {
  int num_aps = 0;
  int num_ues = 0;
  int antennas = 0;
  std::vector<CVec> g;      // index m * K + k
  std::vector<CVec> g_hat;
  std::vector<CVec> e;

  const CVec& true_channel(int m, int k) const { return g[m * num_ues + k]; }
  const CVec& estimate(int m, int k) const { return g_hat[m * num_ues + k]; }
  const CVec& error(int m, int k) const { return e[m * num_ues + k]; }
};

/// Draws channels, simulates the projected pilot observation and applies the
/// LMMSE estimator coefficient.
ChannelRealization sample_realization(const ChannelStatistics& stats, const SystemConfig& config,
                                      Rng& rng);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;

  bool within(double reference, double num_sigmas = 3.0, double abs_slack = 0.0) const {
    return std::abs(reference - value) <= num_sigmas * std_error + abs_slack;
  }
};

/// Monte-Carlo estimates of the five SINR components for one UE under a fixed
/// unit-norm receiver filter, with standard errors of the sample means. The
/// quantization-noise power applies the AQNM variance formula to the
/// empirical quantizer input power; the data-symbol average inside that power
/// is taken in closed form per realization.
struct ComponentEstimates {
  Estimate desired;
  Estimate beamforming_uncertainty;
  Estimate interference;
  Estimate noise;
  Estimate quantization_noise;
};

ComponentEstimates estimate_components(int ue, const ChannelStatistics& stats,
                                       const BitGrid& bits,
                                       std::span<const std::complex<double>> filter,
                                       const SystemConfig& config,
                                       const QuantizationProfile& profile, int num_samples,
                                       Rng& rng);

/// Generic oracle for the receiver-filter problem: power iteration on
/// B^{-1} A until successive Rayleigh quotients differ by less than `tol`
/// relative. A Hermitian, B Hermitian positive definite. Throws
/// std::runtime_error when the iteration fails to converge.
CVec dominant_generalized_eigvec(const CGrid& a, const CGrid& b, double tol = 1e-12,
                                 int max_iterations = 10000);

/// u^H A u / u^H B u for dense Hermitian matrices.
double rayleigh_quotient(const CGrid& a, const CGrid& b,
                         std::span<const std::complex<double>> u);

}  // namespace cfbits
