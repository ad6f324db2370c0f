// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>

#include "cfbits/mc_oracle.hpp"
#include "cfbits/sinr.hpp"
#include "support/test_instances.hpp"

using namespace cfbits;
using cfbits::test_support::Instance;
using cfbits::test_support::random_instance;

TEST_SUITE("mc") {

TEST_CASE("realization moments follow the estimation model") {
  SystemConfig cfg = default_spec().scenario.system;
  cfg.num_aps = 1;
  cfg.num_ues = 2;
  cfg.antennas_per_ap = 4;
  cfg.pilot_length = 2;
  ChannelStatistics stats;
  stats.beta = RealGrid(1, 2);
  stats.beta(0, 0) = 4e-11;
  stats.beta(0, 1) = 9e-12;
  stats.gamma = RealGrid(1, 2);
  for (int k = 0; k < 2; ++k) stats.gamma(0, k) = gamma_from_beta(stats.beta(0, k), cfg);

  const int samples = 100000;
  Rng rng(31);
  std::complex<double> mean_est = 0.0;
  double est_power = 0.0, err_power = 0.0;
  std::complex<double> est_err_corr = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto real = sample_realization(stats, cfg, rng);
    for (int n = 0; n < cfg.antennas_per_ap; ++n) {
      mean_est += real.estimate(0, 0)[n];
      est_power += std::norm(real.estimate(0, 0)[n]);
      err_power += std::norm(real.error(0, 0)[n]);
      est_err_corr += std::conj(real.estimate(0, 0)[n]) * real.error(0, 0)[n];
    }
  }
  const double count = static_cast<double>(samples) * cfg.antennas_per_ap;
  const double gamma = stats.gamma(0, 0);

  // Element mean -> 0 within 3 sigma (per-element std is sqrt(gamma/2) per axis).
  const double mean_sigma = std::sqrt(gamma / 2.0 / count);
  CHECK(std::abs(mean_est.real() / count) < 3.0 * mean_sigma);
  CHECK(std::abs(mean_est.imag() / count) < 3.0 * mean_sigma);

  // Element variance -> gamma within 2%, error variance -> beta - gamma.
  CHECK(est_power / count == doctest::Approx(gamma).epsilon(0.02));
  CHECK(err_power / count ==
        doctest::Approx(stats.beta(0, 0) - gamma).epsilon(0.02));

  // Estimate and error are uncorrelated: 3 sigma band around zero.
  const double corr_sigma = std::sqrt(gamma * (stats.beta(0, 0) - gamma) / count);
  CHECK(std::abs(est_err_corr.real() / count) < 3.0 * corr_sigma);
  CHECK(std::abs(est_err_corr.imag() / count) < 3.0 * corr_sigma);
}

TEST_CASE("single-AP desired power matches its closed form") {
  SystemConfig cfg = default_spec().scenario.system;
  cfg.num_aps = 1;
  cfg.num_ues = 1;
  cfg.antennas_per_ap = 4;
  cfg.pilot_length = 1;
  ChannelStatistics stats;
  stats.beta = RealGrid(1, 1, 3e-11);
  stats.gamma = RealGrid(1, 1, gamma_from_beta(3e-11, cfg));
  const QuantizationProfile profile;
  BitGrid bits(1, 1, 12);  // distortion ~ 5e-7, effectively unquantized
  const CVec filter = {1.0};
  Rng rng(5);
  const auto est = estimate_components(0, stats, bits, filter, cfg, profile, 50000, rng);
  const double n = cfg.antennas_per_ap;
  const double reference = cfg.uplink_power_w * n * n * stats.gamma(0, 0) * stats.gamma(0, 0);
  CHECK(est.desired.within(reference));
  CHECK(est.desired.std_error > 0.0);
}

TEST_CASE("fourth moment of the estimate matches N(N+1)gamma^2") {
  SystemConfig cfg = default_spec().scenario.system;
  cfg.num_aps = 1;
  cfg.num_ues = 1;
  cfg.antennas_per_ap = 6;
  cfg.pilot_length = 1;
  ChannelStatistics stats;
  stats.beta = RealGrid(1, 1, 2e-11);
  stats.gamma = RealGrid(1, 1, gamma_from_beta(2e-11, cfg));
  const double gamma = stats.gamma(0, 0);

  Rng rng(6);
  const int samples = 100000;
  double mean = 0.0, m2 = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto real = sample_realization(stats, cfg, rng);
    double self = 0.0;
    for (int n = 0; n < cfg.antennas_per_ap; ++n) self += std::norm(real.estimate(0, 0)[n]);
    const double value = self * self;  // |g_hat^H g_hat|^2
    mean += value;
    m2 += value * value;
  }
  mean /= samples;
  const double var = m2 / samples - mean * mean;
  const double se = std::sqrt(var / samples);
  const double n = cfg.antennas_per_ap;
  CHECK(std::abs(mean - n * (n + 1.0) * gamma * gamma) < 3.0 * se);
}

TEST_CASE("quantizer input power matches its closed form") {
  SystemConfig cfg = default_spec().scenario.system;
  cfg.num_aps = 1;
  cfg.num_ues = 3;
  cfg.antennas_per_ap = 4;
  cfg.pilot_length = 3;
  Rng geo_rng(8);
  Geometry geometry;
  geometry.ap_positions = {{0.0, 0.0}};
  geometry.ue_positions = draw_ue_positions(3, 400.0, {0.0, 0.0}, geo_rng);
  const auto stats = build_channel_statistics(geometry, cfg, geo_rng);

  Rng rng(9);
  const int samples = 100000;
  const double noise_std = std::sqrt(cfg.noise_power_w);
  double mean = 0.0, m2 = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto real = sample_realization(stats, cfg, rng);
    CVec awgn(cfg.antennas_per_ap);
    for (auto& x : awgn) x = noise_std * rng.complex_normal();
    double power = 0.0;
    std::complex<double> noise_dot = 0.0;
    for (int n = 0; n < cfg.antennas_per_ap; ++n)
      noise_dot += std::conj(real.estimate(0, 0)[n]) * awgn[n];
    power += std::norm(noise_dot);
    for (int kp = 0; kp < cfg.num_ues; ++kp) {
      std::complex<double> dot = 0.0;
      for (int n = 0; n < cfg.antennas_per_ap; ++n)
        dot += std::conj(real.estimate(0, 0)[n]) * real.true_channel(0, kp)[n];
      power += cfg.uplink_power_w * std::norm(dot);
    }
    mean += power;
    m2 += power * power;
  }
  mean /= samples;
  const double se = std::sqrt((m2 / samples - mean * mean) / samples);

  const double n = cfg.antennas_per_ap;
  const double gamma = stats.gamma(0, 0);
  double beta_sum = 0.0;
  for (int kp = 0; kp < cfg.num_ues; ++kp) beta_sum += stats.beta(0, kp);
  const double reference = cfg.uplink_power_w * n * n * gamma * gamma +
                           cfg.uplink_power_w * n * gamma * beta_sum +
                           cfg.noise_power_w * n * gamma;
  CHECK(std::abs(mean - reference) < 3.0 * se);
}

TEST_CASE("power iteration oracle") {
  SUBCASE("diagonal case picks the dominant axis") {
    CGrid a(2, 2), b(2, 2);
    a(0, 0) = 2.0;
    a(1, 1) = 1.0;
    b(0, 0) = 1.0;
    b(1, 1) = 1.0;
    const CVec v = dominant_generalized_eigvec(a, b);
    CHECK(std::abs(v[0]) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(v[1]) == doctest::Approx(0.0).epsilon(1e-5));
  }
  SUBCASE("rank-one numerator achieves a^H B^-1 a") {
    Rng rng(41);
    for (int t = 0; t < 25; ++t) {
      const int dim = rng.uniform_int(2, 6);
      CGrid a(dim, dim), b(dim, dim);
      CVec avec(dim);
      double expected = 0.0;
      for (int i = 0; i < dim; ++i) {
        avec[i] = std::complex<double>(rng.normal(), rng.normal());
        b(i, i) = 0.5 + rng.uniform();
        expected += std::norm(avec[i]) / b(i, i).real();
      }
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) a(r, c) = avec[r] * std::conj(avec[c]);
      const CVec v = dominant_generalized_eigvec(a, b);
      CHECK(rayleigh_quotient(a, b, v) == doctest::Approx(expected).epsilon(1e-10));
    }
  }
  SUBCASE("dense positive definite denominators are handled") {
    Rng rng(43);
    const int dim = 4;
    CGrid x(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) x(r, c) = std::complex<double>(rng.normal(), rng.normal());
    CGrid b(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) {
        std::complex<double> acc = r == c ? 0.5 : 0.0;
        for (int k = 0; k < dim; ++k) acc += x(r, k) * std::conj(x(c, k));
        b(r, c) = acc;
      }
    CVec avec(dim);
    for (int i = 0; i < dim; ++i) avec[i] = std::complex<double>(rng.normal(), rng.normal());
    CGrid a(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) a(r, c) = avec[r] * std::conj(avec[c]);
    const CVec v = dominant_generalized_eigvec(a, b);
    // Verify optimality against many random directions.
    const double best = rayleigh_quotient(a, b, v);
    for (int probe = 0; probe < 300; ++probe) {
      CVec u(dim);
      for (auto& e : u) e = rng.complex_normal();
      CHECK(rayleigh_quotient(a, b, u) <= best * (1.0 + 1e-8));
    }
  }
  SUBCASE("agreement with the closed-form engine path") {
    Rng rng(44);
    for (int t = 0; t < 20; ++t) {
      Instance inst = random_instance(rng, 4, 4, 8);
      const QuantizationProfile profile;
      const auto mats = build_ue_matrices(0, inst.stats, inst.bits, profile, inst.config);
      const auto aux = aux_matrices(mats, inst.config);
      bool all_positive = true;
      for (double bd : aux.b_diag) all_positive = all_positive && bd > 0.0;
      if (!all_positive) continue;  // support restriction covered elsewhere
      CGrid b(inst.config.num_aps, inst.config.num_aps);
      for (int m = 0; m < inst.config.num_aps; ++m) b(m, m) = aux.b_diag[m];
      const CVec oracle = dominant_generalized_eigvec(aux.a_matrix, b);
      const double oq = rayleigh_quotient(aux.a_matrix, b, oracle);
      CHECK(std::abs(oq - optimal_filter_quotient(aux)) <= 1e-10 * std::max(oq, 1e-300));
    }
  }
}

TEST_CASE("standard errors shrink like the square root of the sample count") {
  SystemConfig cfg = default_spec().scenario.system;
  cfg.num_aps = 2;
  cfg.num_ues = 2;
  cfg.antennas_per_ap = 4;
  cfg.pilot_length = 2;
  Rng geo(12);
  Geometry geometry;
  geometry.ap_positions = default_ap_positions(2, 250.0);
  geometry.ue_positions = draw_ue_positions(2, 500.0, {0.0, 0.0}, geo);
  const auto stats = build_channel_statistics(geometry, cfg, geo);
  const QuantizationProfile profile;
  BitGrid bits(2, 2, 4);
  cfg.bit_budget = 100;
  const auto report = evaluate_allocation(bits, stats, cfg, profile);

  double ses[3];
  const int sizes[3] = {1000, 10000, 100000};
  for (int i = 0; i < 3; ++i) {
    Rng rng = Rng(77).substream(i);
    const auto est =
        estimate_components(0, stats, bits, report.filters[0], cfg, profile, sizes[i], rng);
    ses[i] = est.interference.std_error;
    CHECK(ses[i] > 0.0);
  }
  // Two decades: expect a factor ~10 shrink per decade (slope -1/2).
  const double slope =
      std::log10(ses[2] / ses[0]) / std::log10(static_cast<double>(sizes[2]) / sizes[0]);
  CHECK(slope == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("closed-form components sit inside the 3-sigma band on small instances") {
  Rng rng(55);
  int checks = 0, hits = 0;
  for (int t = 0; t < 20; ++t) {
    Instance inst = random_instance(rng, 3, 3, 6);
    inst.config.bit_budget = 10000;
    const QuantizationProfile profile;
    const auto report = evaluate_allocation(inst.bits, inst.stats, inst.config, profile);
    const int ue = 0;
    const auto closed =
        sinr_components(ue, inst.stats, inst.bits, report.filters[ue], inst.config, profile);
    Rng mc_rng = rng.substream("mc").substream(t);
    const auto est = estimate_components(ue, inst.stats, inst.bits, report.filters[ue],
                                         inst.config, profile, 20000, mc_rng);
    const std::pair<double, Estimate> pairs[] = {
        {closed.desired, est.desired},
        {closed.beamforming_uncertainty, est.beamforming_uncertainty},
        {closed.interference, est.interference},
        {closed.noise, est.noise},
        {closed.quantization_noise, est.quantization_noise},
    };
    for (const auto& [reference, estimate] : pairs) {
      ++checks;
      if (estimate.within(reference, 3.0, 1e-300)) ++hits;
    }
  }
  CHECK(hits >= checks * 9 / 10);
}

}  // TEST_SUITE
