// SPDX-License-Identifier: Apache-2.0
#include "cfbits/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfbits {
namespace {

std::complex<double> dot_conj(const CVec& a, const CVec& b) {
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

Estimate mean_estimate(const std::vector<double>& samples) {
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

// Multiply y = M x for dense square complex M.
CVec matvec(const CGrid& m, std::span<const std::complex<double>> x) {
  const int n = m.rows();
  CVec y(n, 0.0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) y[r] += m(r, c) * x[c];
  return y;
}

// In-place Cholesky factor (lower) of a Hermitian positive definite matrix.
CGrid cholesky(const CGrid& a) {
  const int n = a.rows();
  CGrid l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      std::complex<double> sum = a(i, j);
      for (int k = 0; k < j; ++k) sum -= l(i, k) * std::conj(l(j, k));
      if (i == j) {
        const double diag = sum.real();
        if (diag <= 0.0) throw std::runtime_error("cholesky: matrix not positive definite");
        l(i, j) = std::sqrt(diag);
      } else {
        l(i, j) = sum / l(j, j);
      }
    }
  }
  return l;
}

// Solves (L L^H) x = y.
CVec cholesky_solve(const CGrid& l, const CVec& y) {
  const int n = l.rows();
  CVec z(n);
  for (int i = 0; i < n; ++i) {
    std::complex<double> sum = y[i];
    for (int k = 0; k < i; ++k) sum -= l(i, k) * z[k];
    z[i] = sum / l(i, i);
  }
  CVec x(n);
  for (int i = n - 1; i >= 0; --i) {
    std::complex<double> sum = z[i];
    for (int k = i + 1; k < n; ++k) sum -= std::conj(l(k, i)) * x[k];
    x[i] = sum / l(i, i);
  }
  return x;
}

double norm2(const CVec& v) {
  double acc = 0.0;
  for (const auto& x : v) acc += std::norm(x);
  return std::sqrt(acc);
}

}  // namespace

ChannelRealization sample_realization(const ChannelStatistics& stats, const SystemConfig& config,
                                      Rng& rng) {
  const int num_aps = stats.beta.rows();
  const int num_ues = stats.beta.cols();
  const int antennas = config.antennas_per_ap;
  const double pilot_energy = config.pilot_length * config.pilot_power_w;
  const double pilot_amp = std::sqrt(pilot_energy);
  const double noise_std = std::sqrt(config.noise_power_w);

  ChannelRealization real;
  real.num_aps = num_aps;
  real.num_ues = num_ues;
  real.antennas = antennas;
  real.g.resize(static_cast<std::size_t>(num_aps) * num_ues);
  real.g_hat.resize(real.g.size());
  real.e.resize(real.g.size());
  for (int m = 0; m < num_aps; ++m) {
    for (int k = 0; k < num_ues; ++k) {
      const std::size_t idx = static_cast<std::size_t>(m) * num_ues + k;
      const double beta = stats.beta(m, k);
      const double lmmse = pilot_amp * beta / (config.noise_power_w + pilot_energy * beta);
      CVec g(antennas), g_hat(antennas), e(antennas);
      for (int n = 0; n < antennas; ++n) {
        const std::complex<double> channel = std::sqrt(beta) * rng.complex_normal();
        const std::complex<double> pilot_obs =
            pilot_amp * channel + noise_std * rng.complex_normal();
        g[n] = channel;
        g_hat[n] = lmmse * pilot_obs;
        e[n] = channel - g_hat[n];
      }
      real.g[idx] = std::move(g);
      real.g_hat[idx] = std::move(g_hat);
      real.e[idx] = std::move(e);
    }
  }
  return real;
}

ComponentEstimates estimate_components(int ue, const ChannelStatistics& stats,
                                       const BitGrid& bits,
                                       std::span<const std::complex<double>> filter,
                                       const SystemConfig& config,
                                       const QuantizationProfile& profile, int num_samples,
                                       Rng& rng) {
  if (num_samples < 2) throw std::invalid_argument("estimate_components: num_samples too small");
  const int num_aps = config.num_aps;
  const int num_ues = config.num_ues;
  const int antennas = config.antennas_per_ap;
  const double p_u = config.uplink_power_w;
  const double sqrt_pu = std::sqrt(p_u);
  const double noise_std = std::sqrt(config.noise_power_w);

  std::vector<std::complex<double>> combined(num_samples);  // desired-signal amplitude
  std::vector<double> interference(num_samples);
  std::vector<double> noise(num_samples);
  std::vector<double> quant(num_samples);

  std::vector<double> gain(num_aps), rho(num_aps);
  for (int m = 0; m < num_aps; ++m) {
    gain[m] = profile.gain(bits(m, ue));
    rho[m] = 1.0 - gain[m];
  }

  std::vector<std::complex<double>> cross_amp(num_ues);
  for (int s = 0; s < num_samples; ++s) {
    const ChannelRealization real = sample_realization(stats, config, rng);
    std::complex<double> own = 0.0;
    std::complex<double> noise_term = 0.0;
    double quant_power = 0.0;
    std::fill(cross_amp.begin(), cross_amp.end(), std::complex<double>{0.0});
    for (int m = 0; m < num_aps; ++m) {
      const CVec& est = real.estimate(m, ue);
      CVec awgn(antennas);
      for (int n = 0; n < antennas; ++n) awgn[n] = noise_std * rng.complex_normal();

      const std::complex<double> est_noise = dot_conj(est, awgn);
      const std::complex<double> weighted = filter[m] * gain[m];
      own += weighted * dot_conj(est, real.true_channel(m, ue));
      noise_term += weighted * est_noise;

      // Quantizer input power, data-symbol average taken in closed form.
      double input_power = std::norm(est_noise);
      for (int other = 0; other < num_ues; ++other) {
        const std::complex<double> cross = dot_conj(est, real.true_channel(m, other));
        input_power += p_u * std::norm(cross);
        if (other != ue) cross_amp[other] += weighted * cross;
      }
      quant_power += std::norm(filter[m]) * rho[m] * gain[m] * input_power;
    }
    double interf_power = 0.0;
    for (int other = 0; other < num_ues; ++other)
      if (other != ue) interf_power += p_u * std::norm(cross_amp[other]);
    combined[s] = sqrt_pu * own;
    interference[s] = interf_power;
    noise[s] = std::norm(noise_term);
    quant[s] = quant_power;
  }

  // Desired power |E[combined]|^2 via the delta method; the second-order term
  // keeps the band meaningful when the mean is near zero.
  std::complex<double> mean = 0.0;
  for (const auto& c : combined) mean += c;
  mean /= static_cast<double>(num_samples);
  double var_re = 0.0, var_im = 0.0;
  for (const auto& c : combined) {
    var_re += (c.real() - mean.real()) * (c.real() - mean.real());
    var_im += (c.imag() - mean.imag()) * (c.imag() - mean.imag());
  }
  var_re /= (num_samples - 1.0);
  var_im /= (num_samples - 1.0);
  const double mean_se = std::sqrt((var_re + var_im) / num_samples);

  std::vector<double> beam_samples(num_samples);
  for (int s = 0; s < num_samples; ++s) beam_samples[s] = std::norm(combined[s] - mean);

  ComponentEstimates est;
  est.desired = {std::norm(mean),
                 2.0 * std::abs(mean) * mean_se + mean_se * mean_se};
  est.beamforming_uncertainty = mean_estimate(beam_samples);
  est.interference = mean_estimate(interference);
  est.noise = mean_estimate(noise);
  est.quantization_noise = mean_estimate(quant);
  return est;
}

double rayleigh_quotient(const CGrid& a, const CGrid& b,
                         std::span<const std::complex<double>> u) {
  std::complex<double> num = 0.0, den = 0.0;
  const int n = a.rows();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      num += std::conj(u[r]) * a(r, c) * u[c];
      den += std::conj(u[r]) * b(r, c) * u[c];
    }
  if (den.real() <= 0.0) return 0.0;
  return num.real() / den.real();
}

CVec dominant_generalized_eigvec(const CGrid& a, const CGrid& b, double tol,
                                 int max_iterations) {
  const int n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n)
    throw std::invalid_argument("dominant_generalized_eigvec: square matrices required");
  const CGrid chol = cholesky(b);

  CVec v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * i;  // deterministic start
  double scale = norm2(v);
  for (auto& x : v) x /= scale;

  double prev_q = rayleigh_quotient(a, b, v);
  for (int it = 0; it < max_iterations; ++it) {
    CVec y = matvec(a, v);
    CVec z = cholesky_solve(chol, y);
    const double z_norm = norm2(z);
    if (z_norm == 0.0) return CVec(n, 1.0 / std::sqrt(static_cast<double>(n)));  // A v = 0
    for (auto& x : z) x /= z_norm;
    v = std::move(z);
    const double q = rayleigh_quotient(a, b, v);
    if (std::abs(q - prev_q) <= tol * std::max(1.0, std::abs(q))) return v;
    prev_q = q;
  }
  throw std::runtime_error("dominant_generalized_eigvec: power iteration did not converge");
}

}  // namespace cfbits
