// SPDX-License-Identifier: Apache-2.0
#include "cfbits/sinr.hpp"

#include <cmath>
#include <stdexcept>

namespace cfbits {
namespace {

void check_ue_index(int ue, const ChannelStatistics& stats) {
  if (ue < 0 || ue >= stats.beta.cols()) throw std::out_of_range("UE index out of range");
}

bool all_zero(const std::vector<double>& v) {
  for (double x : v)
    if (x != 0.0) return false;
  return true;
}

}  // namespace

UEMatrices build_ue_matrices(int ue, const ChannelStatistics& stats, const BitGrid& bits,
                             const QuantizationProfile& profile, const SystemConfig& config) {
  check_ue_index(ue, stats);
  const int num_aps = config.num_aps;
  const int num_ues = config.num_ues;
  UEMatrices mats;
  mats.gamma_vec.resize(num_aps);
  mats.omega.resize(num_aps);
  mats.cross_gain = RealGrid(num_ues, num_aps);
  for (int m = 0; m < num_aps; ++m) {
    mats.gamma_vec[m] = stats.gamma(m, ue);
    mats.omega[m] = profile.gain(bits(m, ue));
    for (int other = 0; other < num_ues; ++other)
      mats.cross_gain(other, m) = stats.gamma(m, ue) * stats.beta(m, other);
  }
  return mats;
}

AuxMatrices aux_matrices(const UEMatrices& mats, const SystemConfig& config) {
  const int num_aps = static_cast<int>(mats.omega.size());
  const double antennas = config.antennas_per_ap;
  AuxMatrices aux;
  aux.degenerate = all_zero(mats.omega);
  aux.a_vec.resize(num_aps);
  aux.b_diag.resize(num_aps);
  for (int m = 0; m < num_aps; ++m) {
    const double omega = mats.omega[m];
    const double gamma = mats.gamma_vec[m];
    aux.a_vec[m] = std::sqrt(antennas) * omega * gamma;
    double cross_sum = 0.0;
    for (int other = 0; other < mats.cross_gain.rows(); ++other)
      cross_sum += mats.cross_gain(other, m);
    // Diagonal of (N (I - Omega) Gamma^2 + sum_k' D_kk' + (sigma^2/p_u) Gamma) Omega.
    aux.b_diag[m] =
        (antennas * (1.0 - omega) * gamma * gamma + cross_sum +
         config.noise_power_w / config.uplink_power_w * gamma) *
        omega;
  }
  aux.a_matrix = CGrid(num_aps, num_aps);
  for (int r = 0; r < num_aps; ++r)
    for (int c = 0; c < num_aps; ++c) aux.a_matrix(r, c) = aux.a_vec[r] * aux.a_vec[c];
  return aux;
}

CVec optimal_filter(const AuxMatrices& aux) {
  const int num_aps = static_cast<int>(aux.a_vec.size());
  CVec filter(num_aps);
  if (aux.degenerate) {
    const double value = 1.0 / std::sqrt(static_cast<double>(num_aps));
    for (auto& u : filter) u = value;
    return filter;
  }
  double norm_sq = 0.0;
  for (int m = 0; m < num_aps; ++m) {
    const double u = aux.b_diag[m] > 0.0 ? aux.a_vec[m] / aux.b_diag[m] : 0.0;
    filter[m] = u;
    norm_sq += u * u;
  }
  const double inv_norm = 1.0 / std::sqrt(norm_sq);
  for (auto& u : filter) u *= inv_norm;
  return filter;
}

double optimal_filter_quotient(const AuxMatrices& aux) {
  if (aux.degenerate) return 0.0;
  double quotient = 0.0;
  for (std::size_t m = 0; m < aux.a_vec.size(); ++m)
    if (aux.b_diag[m] > 0.0) quotient += aux.a_vec[m] * aux.a_vec[m] / aux.b_diag[m];
  return quotient;
}

double SinrComponents::sinr() const {
  const double den = denominator();
  if (den <= 0.0) return 0.0;  // degenerate UE: no received signal at all
  return desired / den;
}

SinrComponents sinr_components(int ue, const ChannelStatistics& stats, const BitGrid& bits,
                               std::span<const std::complex<double>> filter,
                               const SystemConfig& config, const QuantizationProfile& profile) {
  check_ue_index(ue, stats);
  const int num_aps = config.num_aps;
  const int num_ues = config.num_ues;
  const double antennas = config.antennas_per_ap;
  const double p_u = config.uplink_power_w;
  const double sigma2 = config.noise_power_w;

  SinrComponents out;
  std::complex<double> desired_amplitude = 0.0;
  for (int m = 0; m < num_aps; ++m) {
    const double gamma = stats.gamma(m, ue);
    const double omega = profile.gain(bits(m, ue));
    const double rho = 1.0 - omega;
    const double weight_sq = std::norm(filter[m]);
    double beta_sum = 0.0;
    for (int other = 0; other < num_ues; ++other) beta_sum += stats.beta(m, other);

    desired_amplitude += gamma * omega * filter[m];
    out.beamforming_uncertainty += p_u * antennas * weight_sq * omega * omega * gamma *
                                   stats.beta(m, ue);
    out.interference +=
        p_u * antennas * weight_sq * omega * omega * gamma * (beta_sum - stats.beta(m, ue));
    out.noise += sigma2 * antennas * weight_sq * omega * omega * gamma;
    // AQNM noise: rho(1-rho) times the quantizer input power
    // p_u N^2 gamma^2 + p_u N gamma sum_k' beta + sigma^2 N gamma.
    out.quantization_noise +=
        weight_sq * rho * omega *
        (p_u * antennas * antennas * gamma * gamma + p_u * antennas * gamma * beta_sum +
         sigma2 * antennas * gamma);
  }
  out.desired = p_u * antennas * antennas * std::norm(desired_amplitude);
  return out;
}

double sinr_of_ue(int ue, const ChannelStatistics& stats, const BitGrid& bits,
                  std::span<const std::complex<double>> filter, const SystemConfig& config,
                  const QuantizationProfile& profile) {
  return sinr_components(ue, stats, bits, filter, config, profile).sinr();
}

double sinr_compact(int ue, const ChannelStatistics& stats, const BitGrid& bits,
                    std::span<const std::complex<double>> filter, const SystemConfig& config,
                    const QuantizationProfile& profile) {
  check_ue_index(ue, stats);
  const int num_aps = config.num_aps;
  const int num_ues = config.num_ues;
  const double antennas = config.antennas_per_ap;
  const double p_u = config.uplink_power_w;
  const double sigma2 = config.noise_power_w;

  std::complex<double> desired_amplitude = 0.0;
  double denominator = 0.0;
  for (int m = 0; m < num_aps; ++m) {
    const double gamma = stats.gamma(m, ue);
    const double omega = profile.gain(bits(m, ue));
    const double weight_sq = std::norm(filter[m]);
    double cross = 0.0;
    for (int other = 0; other < num_ues; ++other) cross += gamma * stats.beta(m, other);
    desired_amplitude += gamma * omega * filter[m];
    // u^H (p_u N^2 Gamma^2 + p_u N sum D + sigma^2 N Gamma) Omega u
    //   - u^H Omega (p_u N^2 Gamma^2) Omega u
    denominator += weight_sq *
                   (omega * (p_u * antennas * antennas * gamma * gamma + p_u * antennas * cross +
                             sigma2 * antennas * gamma) -
                    omega * omega * p_u * antennas * antennas * gamma * gamma);
  }
  const double numerator = p_u * antennas * antennas * std::norm(desired_amplitude);
  if (denominator <= 0.0) return 0.0;
  return numerator / denominator;
}

EvaluationReport evaluate_allocation(const BitGrid& bits, const ChannelStatistics& stats,
                                     const SystemConfig& config,
                                     const QuantizationProfile& profile) {
  if (bits.rows() != config.num_aps || bits.cols() != config.num_ues)
    throw std::logic_error("evaluate_allocation: allocation shape mismatch");
  if (!within_bit_caps(bits, profile.max_bits()))
    throw std::logic_error("evaluate_allocation: entry outside [0, max_bits]");
  if (total_bits(bits) > config.bit_budget)
    throw std::logic_error("evaluate_allocation: allocation exceeds the fronthaul bit budget");

  EvaluationReport report;
  const int num_ues = config.num_ues;
  report.per_ue_sinr.resize(num_ues);
  report.per_ue_se.resize(num_ues);
  report.filters.resize(num_ues);
  for (int k = 0; k < num_ues; ++k) {
    const UEMatrices mats = build_ue_matrices(k, stats, bits, profile, config);
    const AuxMatrices aux = aux_matrices(mats, config);
    report.filters[k] = optimal_filter(aux);
    report.per_ue_sinr[k] =
        aux.degenerate ? 0.0
                       : sinr_of_ue(k, stats, bits, report.filters[k], config, profile);
    report.per_ue_se[k] = std::log2(1.0 + report.per_ue_sinr[k]);
  }
  report.total_se = 0.0;
  report.min_se = report.per_ue_se.empty() ? 0.0 : report.per_ue_se[0];
  for (double se : report.per_ue_se) {
    report.total_se += se;
    report.min_se = std::min(report.min_se, se);
  }
  return report;
}

double objective_value(const EvaluationReport& report, Objective objective) {
  return objective == Objective::kTotalSe ? report.total_se : report.min_se;
}

AllocationEvaluator::AllocationEvaluator(const ChannelStatistics& stats,
                                         const SystemConfig& config,
                                         const QuantizationProfile& profile, Objective objective)
    : stats_(&stats), config_(&config), profile_(&profile), objective_(objective) {}

std::size_t AllocationEvaluator::VecHash::operator()(const std::vector<int>& v) const {
  std::size_t h = 0xCBF29CE484222325ULL;
  for (int x : v) {
    h ^= static_cast<std::size_t>(x) + 0x9E3779B9;
    h *= 0x100000001B3ULL;
  }
  return h;
}

double AllocationEvaluator::evaluate(const BitGrid& bits) {
  ++eval_count_;
  auto it = memo_.find(bits.data());
  if (it != memo_.end()) return it->second;
  const double value = objective_value(evaluate_allocation(bits, *stats_, *config_, *profile_),
                                       objective_);
  memo_.emplace(bits.data(), value);
  return value;
}

EvaluationReport AllocationEvaluator::report(const BitGrid& bits) const {
  return evaluate_allocation(bits, *stats_, *config_, *profile_);
}

}  // namespace cfbits
