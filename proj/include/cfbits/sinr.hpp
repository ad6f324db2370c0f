// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>
#include <unordered_map>
#include <vector>

#include "cfbits/quantization.hpp"
#include "cfbits/types.hpp"

namespace cfbits {

/// Per-UE diagonal inputs to the SINR evaluation. All matrices involved are
/// diagonal; only their diagonals are stored.
///   gamma_vec[m]      estimate variance of the serving link
///   omega[m]          AQNM gain (1 - rho) of the fronthaul link
///   cross_gain(k', m) gamma[m][k] * beta[m][k']
struct UEMatrices {
  std::vector<double> gamma_vec;
  std::vector<double> omega;
  RealGrid cross_gain;  // K x M
};

UEMatrices build_ue_matrices(int ue, const ChannelStatistics& stats, const BitGrid& bits,
                             const QuantizationProfile& profile, const SystemConfig& config);

/// Generalized-Rayleigh-quotient operands of the receiver-filter problem.
/// The numerator matrix is rank one: A = a a^H with a = sqrt(N) * omega*gamma;
/// the denominator matrix is diagonal and positive definite on the support of
/// omega. `degenerate` marks the all-zero-omega case (UE receives nothing).
struct AuxMatrices {
  CGrid a_matrix;              // M x M, rank one
  std::vector<double> a_vec;   // a_matrix = a_vec * a_vec^H
  std::vector<double> b_diag;  // diagonal of the denominator matrix
  bool degenerate = false;
};

AuxMatrices aux_matrices(const UEMatrices& mats, const SystemConfig& config);

/// Unit-norm maximizer of u^H A u / u^H B u. Uses the rank-one closed form
/// u ~ B^{-1} a restricted to the support of omega; the degenerate case
/// returns the uniform unit vector.
CVec optimal_filter(const AuxMatrices& aux);

/// Achieved quotient of the closed-form filter, a^H B^{-1} a on the support.
double optimal_filter_quotient(const AuxMatrices& aux);

/// The five closed-form SINR components for one UE under a given unit-norm
/// receiver filter. Componentwise evaluation is the ground-truth path.
struct SinrComponents {
  double desired = 0.0;
  double beamforming_uncertainty = 0.0;
  double interference = 0.0;  // summed over the other UEs
  double noise = 0.0;
  double quantization_noise = 0.0;

  double denominator() const {
    return beamforming_uncertainty + interference + noise + quantization_noise;
  }
  double sinr() const;
};

SinrComponents sinr_components(int ue, const ChannelStatistics& stats, const BitGrid& bits,
                               std::span<const std::complex<double>> filter,
                               const SystemConfig& config, const QuantizationProfile& profile);

double sinr_of_ue(int ue, const ChannelStatistics& stats, const BitGrid& bits,
                  std::span<const std::complex<double>> filter, const SystemConfig& config,
                  const QuantizationProfile& profile);

/// Secondary evaluation path through the compact quadratic-form expression;
/// retained as a cross-check of the componentwise path.
double sinr_compact(int ue, const ChannelStatistics& stats, const BitGrid& bits,
                    std::span<const std::complex<double>> filter, const SystemConfig& config,
                    const QuantizationProfile& profile);

struct EvaluationReport {
  std::vector<double> per_ue_sinr;
  std::vector<double> per_ue_se;  // bits/s/Hz
  double total_se = 0.0;
  double min_se = 0.0;
  std::vector<CVec> filters;
};

/// Evaluates a feasible allocation: per-UE optimal filter, SINR and SE. The
/// report always carries both the total and the minimum SE; the objective
/// only selects which scalar a search reads. Throws std::logic_error for
/// infeasible allocations.
EvaluationReport evaluate_allocation(const BitGrid& bits, const ChannelStatistics& stats,
                                     const SystemConfig& config,
                                     const QuantizationProfile& profile);

double objective_value(const EvaluationReport& report, Objective objective);

/// Memoizing evaluation front-end used by every allocator. Each call to
/// evaluate() increments the request ledger (cache hits included), so the
/// counters mirror the number of generated candidate solutions exactly.
class AllocationEvaluator {
 public:
  AllocationEvaluator(const ChannelStatistics& stats, const SystemConfig& config,
                      const QuantizationProfile& profile, Objective objective);

  double evaluate(const BitGrid& bits);

  /// Full report for a given allocation; does not touch the ledger.
  EvaluationReport report(const BitGrid& bits) const;

  long long eval_count() const { return eval_count_; }
  long long distinct_count() const { return static_cast<long long>(memo_.size()); }
  void reset_counter() { eval_count_ = 0; }

  Objective objective() const { return objective_; }
  const ChannelStatistics& stats() const { return *stats_; }
  const SystemConfig& config() const { return *config_; }
  const QuantizationProfile& profile() const { return *profile_; }

 private:
  const ChannelStatistics* stats_;
  const SystemConfig* config_;
  const QuantizationProfile* profile_;
  Objective objective_;
  long long eval_count_ = 0;

  struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const;
  };
  std::unordered_map<std::vector<int>, double, VecHash> memo_;
};

}  // namespace cfbits
