// SPDX-License-Identifier: Apache-2.0
#include "cfbits/allocator_common.hpp"

#include <numeric>
#include <stdexcept>

namespace cfbits {

std::vector<int> repair(std::vector<int> candidate, int budget, Rng& rng) {
  long long sum = std::accumulate(candidate.begin(), candidate.end(), 0LL);
  std::vector<int> positives;
  while (sum > budget) {
    positives.clear();
    for (int i = 0; i < static_cast<int>(candidate.size()); ++i)
      if (candidate[i] > 0) positives.push_back(i);
    const int pick = rng.uniform_int(0, static_cast<int>(positives.size()) - 1);
    --candidate[positives[pick]];
    --sum;
  }
  return candidate;
}

std::vector<int> random_feasible_vector(int dim, int budget, int entry_cap, Rng& rng) {
  const int hi = std::min(entry_cap, budget);
  std::vector<int> v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.uniform_int(0, hi);
  return repair(std::move(v), budget, rng);
}

BitGrid expand_ap_bits(std::span<const int> ap_bits, int num_ues) {
  BitGrid bits(static_cast<int>(ap_bits.size()), num_ues);
  for (int m = 0; m < bits.rows(); ++m)
    for (int k = 0; k < num_ues; ++k) bits(m, k) = ap_bits[m];
  return bits;
}

BitGrid with_row(const BitGrid& bits, int ap, std::span<const int> row) {
  BitGrid out = bits;
  for (int k = 0; k < out.cols(); ++k) out(ap, k) = row[k];
  return out;
}

int stage1_budget(const SystemConfig& config) { return config.bit_budget / config.num_ues; }

std::vector<int> stage1_seed(const SystemConfig& config) {
  const int equal = config.bit_budget / (config.num_aps * config.num_ues);
  return std::vector<int>(config.num_aps, equal);
}

std::vector<int> uniform_stage2_ap_bits(const SystemConfig& config) {
  return stage1_seed(config);
}

AllocationResult run_stage1_with(AllocationEvaluator& evaluator, const VectorSearch& search,
                                 Rng& rng) {
  const SystemConfig& config = evaluator.config();
  VectorProblem problem;
  problem.dim = config.num_aps;
  problem.budget = stage1_budget(config);
  problem.entry_cap = std::min(evaluator.profile().max_bits(), problem.budget);
  problem.seed = stage1_seed(config);
  problem.evaluate = [&](const std::vector<int>& v) {
    return evaluator.evaluate(expand_ap_bits(v, config.num_ues));
  };

  const long long before = evaluator.eval_count();
  VectorSearchResult result = search(problem, rng);

  AllocationResult out;
  out.ap_bits = result.best;
  out.bits = expand_ap_bits(result.best, config.num_ues);
  out.best_eval = result.best_eval;
  out.trace = std::move(result.trace);
  out.eval_count = evaluator.eval_count() - before;
  return out;
}

AllocationResult run_stage2_with(AllocationEvaluator& evaluator, const VectorSearch& search,
                                 int outer_cycles, std::span<const int> ap_bits,
                                 double incumbent_eval, Rng& rng) {
  const SystemConfig& config = evaluator.config();
  if (static_cast<int>(ap_bits.size()) != config.num_aps)
    throw std::invalid_argument("run_stage2_with: ap_bits size mismatch");

  BitGrid current = expand_ap_bits(ap_bits, config.num_ues);
  double current_eval = incumbent_eval;

  AllocationResult out;
  const long long before = evaluator.eval_count();
  for (int cycle = 0; cycle < outer_cycles; ++cycle) {
    for (int m = 0; m < config.num_aps; ++m) {
      VectorProblem problem;
      problem.dim = config.num_ues;
      problem.budget = config.num_ues * ap_bits[m];
      problem.entry_cap = std::min(evaluator.profile().max_bits(), problem.budget);
      problem.seed.assign(config.num_ues, 0);
      for (int k = 0; k < config.num_ues; ++k) problem.seed[k] = current(m, k);
      problem.evaluate = [&](const std::vector<int>& row) {
        return evaluator.evaluate(with_row(current, m, row));
      };

      Rng phase_rng = rng.substream(static_cast<std::uint64_t>(cycle) * config.num_aps + m);
      VectorSearchResult result = search(problem, phase_rng);
      if (result.best_eval > current_eval) {
        current = with_row(current, m, result.best);
        current_eval = result.best_eval;
      }
      out.trace.insert(out.trace.end(), result.trace.begin(), result.trace.end());
    }
  }
  out.bits = current;
  out.best_eval = current_eval;
  out.eval_count = evaluator.eval_count() - before;
  return out;
}

}  // namespace cfbits
