// SPDX-License-Identifier: Apache-2.0
#include "cfbits/harmony.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace cfbits {
namespace {

void sort_descending(std::vector<Harmony>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Harmony& a, const Harmony& b) { return a.evaluation > b.evaluation; });
}

}  // namespace

HarmonyMemory::HarmonyMemory(std::vector<Harmony> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("HarmonyMemory: at least one row required");
  sort_descending(rows_);
}

bool HarmonyMemory::update(const Harmony& candidate) {
  if (!(candidate.evaluation > rows_.back().evaluation)) return false;
  rows_.back() = candidate;
  sort_descending(rows_);
  return true;
}

ImproviseResult improvise(const HarmonyMemory& memory, double hmcr, int budget, int entry_cap,
                          Rng& rng) {
  ImproviseResult out;
  const int dim = static_cast<int>(memory.best().variables.size());
  if (rng.uniform() <= hmcr) {
    out.from_memory = true;
    out.variables.resize(dim);
    for (int pos = 0; pos < dim; ++pos) {
      const int source = rng.uniform_int(0, memory.size() - 1);
      out.variables[pos] = memory.row(source).variables[pos];
    }
    out.variables = repair(std::move(out.variables), budget, rng);
  } else {
    out.variables = random_feasible_vector(dim, budget, entry_cap, rng);
  }
  return out;
}

VectorSearch hs_search(const HSParams& params) {
  if (params.hm_size < 1) throw std::invalid_argument("hs_search: hm_size must be >= 1");
  if (params.hmcr < 0.0 || params.hmcr > 1.0)
    throw std::invalid_argument("hs_search: hmcr must be in [0, 1]");
  return [params](const VectorProblem& problem, Rng& rng) {
    std::vector<Harmony> rows;
    rows.reserve(params.hm_size);
    rows.push_back({problem.seed, problem.evaluate(problem.seed)});
    for (int i = 1; i < params.hm_size; ++i) {
      auto vars = random_feasible_vector(problem.dim, problem.budget, problem.entry_cap, rng);
      const double eval = problem.evaluate(vars);
      rows.push_back({std::move(vars), eval});
    }
    HarmonyMemory memory(std::move(rows));

    VectorSearchResult result;
    result.trace.reserve(params.iterations + 1);
    result.trace.push_back(memory.best().evaluation);
    for (int it = 0; it < params.iterations; ++it) {
      ImproviseResult candidate =
          improvise(memory, params.hmcr, problem.budget, problem.entry_cap, rng);
      const double eval = problem.evaluate(candidate.variables);
      memory.update({std::move(candidate.variables), eval});
      result.trace.push_back(memory.best().evaluation);
    }
    result.best = memory.best().variables;
    result.best_eval = memory.best().evaluation;
    return result;
  };
}

HarmonyMemory init_stage1_memory(AllocationEvaluator& evaluator, const HSParams& params,
                                 Rng& rng) {
  const SystemConfig& config = evaluator.config();
  const int budget = stage1_budget(config);
  const int cap = std::min(evaluator.profile().max_bits(), budget);
  std::vector<Harmony> rows;
  rows.reserve(params.hm_size);
  auto evaluate = [&](const std::vector<int>& v) {
    return evaluator.evaluate(expand_ap_bits(v, config.num_ues));
  };
  const std::vector<int> seed = stage1_seed(config);
  rows.push_back({seed, evaluate(seed)});
  for (int i = 1; i < params.hm_size; ++i) {
    auto vars = random_feasible_vector(config.num_aps, budget, cap, rng);
    const double eval = evaluate(vars);
    rows.push_back({std::move(vars), eval});
  }
  return HarmonyMemory(std::move(rows));
}

AllocationResult run_stage1(AllocationEvaluator& evaluator, const HSParams& params, Rng& rng) {
  return run_stage1_with(evaluator, hs_search(params), rng);
}

AllocationResult run_stage2(AllocationEvaluator& evaluator, const HSParams& params,
                            std::span<const int> ap_bits, Rng& rng) {
  return run_stage2_with(evaluator, hs_search(params), params.outer_cycles, ap_bits,
                         -std::numeric_limits<double>::infinity(), rng);
}

AllocationResult run_stage12(AllocationEvaluator& evaluator, const HSParams& stage1,
                             const HSParams& stage2, Rng& rng) {
  Rng stage1_rng = rng.substream("stage1");
  Rng stage2_rng = rng.substream("stage2");
  AllocationResult first = run_stage1(evaluator, stage1, stage1_rng);
  AllocationResult second = run_stage2_with(evaluator, hs_search(stage2), stage2.outer_cycles,
                                            first.ap_bits, first.best_eval, stage2_rng);
  second.ap_bits = first.ap_bits;
  second.trace.insert(second.trace.begin(), first.trace.begin(), first.trace.end());
  second.eval_count += first.eval_count;
  return second;
}

}  // namespace cfbits
