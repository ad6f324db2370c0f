// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cfbits/rng.hpp"
#include "cfbits/sinr.hpp"
#include "cfbits/types.hpp"

namespace cfbits {

/// Feasibility repair: while the vector exceeds the budget, decrement a
/// uniformly chosen strictly-positive entry by one. Draw order (replayable):
/// one uniform_int over the ascending list of positive indices per decrement.
std::vector<int> repair(std::vector<int> candidate, int budget, Rng& rng);

/// Per-entry uniform draw on [0, min(entry_cap, budget)] followed by repair.
std::vector<int> random_feasible_vector(int dim, int budget, int entry_cap, Rng& rng);

/// Uniform per-AP expansion: every UE of AP m gets ap_bits[m].
BitGrid expand_ap_bits(std::span<const int> ap_bits, int num_ues);

/// Copy of `bits` with row `ap` replaced by `row`.
BitGrid with_row(const BitGrid& bits, int ap, std::span<const int> row);

/// Stage-1 per-UE-relaxed budget: floor(bit_budget / num_ues).
int stage1_budget(const SystemConfig& config);

/// Equal-allocation seed for stage 1, one entry per AP.
std::vector<int> stage1_seed(const SystemConfig& config);

/// One integer-vector search problem under a sum budget and per-entry cap.
/// `seed` is injected into the initial population so that search results
/// dominate the incumbent it encodes.
struct VectorProblem {
  int dim = 0;
  int budget = 0;
  int entry_cap = 0;
  std::vector<int> seed;
  std::function<double(const std::vector<int>&)> evaluate;
};

struct VectorSearchResult {
  std::vector<int> best;
  double best_eval = 0.0;
  std::vector<double> trace;  // best-so-far after init and after each step
};

using VectorSearch = std::function<VectorSearchResult(const VectorProblem&, Rng&)>;

struct AllocationResult {
  BitGrid bits;
  std::vector<int> ap_bits;  // stage-1 view when applicable
  double best_eval = 0.0;
  std::vector<double> trace;
  long long eval_count = 0;
};

/// Stage-1 driver: searches per-AP bit vectors under the relaxed budget, each
/// candidate evaluated after uniform expansion to all UEs.
AllocationResult run_stage1_with(AllocationEvaluator& evaluator, const VectorSearch& search,
                                 Rng& rng);

/// Stage-2 driver: for each outer cycle, sweeps APs in order and searches the
/// per-UE row of one AP under the budget K * ap_bits[m], holding other rows
/// at the current best. Each per-AP problem carries the current row as its
/// seed, and a phase result replaces the row only on strict improvement over
/// `incumbent_eval` (the running best, initialized from the stage-1 result),
/// so the best evaluation never decreases across phases regardless of whether
/// the search honors the seed.
AllocationResult run_stage2_with(AllocationEvaluator& evaluator, const VectorSearch& search,
                                 int outer_cycles, std::span<const int> ap_bits,
                                 double incumbent_eval, Rng& rng);

/// Per-AP bits assumed by a stage-2-only run: floor(bit_budget / (M * K)).
std::vector<int> uniform_stage2_ap_bits(const SystemConfig& config);

}  // namespace cfbits
