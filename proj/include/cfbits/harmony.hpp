// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "cfbits/allocator_common.hpp"
#include "cfbits/rng.hpp"
#include "cfbits/sinr.hpp"

namespace cfbits {

struct Harmony {
  std::vector<int> variables;
  double evaluation = 0.0;
};

struct HSParams {
  int hm_size = 10;       // number of retained harmonies
  double hmcr = 0.9;      // memory-consideration probability
  int iterations = 30;    // improvisation steps
  int outer_cycles = 1;   // stage-2 AP sweeps
};

/// Fixed-capacity pool of harmonies kept sorted by evaluation, descending.
/// Replacement is strict (ties keep the incumbent) and sorting is stable, so
/// runs are reproducible.
class HarmonyMemory {
 public:
  explicit HarmonyMemory(std::vector<Harmony> rows);

  /// Replaces the worst row when `candidate` strictly improves on it.
  /// Returns whether a replacement happened.
  bool update(const Harmony& candidate);

  const Harmony& best() const { return rows_.front(); }
  const Harmony& worst() const { return rows_.back(); }
  const Harmony& row(int i) const { return rows_[i]; }
  int size() const { return static_cast<int>(rows_.size()); }

 private:
  std::vector<Harmony> rows_;
};

struct ImproviseResult {
  std::vector<int> variables;
  bool from_memory = false;
};

/// New harmony: with probability hmcr each position copies the corresponding
/// entry of an independently chosen memory row; otherwise a fresh random
/// feasible vector. Either branch is repaired to the budget.
ImproviseResult improvise(const HarmonyMemory& memory, double hmcr, int budget, int entry_cap,
                          Rng& rng);

/// Memory for the per-AP bit vectors of stage 1: the equal-allocation seed
/// plus hm_size - 1 random feasible vectors, each evaluated after uniform
/// expansion to all UEs.
HarmonyMemory init_stage1_memory(AllocationEvaluator& evaluator, const HSParams& params,
                                 Rng& rng);

/// Generic harmony search over one VectorProblem (used for both stages).
VectorSearch hs_search(const HSParams& params);

/// Stage 1: allocates one bit count per AP under the relaxed budget.
AllocationResult run_stage1(AllocationEvaluator& evaluator, const HSParams& params, Rng& rng);

/// Stage 2: refines per-UE bits within each AP, sweeping APs for
/// params.outer_cycles cycles; other APs' rows are held at the current best.
AllocationResult run_stage2(AllocationEvaluator& evaluator, const HSParams& params,
                            std::span<const int> ap_bits, Rng& rng);

/// Stage 1 followed by stage 2 (the full hierarchical allocator).
AllocationResult run_stage12(AllocationEvaluator& evaluator, const HSParams& stage1,
                             const HSParams& stage2, Rng& rng);

}  // namespace cfbits
