// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "cfbits/allocator_common.hpp"
#include "cfbits/harmony.hpp"
#include "cfbits/sinr.hpp"

namespace cfbits {

/// b[m][k] = floor(bit_budget / (M * K)) for every pair.
BitGrid equal_allocation(const SystemConfig& config);

/// Number of non-negative integer vectors of length `dim` with sum <= budget:
/// C(dim + budget, dim). Saturates at the maximum representable value.
unsigned long long stars_and_bars_count(int dim, int budget);

struct ExhaustiveResult {
  BitGrid bits;
  std::vector<int> ap_bits;  // AP-level search only
  double best_eval = 0.0;
  unsigned long long enumerated = 0;
};

/// Thrown when an enumeration would exceed the configured cap; carries the
/// size estimate.
struct EnumerationCapError : std::runtime_error {
  EnumerationCapError(unsigned long long estimate, unsigned long long cap);
  unsigned long long estimate;
  unsigned long long cap;
};

/// Evaluates every per-AP bit vector under the relaxed stage-1 budget. Upper
/// bound for stage 1 by construction.
ExhaustiveResult ap_exhaustive(AllocationEvaluator& evaluator,
                               unsigned long long cap = 1'000'000);

/// Global optimum over all feasible M x K allocations; toy instances only.
ExhaustiveResult full_exhaustive(AllocationEvaluator& evaluator,
                                 unsigned long long cap = 1'000'000);

struct GAParams {
  int population = 10;
  int generations = 30;
  int offspring_per_generation = 1;  // C(population, 2) for the elitist variant
  double mutation_rate = -1.0;       // <0: default 1/dim
  bool elitist = false;
};

struct PSOParams {
  int swarm = 10;
  int iterations = 3;
  double inertia = 0.7298;
  double cognitive = 1.49618;
  double social = 1.49618;
  double initial_velocity_scale = 0.125;  // fraction of the entry cap
};

struct SAParams {
  int evaluations = 40;             // total, including the initial point
  int probe_moves = -1;             // <0: min(100, evaluations / 4)
  double initial_temperature = -1;  // <0: calibrated from the probe
  double floor_ratio = 1e-3;        // geometric decay target T_end / T0
};

VectorSearch ga_search(const GAParams& params);
VectorSearch pso_search(const PSOParams& params);
VectorSearch sa_search(const SAParams& params);

/// Two-stage metaheuristic runs matched to the HS stage structure: stage 1 on
/// per-AP bits, then per-AP per-UE refinement over `outer_cycles` sweeps.
AllocationResult ga_allocate(AllocationEvaluator& evaluator, const GAParams& stage1,
                             const GAParams& stage2, int outer_cycles, Rng& rng);
AllocationResult pso_allocate(AllocationEvaluator& evaluator, const PSOParams& stage1,
                              const PSOParams& stage2, int outer_cycles, Rng& rng);
AllocationResult sa_allocate(AllocationEvaluator& evaluator, const SAParams& stage1,
                             const SAParams& stage2, int outer_cycles, Rng& rng);

/// Parameterizations whose evaluation ledgers match the HS budgets exactly
/// (stage 1: hm_size + iterations evaluations; stage 2: the same per
/// AP-phase).
GAParams ga_matched(const HSParams& hs, bool elitist = false);
PSOParams pso_matched(const HSParams& hs, int iteration_multiplier = 1);
SAParams sa_matched(const HSParams& hs);

}  // namespace cfbits
