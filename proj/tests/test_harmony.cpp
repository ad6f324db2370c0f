// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numeric>

#include "cfbits/baselines.hpp"
#include "cfbits/harmony.hpp"
#include "support/test_instances.hpp"

using namespace cfbits;
using cfbits::test_support::Instance;
using cfbits::test_support::random_instance;

namespace {

Instance small_budgeted_instance(std::uint64_t seed, int num_aps, int num_ues, int antennas,
                                 int budget, double area_side_m = 800.0) {
  Rng rng(seed);
  Instance inst;
  inst.config = default_spec().scenario.system;
  inst.config.num_aps = num_aps;
  inst.config.num_ues = num_ues;
  inst.config.antennas_per_ap = antennas;
  inst.config.pilot_length = num_ues;
  inst.config.bit_budget = budget;
  Geometry geometry;
  geometry.ap_positions = default_ap_positions(num_aps, 250.0);
  Rng pos = rng.substream("ue_pos");
  geometry.ue_positions = draw_ue_positions(num_ues, area_side_m, {0.0, 0.0}, pos);
  Rng shadow = rng.substream("shadow");
  inst.stats = build_channel_statistics(geometry, inst.config, shadow);
  return inst;
}

bool non_decreasing(const std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (trace[i] < trace[i - 1]) return false;
  return true;
}

}  // namespace

TEST_SUITE("harmony") {

TEST_CASE("repair contract") {
  Rng rng(1);
  SUBCASE("already feasible vectors pass through") {
    CHECK(repair({2, 2}, 4, rng) == std::vector<int>{2, 2});
  }
  SUBCASE("single positive position is forced") {
    CHECK(repair({3, 0}, 2, rng) == std::vector<int>{2, 0});
  }
  SUBCASE("seeded replay of the documented draw sequence") {
    Rng impl = Rng(123).substream("repair");
    Rng replay = Rng(123).substream("repair");
    const auto repaired = repair({5, 5, 5}, 9, impl);

    std::vector<int> manual = {5, 5, 5};
    int sum = 15;
    while (sum > 9) {
      std::vector<int> positives;
      for (int i = 0; i < 3; ++i)
        if (manual[i] > 0) positives.push_back(i);
      manual[positives[replay.uniform_int(0, static_cast<int>(positives.size()) - 1)]] -= 1;
      --sum;
    }
    CHECK(repaired == manual);
    CHECK(std::accumulate(repaired.begin(), repaired.end(), 0) == 9);
  }
  SUBCASE("never produces negative entries") {
    Rng r(7);
    for (int t = 0; t < 200; ++t) {
      std::vector<int> v(r.uniform_int(1, 6));
      for (auto& x : v) x = r.uniform_int(0, 9);
      const int budget = r.uniform_int(0, 12);
      const auto repaired = repair(v, budget, r);
      CHECK(std::accumulate(repaired.begin(), repaired.end(), 0) <= budget);
      for (int x : repaired) CHECK(x >= 0);
    }
  }
}

TEST_CASE("stage-1 memory initialization") {
  SUBCASE("zero budget collapses to the all-zero harmony") {
    Instance inst = small_budgeted_instance(2, 2, 2, 4, 0);
    const QuantizationProfile profile;
    AllocationEvaluator evaluator(inst.stats, inst.config, profile, Objective::kTotalSe);
    Rng rng(3);
    const HarmonyMemory memory = init_stage1_memory(evaluator, {1, 0.9, 0, 1}, rng);
    CHECK(memory.size() == 1);
    CHECK(memory.best().variables == std::vector<int>{0, 0});
    CHECK(memory.best().evaluation == 0.0);
  }
  SUBCASE("every stored harmony satisfies the relaxed budget") {
    Instance inst = small_budgeted_instance(4, 4, 3, 8, 13);
    const QuantizationProfile profile;
    AllocationEvaluator evaluator(inst.stats, inst.config, profile, Objective::kTotalSe);
    Rng rng(5);
    const HarmonyMemory memory = init_stage1_memory(evaluator, {10, 0.9, 0, 1}, rng);
    const int budget = stage1_budget(inst.config);
    CHECK(budget == 4);  // floor(13 / 3)
    for (int i = 0; i < memory.size(); ++i) {
      const auto& vars = memory.row(i).variables;
      CHECK(std::accumulate(vars.begin(), vars.end(), 0) <= budget);
    }
    // Sorted descending.
    for (int i = 1; i < memory.size(); ++i)
      CHECK(memory.row(i - 1).evaluation >= memory.row(i).evaluation);
  }
  SUBCASE("identical seeds produce identical memories") {
    Instance inst = small_budgeted_instance(6, 3, 2, 4, 12);
    const QuantizationProfile profile;
    AllocationEvaluator e1(inst.stats, inst.config, profile, Objective::kTotalSe);
    AllocationEvaluator e2(inst.stats, inst.config, profile, Objective::kTotalSe);
    Rng r1(9), r2(9);
    const HarmonyMemory m1 = init_stage1_memory(e1, {8, 0.9, 0, 1}, r1);
    const HarmonyMemory m2 = init_stage1_memory(e2, {8, 0.9, 0, 1}, r2);
    for (int i = 0; i < m1.size(); ++i) {
      CHECK(m1.row(i).variables == m2.row(i).variables);
      CHECK(m1.row(i).evaluation == m2.row(i).evaluation);
    }
  }
}

TEST_CASE("improvisation") {
  SUBCASE("degenerate memory with full consideration echoes the stored row") {
    HarmonyMemory memory({{{3, 1, 0}, 5.0}});
    Rng rng(11);
    const auto result = improvise(memory, 1.0, 4, 4, rng);
    CHECK(result.from_memory);
    CHECK(result.variables == std::vector<int>{3, 1, 0});
  }
  SUBCASE("zero consideration reduces to fresh random generation") {
    HarmonyMemory memory({{{3, 1, 0}, 5.0}});
    Rng impl = Rng(13).substream("x");
    Rng replay = Rng(13).substream("x");
    const auto result = improvise(memory, 0.0, 4, 4, impl);
    CHECK_FALSE(result.from_memory);
    (void)replay.uniform();  // the branch draw
    CHECK(result.variables == random_feasible_vector(3, 4, 4, replay));
  }
  SUBCASE("memory branch frequency tracks the consideration rate") {
    HarmonyMemory memory({{{1, 1}, 2.0}, {{2, 0}, 1.0}});
    Rng rng(17);
    int from_memory = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i)
      if (improvise(memory, 0.9, 4, 4, rng).from_memory) ++from_memory;
    CHECK(from_memory / static_cast<double>(draws) == doctest::Approx(0.9).epsilon(0.012));
  }
  SUBCASE("memory-considered entries come from stored rows, positionwise") {
    HarmonyMemory memory({{{4, 0, 2}, 3.0}, {{1, 2, 0}, 2.0}});
    Rng rng(19);
    for (int t = 0; t < 200; ++t) {
      const auto result = improvise(memory, 1.0, 100, 4, rng);
      REQUIRE(result.from_memory);
      CHECK((result.variables[0] == 4 || result.variables[0] == 1));
      CHECK((result.variables[1] == 0 || result.variables[1] == 2));
      CHECK((result.variables[2] == 2 || result.variables[2] == 0));
    }
  }
}

TEST_CASE("memory update rule") {
  SUBCASE("strict improvement replaces the worst row") {
    HarmonyMemory memory({{{1}, 3.0}, {{2}, 2.0}, {{3}, 1.0}});
    CHECK(memory.update({{9}, 4.0}));
    CHECK(memory.best().evaluation == 4.0);
    CHECK(memory.best().variables == std::vector<int>{9});
    CHECK(memory.worst().evaluation == 2.0);
  }
  SUBCASE("ties keep the incumbent") {
    HarmonyMemory memory({{{1}, 3.0}, {{2}, 1.0}});
    CHECK_FALSE(memory.update({{9}, 1.0}));
    CHECK(memory.worst().variables == std::vector<int>{2});
  }
  SUBCASE("best evaluation is non-decreasing under random updates") {
    Rng rng(23);
    HarmonyMemory memory({{{0}, 0.5}, {{1}, 0.2}});
    double best = memory.best().evaluation;
    for (int t = 0; t < 500; ++t) {
      memory.update({{t}, rng.uniform()});
      CHECK(memory.best().evaluation >= best);
      best = memory.best().evaluation;
    }
  }
}

TEST_CASE("stage 1") {
  SUBCASE("zero budget returns the zero allocation") {
    Instance inst = small_budgeted_instance(29, 3, 2, 4, 0);
    const QuantizationProfile profile;
    AllocationEvaluator evaluator(inst.stats, inst.config, profile, Objective::kTotalSe);
    Rng rng(1);
    const auto result = run_stage1(evaluator, {5, 0.9, 10, 1}, rng);
    CHECK(result.best_eval == 0.0);
    CHECK(total_bits(result.bits) == 0);
  }
  SUBCASE("exact evaluation ledger") {
    Instance inst = small_budgeted_instance(31, 4, 3, 8, 24);
    const QuantizationProfile profile;
    AllocationEvaluator evaluator(inst.stats, inst.config, profile, Objective::kTotalSe);
    Rng rng(2);
    const HSParams params{10, 0.9, 30, 1};
    const auto result = run_stage1(evaluator, params, rng);
    CHECK(result.eval_count == params.hm_size + params.iterations);
    CHECK(evaluator.eval_count() == params.hm_size + params.iterations);
  }
  SUBCASE("trace is non-decreasing and determinism holds") {
    Instance inst = small_budgeted_instance(37, 4, 2, 8, 16);
    const QuantizationProfile profile;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      AllocationEvaluator e1(inst.stats, inst.config, profile, Objective::kTotalSe);
      AllocationEvaluator e2(inst.stats, inst.config, profile, Objective::kTotalSe);
      Rng r1(seed), r2(seed);
      const auto a = run_stage1(e1, {6, 0.9, 20, 1}, r1);
      const auto b = run_stage1(e2, {6, 0.9, 20, 1}, r2);
      CHECK(non_decreasing(a.trace));
      CHECK(a.bits == b.bits);
      CHECK(a.trace == b.trace);
    }
  }
  SUBCASE("dominates the equal allocation through seeding") {
    Instance inst = small_budgeted_instance(41, 4, 4, 8, 32);
    const QuantizationProfile profile;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      AllocationEvaluator evaluator(inst.stats, inst.config, profile, Objective::kTotalSe);
      Rng rng(seed);
      const auto result = run_stage1(evaluator, {10, 0.9, 15, 1}, rng);
      const double equal_eval =
          objective_value(evaluator.report(equal_allocation(inst.config)), Objective::kTotalSe);
      CHECK(result.best_eval >= equal_eval);
    }
  }
  SUBCASE("finds the exhaustive optimum on a tiny instance") {
    Instance inst = small_budgeted_instance(43, 2, 2, 4, 8);  // stage budget 4
    const QuantizationProfile profile;
    AllocationEvaluator ex_eval(inst.stats, inst.config, profile, Objective::kTotalSe);
    const auto optimum = ap_exhaustive(ex_eval);
    CHECK(optimum.enumerated == stars_and_bars_count(2, 4));

    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      AllocationEvaluator evaluator(inst.stats, inst.config, profile, Objective::kTotalSe);
      Rng rng(seed);
      const auto result = run_stage1(evaluator, {10, 0.9, 200, 1}, rng);
      CHECK(result.best_eval <= optimum.best_eval * (1.0 + 1e-12));
      if (result.best_eval >= optimum.best_eval * (1.0 - 1e-12)) ++hits;
    }
    CHECK(hits >= 90);
  }
}

TEST_CASE("stage 2") {
  SUBCASE("single-UE refinement cannot fall below stage 1") {
    Instance inst = small_budgeted_instance(47, 3, 1, 4, 9);
    const QuantizationProfile profile;
    AllocationEvaluator evaluator(inst.stats, inst.config, profile, Objective::kTotalSe);
    Rng rng(3);
    const auto stage1 = run_stage1(evaluator, {5, 0.9, 10, 1}, rng);
    Rng rng2(4);
    const auto stage2 = run_stage2(evaluator, {4, 0.9, 6, 2}, stage1.ap_bits, rng2);
    CHECK(stage2.best_eval >= stage1.best_eval);
    for (int m = 0; m < inst.config.num_aps; ++m)
      CHECK(stage2.bits(m, 0) <= stage1.ap_bits[m]);  // K=1: row budget is the AP bits
  }
  SUBCASE("exact evaluation ledger across cycles and APs") {
    Instance inst = small_budgeted_instance(53, 4, 3, 8, 24);
    const QuantizationProfile profile;
    AllocationEvaluator evaluator(inst.stats, inst.config, profile, Objective::kTotalSe);
    Rng rng(5);
    const auto stage1 = run_stage1(evaluator, {10, 0.9, 30, 1}, rng);
    evaluator.reset_counter();
    const HSParams params{5, 0.9, 10, 2};
    Rng rng2(6);
    const auto stage2 = run_stage2(evaluator, params, stage1.ap_bits, rng2);
    const long long expected = static_cast<long long>(params.outer_cycles) *
                               inst.config.num_aps * (params.hm_size + params.iterations);
    CHECK(stage2.eval_count == expected);
    CHECK(evaluator.eval_count() == expected);
  }
  SUBCASE("monotone across the stage boundary for many seeds") {
    Instance inst = small_budgeted_instance(59, 4, 4, 8, 32);
    const QuantizationProfile profile;
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      AllocationEvaluator evaluator(inst.stats, inst.config, profile, Objective::kTotalSe);
      Rng rng(seed);
      const auto stage1 = run_stage1(evaluator, {8, 0.9, 12, 1}, rng);
      Rng rng2(seed + 1000);
      const auto stage2 = run_stage2(evaluator, {5, 0.9, 8, 2}, stage1.ap_bits, rng2);
      CHECK(stage2.best_eval >= stage1.best_eval);
      // Global feasibility after refinement.
      CHECK(total_bits(stage2.bits) <= inst.config.bit_budget);
      CHECK(within_bit_caps(stage2.bits, profile.max_bits()));
      for (int m = 0; m < inst.config.num_aps; ++m) {
        int row = 0;
        for (int k = 0; k < inst.config.num_ues; ++k) row += stage2.bits(m, k);
        CHECK(row <= inst.config.num_ues * stage1.ap_bits[m]);
      }
    }
  }
  SUBCASE("combined run approaches the global optimum on a toy instance") {
    // Clustered drop whose optimum [[1,3],[2,2]] needs a non-uniform per-UE
    // split; the full enumeration covers C(8+4,4) = 495 allocations.
    Instance inst = small_budgeted_instance(6, 2, 2, 4, 8, 150.0);
    const QuantizationProfile profile;
    AllocationEvaluator ex_eval(inst.stats, inst.config, profile, Objective::kTotalSe);
    const auto optimum = full_exhaustive(ex_eval);
    CHECK(optimum.enumerated == 495);

    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      AllocationEvaluator evaluator(inst.stats, inst.config, profile, Objective::kTotalSe);
      Rng rng(seed);
      const auto result = run_stage12(evaluator, {8, 0.9, 30, 1}, {5, 0.9, 15, 2}, rng);
      CHECK(result.best_eval <= optimum.best_eval * (1.0 + 1e-12));
      CHECK(result.best_eval >= optimum.best_eval * 0.95);
      if (result.best_eval >= optimum.best_eval * (1.0 - 1e-9)) ++hits;
    }
    CHECK(hits >= 80);
  }
}

}  // TEST_SUITE
