// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfbits/baselines.hpp"
#include "cfbits/harmony.hpp"
#include "cfbits/types.hpp"

namespace cfbits {

enum class SweepKind {
  kNone,  // single operating point (method comparisons, convergence)
  kNumUes,
  kNumAntennas,
  kCenterDisplacement,
  kObjectiveComparison,
};

std::string sweep_name(SweepKind kind);

struct ScenarioConfig {
  SystemConfig system;
  double area_side_m = 1000.0;
  std::array<double, 2> area_center = {0.0, 0.0};
  std::array<double, 2> displacement_direction = {0.0, 1.0};  // unit vector
  double ap_half_spacing_m = 250.0;
};

struct AllocatorParams {
  HSParams hs_stage1{10, 0.9, 30, 1};
  HSParams hs_stage2{5, 0.9, 10, 2};
  unsigned long long exhaustive_cap = 1'000'000;
  int max_bits = QuantizationProfile::kDefaultMaxBits;
};

struct ExperimentSpec {
  ScenarioConfig scenario;
  SweepKind sweep = SweepKind::kNone;
  std::vector<double> sweep_values = {0.0};
  int trials = 100;
  std::uint64_t seed = 1;
  std::vector<std::string> methods = {"equal", "stage1", "stage12", "ap_exhaustive"};
  Objective objective = Objective::kTotalSe;
  AllocatorParams allocators;
  bool record_allocation = false;
  bool record_timings = false;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;  // throws std::invalid_argument naming the constraint
};

struct TrialRecord {
  int trial = 0;
  std::string method;
  std::string sweep_name;
  double sweep_value = 0.0;
  double total_se = 0.0;  // NaN marks a recorded refusal
  double min_se = 0.0;
  long long eval_count = 0;
  double wall_ms = 0.0;
  std::optional<BitGrid> allocation;
};

std::vector<std::string> known_methods();

/// Scenario statistics for one (sweep value, trial) cell; every method inside
/// a trial sees this same draw. Deterministic in (spec, inputs).
ChannelStatistics build_trial_statistics(const ExperimentSpec& spec, double sweep_value,
                                         int trial, SystemConfig& config_out);

struct MethodOutcome {
  BitGrid bits;
  double total_se = 0.0;
  double min_se = 0.0;
  long long eval_count = 0;
  bool refused = false;
  std::vector<double> trace;
};

MethodOutcome run_method(const std::string& name, const ChannelStatistics& stats,
                         const SystemConfig& config, const QuantizationProfile& profile,
                         Objective objective, const AllocatorParams& params, Rng rng);

/// Runs every (sweep value, trial, method) cell; trials run on a worker pool,
/// record order is independent of the execution schedule.
std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec);

void emit_csv(const std::vector<TrialRecord>& records, const std::string& path);
void emit_json(const std::vector<TrialRecord>& records, const std::string& path);

/// Round-trip aid for tests and downstream tooling.
std::vector<TrialRecord> parse_json_records(const std::string& path);

}  // namespace cfbits
