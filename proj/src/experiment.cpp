// SPDX-License-Identifier: Apache-2.0
#include "cfbits/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "cfbits/channel.hpp"

namespace cfbits {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& worker : pool) worker.join();
  if (error) std::rethrow_exception(error);
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

std::string sweep_name(SweepKind kind) {
  switch (kind) {
    case SweepKind::kNone: return "none";
    case SweepKind::kNumUes: return "num_ues";
    case SweepKind::kNumAntennas: return "num_antennas";
    case SweepKind::kCenterDisplacement: return "center_displacement";
    case SweepKind::kObjectiveComparison: return "objective";
  }
  return "none";
}

void ExperimentSpec::validate() const {
  scenario.system.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (methods.empty()) throw std::invalid_argument("methods must be non-empty");
  if (sweep_values.empty()) throw std::invalid_argument("sweep_values must be non-empty");
  for (const auto& m : methods) {
    const auto& all = known_methods();
    if (std::find(all.begin(), all.end(), m) == all.end())
      throw std::invalid_argument("unknown method '" + m + "'");
  }
  if (sweep == SweepKind::kNumUes || sweep == SweepKind::kNumAntennas)
    for (double v : sweep_values)
      if (v < 1 || v != std::floor(v))
        throw std::invalid_argument("sweep_values must be positive integers for this sweep");
  if (allocators.max_bits < 0 || allocators.max_bits > QuantizationProfile::kTableMaxBits)
    throw std::invalid_argument("max_bits must be in [0, " +
                                std::to_string(QuantizationProfile::kTableMaxBits) + "]");
  for (const HSParams* hs : {&allocators.hs_stage1, &allocators.hs_stage2}) {
    if (hs->hm_size < 1) throw std::invalid_argument("harmony memory size must be >= 1");
    if (hs->hmcr < 0.0 || hs->hmcr > 1.0) throw std::invalid_argument("hmcr must be in [0, 1]");
    if (hs->iterations < 0) throw std::invalid_argument("iterations must be >= 0");
    if (hs->outer_cycles < 1) throw std::invalid_argument("outer_cycles must be >= 1");
  }
}

std::vector<std::string> known_methods() {
  return {"equal", "stage1",       "stage2", "stage12", "hs",   "ap_exhaustive",
          "full_exhaustive", "ga", "ga_elitist", "pso",  "pso10", "sa"};
}

ChannelStatistics build_trial_statistics(const ExperimentSpec& spec, double sweep_value,
                                         int trial, SystemConfig& config_out) {
  config_out = spec.scenario.system;
  std::array<double, 2> center = spec.scenario.area_center;
  switch (spec.sweep) {
    case SweepKind::kNumUes:
      config_out.num_ues = static_cast<int>(sweep_value);
      config_out.pilot_length = std::max(config_out.pilot_length, config_out.num_ues);
      break;
    case SweepKind::kNumAntennas:
      config_out.antennas_per_ap = static_cast<int>(sweep_value);
      break;
    case SweepKind::kCenterDisplacement: {
      const auto dir = spec.scenario.displacement_direction;
      const double norm = std::hypot(dir[0], dir[1]);
      center[0] += dir[0] / norm * sweep_value;
      center[1] += dir[1] / norm * sweep_value;
      break;
    }
    default: break;
  }
  config_out.validate();

  // Every method inside one (sweep value, trial) cell shares this stream.
  Rng rng = Rng(spec.seed)
                .substream("scenario")
                .substream(std::bit_cast<std::uint64_t>(sweep_value))
                .substream(static_cast<std::uint64_t>(trial));
  Geometry geometry;
  geometry.ap_positions =
      default_ap_positions(config_out.num_aps, spec.scenario.ap_half_spacing_m);
  Rng pos_rng = rng.substream("ue_pos");
  geometry.ue_positions =
      draw_ue_positions(config_out.num_ues, spec.scenario.area_side_m, center, pos_rng);
  Rng shadow_rng = rng.substream("shadow");
  return build_channel_statistics(geometry, config_out, shadow_rng);
}

MethodOutcome run_method(const std::string& name, const ChannelStatistics& stats,
                         const SystemConfig& config, const QuantizationProfile& profile,
                         Objective objective, const AllocatorParams& params, Rng rng) {
  AllocationEvaluator evaluator(stats, config, profile, objective);
  MethodOutcome outcome;
  auto finish = [&](const BitGrid& bits) {
    const EvaluationReport report = evaluator.report(bits);
    outcome.bits = bits;
    outcome.total_se = report.total_se;
    outcome.min_se = report.min_se;
    outcome.eval_count = evaluator.eval_count();
  };

  try {
    if (name == "equal") {
      finish(equal_allocation(config));
    } else if (name == "stage1") {
      finish(run_stage1(evaluator, params.hs_stage1, rng).bits);
    } else if (name == "stage2") {
      const auto ap_bits = uniform_stage2_ap_bits(config);
      finish(run_stage2(evaluator, params.hs_stage2, ap_bits, rng).bits);
    } else if (name == "stage12" || name == "hs") {
      finish(run_stage12(evaluator, params.hs_stage1, params.hs_stage2, rng).bits);
    } else if (name == "ap_exhaustive") {
      finish(ap_exhaustive(evaluator, params.exhaustive_cap).bits);
    } else if (name == "full_exhaustive") {
      finish(full_exhaustive(evaluator, params.exhaustive_cap).bits);
    } else if (name == "ga" || name == "ga_elitist") {
      const bool elitist = name == "ga_elitist";
      finish(ga_allocate(evaluator, ga_matched(params.hs_stage1, elitist),
                         ga_matched(params.hs_stage2, elitist), params.hs_stage2.outer_cycles,
                         rng)
                 .bits);
    } else if (name == "pso" || name == "pso10") {
      const int multiplier = name == "pso10" ? 10 : 1;
      finish(pso_allocate(evaluator, pso_matched(params.hs_stage1, multiplier),
                          pso_matched(params.hs_stage2, multiplier),
                          params.hs_stage2.outer_cycles, rng)
                 .bits);
    } else if (name == "sa") {
      finish(sa_allocate(evaluator, sa_matched(params.hs_stage1), sa_matched(params.hs_stage2),
                         params.hs_stage2.outer_cycles, rng)
                 .bits);
    } else {
      throw std::invalid_argument("unknown method '" + name + "'");
    }
  } catch (const EnumerationCapError&) {
    outcome.refused = true;
    outcome.total_se = kNaN;
    outcome.min_se = kNaN;
    outcome.eval_count = 0;
  }
  return outcome;
}

std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const QuantizationProfile profile(spec.allocators.max_bits);
  const int sweep_points = static_cast<int>(spec.sweep_values.size());
  const int cells = sweep_points * spec.trials;
  const int per_cell = static_cast<int>(spec.methods.size());
  std::vector<TrialRecord> records(static_cast<std::size_t>(cells) * per_cell);

  parallel_for(cells, spec.threads, [&](int cell) {
    const int point = cell / spec.trials;
    const int trial = cell % spec.trials;
    const double value = spec.sweep_values[point];

    SystemConfig config;
    const ChannelStatistics stats = build_trial_statistics(spec, value, trial, config);
    const Rng trial_rng = Rng(spec.seed).substream("allocator").substream(
        static_cast<std::uint64_t>(point) * 1'000'003ULL + trial);

    for (int mi = 0; mi < per_cell; ++mi) {
      const std::string& method = spec.methods[mi];
      Objective objective = spec.objective;
      if (spec.sweep == SweepKind::kObjectiveComparison)
        objective = value == 0.0 ? Objective::kTotalSe : Objective::kMaxMinSe;

      const auto started = std::chrono::steady_clock::now();
      MethodOutcome outcome = run_method(method, stats, config, profile, objective,
                                         spec.allocators, trial_rng.substream(method));
      const auto elapsed = std::chrono::steady_clock::now() - started;

      TrialRecord& record = records[static_cast<std::size_t>(cell) * per_cell + mi];
      record.trial = trial;
      record.method = method;
      record.sweep_name = sweep_name(spec.sweep);
      record.sweep_value = value;
      record.total_se = outcome.total_se;
      record.min_se = outcome.min_se;
      record.eval_count = outcome.eval_count;
      record.wall_ms =
          spec.record_timings
              ? std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed)
                    .count()
              : 0.0;
      if (spec.record_allocation && !outcome.refused) record.allocation = outcome.bits;
    }
  });
  return records;
}

void emit_csv(const std::vector<TrialRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "trial,method,sweep_name,sweep_value,total_se,min_se,eval_count,wall_ms\n";
  for (const auto& r : records) {
    out << r.trial << ',' << r.method << ',' << r.sweep_name << ',' << format_double(r.sweep_value)
        << ',' << format_double(r.total_se) << ',' << format_double(r.min_se) << ','
        << r.eval_count << ',' << format_double(r.wall_ms) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void emit_json(const std::vector<TrialRecord>& records, const std::string& path) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json row{{"trial", r.trial},
                       {"method", r.method},
                       {"sweep_name", r.sweep_name},
                       {"sweep_value", r.sweep_value},
                       {"total_se", r.total_se},
                       {"min_se", r.min_se},
                       {"eval_count", r.eval_count},
                       {"wall_ms", r.wall_ms}};
    if (r.allocation) {
      nlohmann::json rows = nlohmann::json::array();
      for (int m = 0; m < r.allocation->rows(); ++m) {
        nlohmann::json cols = nlohmann::json::array();
        for (int k = 0; k < r.allocation->cols(); ++k) cols.push_back((*r.allocation)(m, k));
        rows.push_back(cols);
      }
      row["allocation"] = rows;
    }
    doc.push_back(row);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<TrialRecord> parse_json_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  nlohmann::json doc;
  in >> doc;
  std::vector<TrialRecord> records;
  for (const auto& row : doc) {
    TrialRecord r;
    r.trial = row.at("trial").get<int>();
    r.method = row.at("method").get<std::string>();
    r.sweep_name = row.at("sweep_name").get<std::string>();
    r.sweep_value = row.at("sweep_value").get<double>();
    r.total_se = row.at("total_se").is_null() ? kNaN : row.at("total_se").get<double>();
    r.min_se = row.at("min_se").is_null() ? kNaN : row.at("min_se").get<double>();
    r.eval_count = row.at("eval_count").get<long long>();
    r.wall_ms = row.at("wall_ms").get<double>();
    if (row.contains("allocation")) {
      const auto& rows = row.at("allocation");
      BitGrid bits(static_cast<int>(rows.size()),
                   rows.empty() ? 0 : static_cast<int>(rows[0].size()));
      for (int m = 0; m < bits.rows(); ++m)
        for (int k = 0; k < bits.cols(); ++k) bits(m, k) = rows[m][k].get<int>();
      r.allocation = std::move(bits);
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace cfbits
