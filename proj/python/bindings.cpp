// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cfbits/allocator_common.hpp"
#include "cfbits/baselines.hpp"
#include "cfbits/channel.hpp"
#include "cfbits/config_io.hpp"
#include "cfbits/experiment.hpp"
#include "cfbits/harmony.hpp"
#include "cfbits/mc_oracle.hpp"
#include "cfbits/sinr.hpp"

namespace py = pybind11;
using namespace cfbits;

namespace {

BitGrid grid_from_lists(const std::vector<std::vector<int>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r > 0 ? static_cast<int>(rows[0].size()) : 0;
  BitGrid grid(r, c);
  for (int m = 0; m < r; ++m) {
    if (static_cast<int>(rows[m].size()) != c)
      throw std::invalid_argument("ragged allocation matrix");
    for (int k = 0; k < c; ++k) grid(m, k) = rows[m][k];
  }
  return grid;
}

std::vector<std::vector<int>> grid_to_lists(const BitGrid& grid) {
  std::vector<std::vector<int>> rows(grid.rows(), std::vector<int>(grid.cols()));
  for (int m = 0; m < grid.rows(); ++m)
    for (int k = 0; k < grid.cols(); ++k) rows[m][k] = grid(m, k);
  return rows;
}

std::vector<std::vector<double>> real_to_lists(const RealGrid& grid) {
  std::vector<std::vector<double>> rows(grid.rows(), std::vector<double>(grid.cols()));
  for (int m = 0; m < grid.rows(); ++m)
    for (int k = 0; k < grid.cols(); ++k) rows[m][k] = grid(m, k);
  return rows;
}

py::dict report_to_dict(const EvaluationReport& report) {
  py::dict out;
  out["per_ue_sinr"] = report.per_ue_sinr;
  out["per_ue_se"] = report.per_ue_se;
  out["total_se"] = report.total_se;
  out["min_se"] = report.min_se;
  out["filters"] = report.filters;
  return out;
}

py::dict allocation_result_to_dict(const AllocationResult& result) {
  py::dict out;
  out["bits"] = grid_to_lists(result.bits);
  out["ap_bits"] = result.ap_bits;
  out["best_eval"] = result.best_eval;
  out["trace"] = result.trace;
  out["eval_count"] = result.eval_count;
  return out;
}

Objective objective_arg(const std::string& name) { return objective_from_name(name); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fronthaul bit allocation for cell-free massive MIMO uplink";

  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init<>())
      .def_readwrite("num_aps", &SystemConfig::num_aps)
      .def_readwrite("num_ues", &SystemConfig::num_ues)
      .def_readwrite("antennas_per_ap", &SystemConfig::antennas_per_ap)
      .def_readwrite("bit_budget", &SystemConfig::bit_budget)
      .def_readwrite("pilot_power_w", &SystemConfig::pilot_power_w)
      .def_readwrite("uplink_power_w", &SystemConfig::uplink_power_w)
      .def_readwrite("noise_power_w", &SystemConfig::noise_power_w)
      .def_readwrite("pilot_length", &SystemConfig::pilot_length)
      .def_readwrite("bandwidth_hz", &SystemConfig::bandwidth_hz)
      .def_readwrite("carrier_freq_hz", &SystemConfig::carrier_freq_hz)
      .def_readwrite("noise_figure_db", &SystemConfig::noise_figure_db)
      .def_readwrite("shadowing_std_db", &SystemConfig::shadowing_std_db)
      .def("validate", &SystemConfig::validate);

  py::class_<QuantizationProfile>(m, "QuantizationProfile")
      .def(py::init<int>(), py::arg("max_bits") = QuantizationProfile::kDefaultMaxBits)
      .def("rho", &QuantizationProfile::rho, py::arg("bits"))
      .def("gain", &QuantizationProfile::gain, py::arg("bits"))
      .def_property_readonly("max_bits", &QuantizationProfile::max_bits)
      .def_static("provenance", &QuantizationProfile::provenance, py::arg("bits"))
      .def_static("table", [] {
        const auto& t = QuantizationProfile::table();
        return std::vector<double>(t.begin(), t.end());
      });

  m.def("table3_config", [] { return default_spec().scenario.system; },
        "System parameters of the default operating point");
  m.def("pathloss_db", &pathloss_db, py::arg("distance_m"), py::arg("carrier_ghz"),
        py::arg("shadow_db"));
  m.def("gamma_from_beta", &gamma_from_beta, py::arg("beta"), py::arg("config"));
  m.def("derive_noise_power_w", &derive_noise_power_w, py::arg("bandwidth_hz"),
        py::arg("noise_figure_db"), py::arg("temperature_k") = kNoiseTemperatureK);

  m.def(
      "build_channel_statistics",
      [](const SystemConfig& config, double area_side_m, double half_spacing_m,
         std::uint64_t seed) {
        Geometry geometry;
        geometry.ap_positions = default_ap_positions(config.num_aps, half_spacing_m);
        Rng rng(seed);
        Rng pos = rng.substream("ue_pos");
        geometry.ue_positions = draw_ue_positions(config.num_ues, area_side_m, {0.0, 0.0}, pos);
        Rng shadow = rng.substream("shadow");
        const auto stats = build_channel_statistics(geometry, config, shadow);
        py::dict out;
        out["beta"] = real_to_lists(stats.beta);
        out["gamma"] = real_to_lists(stats.gamma);
        return out;
      },
      py::arg("config"), py::arg("area_side_m") = 1000.0, py::arg("half_spacing_m") = 250.0,
      py::arg("seed") = 1, "Draw a scenario and return its channel statistics");

  m.def(
      "evaluate_allocation",
      [](const std::vector<std::vector<int>>& bits, const std::vector<std::vector<double>>& beta,
         const std::vector<std::vector<double>>& gamma, const SystemConfig& config, int max_bits) {
        ChannelStatistics stats;
        stats.beta = RealGrid(static_cast<int>(beta.size()),
                              beta.empty() ? 0 : static_cast<int>(beta[0].size()));
        stats.gamma = stats.beta;
        for (int m = 0; m < stats.beta.rows(); ++m)
          for (int k = 0; k < stats.beta.cols(); ++k) {
            stats.beta(m, k) = beta[m][k];
            stats.gamma(m, k) = gamma[m][k];
          }
        const QuantizationProfile profile(max_bits);
        return report_to_dict(evaluate_allocation(grid_from_lists(bits), stats, config, profile));
      },
      py::arg("bits"), py::arg("beta"), py::arg("gamma"), py::arg("config"),
      py::arg("max_bits") = QuantizationProfile::kDefaultMaxBits);

  m.def("equal_allocation",
        [](const SystemConfig& config) { return grid_to_lists(equal_allocation(config)); });

  // Allocators operate on a freshly drawn scenario for convenience from
  // python; the C++ API separates statistics construction and search.
  auto make_stats = [](const SystemConfig& config, std::uint64_t seed) {
    Geometry geometry;
    geometry.ap_positions = default_ap_positions(config.num_aps, 250.0);
    Rng rng(seed);
    Rng pos = rng.substream("ue_pos");
    geometry.ue_positions = draw_ue_positions(config.num_ues, 1000.0, {0.0, 0.0}, pos);
    Rng shadow = rng.substream("shadow");
    return build_channel_statistics(geometry, config, shadow);
  };

  m.def(
      "run_hierarchical",
      [make_stats](const SystemConfig& config, const std::string& objective, std::uint64_t seed,
                   int hm1, double hmcr1, int iters1, int hm2, double hmcr2, int iters2,
                   int outer_cycles) {
        const auto stats = make_stats(config, seed);
        const QuantizationProfile profile;
        AllocationEvaluator evaluator(stats, config, profile, objective_arg(objective));
        HSParams stage1{hm1, hmcr1, iters1, 1};
        HSParams stage2{hm2, hmcr2, iters2, outer_cycles};
        Rng rng = Rng(seed).substream("allocator");
        return allocation_result_to_dict(run_stage12(evaluator, stage1, stage2, rng));
      },
      py::arg("config"), py::arg("objective") = "total", py::arg("seed") = 1,
      py::arg("hm1") = 10, py::arg("hmcr1") = 0.9, py::arg("iters1") = 30, py::arg("hm2") = 5,
      py::arg("hmcr2") = 0.9, py::arg("iters2") = 10, py::arg("outer_cycles") = 2,
      "Stage 1 + stage 2 harmony search on a drawn scenario");

  m.def(
      "run_method",
      [make_stats](const std::string& method, const SystemConfig& config,
                   const std::string& objective, std::uint64_t seed) {
        const auto stats = make_stats(config, seed);
        const QuantizationProfile profile;
        AllocatorParams params;
        MethodOutcome outcome = run_method(method, stats, config, profile,
                                           objective_arg(objective), params,
                                           Rng(seed).substream("allocator").substream(method));
        py::dict out;
        out["bits"] = grid_to_lists(outcome.bits);
        out["total_se"] = outcome.total_se;
        out["min_se"] = outcome.min_se;
        out["eval_count"] = outcome.eval_count;
        out["refused"] = outcome.refused;
        return out;
      },
      py::arg("method"), py::arg("config"), py::arg("objective") = "total", py::arg("seed") = 1,
      "Run one named allocator on a drawn scenario");

  m.def("known_methods", &known_methods);

  m.def(
      "parse_config_text",
      [](const std::string& text) {
        const ExperimentSpec spec = parse_config_text(text);
        py::dict out;
        out["system"] = spec.scenario.system;
        out["trials"] = spec.trials;
        out["seed"] = spec.seed;
        out["methods"] = spec.methods;
        out["objective"] = objective_name(spec.objective);
        out["sweep"] = sweep_name(spec.sweep);
        out["sweep_values"] = spec.sweep_values;
        return out;
      },
      py::arg("text"), "Parse a key = value configuration");

  m.attr("__version__") = "0.1.0";
}
