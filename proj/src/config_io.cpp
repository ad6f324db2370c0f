// SPDX-License-Identifier: Apache-2.0
#include "cfbits/config_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cfbits/channel.hpp"

namespace cfbits {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& key, int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ", key '" + key + "': " + what);
}

double parse_double(const std::string& key, const std::string& value, int line) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    fail(key, line, "expected a number, got '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value, int line) {
  const double parsed = parse_double(key, value, line);
  if (parsed != std::floor(parsed)) fail(key, line, "expected an integer, got '" + value + "'");
  return static_cast<int>(parsed);
}

std::vector<double> parse_list(const std::string& key, const std::string& value, int line) {
  std::vector<double> values;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) values.push_back(parse_double(key, item, line));
  }
  if (values.empty()) fail(key, line, "expected a comma-separated list");
  return values;
}

}  // namespace

ExperimentSpec default_spec() {
  ExperimentSpec spec;
  SystemConfig& sys = spec.scenario.system;
  sys.num_aps = 4;
  sys.num_ues = 8;
  sys.antennas_per_ap = 64;
  sys.bit_budget = 64;
  sys.pilot_power_w = dbm_to_watts(15.0);
  sys.uplink_power_w = dbm_to_watts(15.0);
  sys.bandwidth_hz = 20e6;
  sys.carrier_freq_hz = 2.1e9;
  sys.noise_figure_db = 9.0;
  sys.noise_power_w = derive_noise_power_w(sys.bandwidth_hz, sys.noise_figure_db);
  sys.pilot_length = sys.num_ues;
  sys.shadowing_std_db = 4.0;
  spec.scenario.area_side_m = 1000.0;
  spec.scenario.ap_half_spacing_m = 250.0;
  return spec;
}

ExperimentSpec desk_spec() {
  ExperimentSpec spec = default_spec();
  SystemConfig& sys = spec.scenario.system;
  sys.num_ues = 4;
  sys.pilot_length = 4;
  sys.antennas_per_ap = 16;
  sys.bit_budget = 32;
  return spec;
}

ExperimentSpec parse_config_text(const std::string& text) {
  ExperimentSpec spec = default_spec();
  SystemConfig& sys = spec.scenario.system;

  bool pilot_explicit = false;
  std::string ap_layout = "auto";

  using Setter = std::function<void(const std::string&, const std::string&, int)>;
  const std::map<std::string, Setter> setters = {
      {"preset",
       [&](const std::string& k, const std::string& v, int line) {
         if (v == "table3") spec = default_spec();
         else if (v == "desk") spec = desk_spec();
         else fail(k, line, "unknown preset '" + v + "' (expected table3|desk)");
       }},
      {"num_aps", [&](auto& k, auto& v, int l) { sys.num_aps = parse_int(k, v, l); }},
      {"num_ues", [&](auto& k, auto& v, int l) { sys.num_ues = parse_int(k, v, l); }},
      {"antennas_per_ap",
       [&](auto& k, auto& v, int l) { sys.antennas_per_ap = parse_int(k, v, l); }},
      {"bit_budget", [&](auto& k, auto& v, int l) { sys.bit_budget = parse_int(k, v, l); }},
      {"max_bits",
       [&](auto& k, auto& v, int l) { spec.allocators.max_bits = parse_int(k, v, l); }},
      {"ue_power_dbm",
       [&](auto& k, auto& v, int l) {
         const double watts = dbm_to_watts(parse_double(k, v, l));
         sys.pilot_power_w = watts;
         sys.uplink_power_w = watts;
       }},
      {"pilot_power_dbm",
       [&](auto& k, auto& v, int l) { sys.pilot_power_w = dbm_to_watts(parse_double(k, v, l)); }},
      {"uplink_power_dbm",
       [&](auto& k, auto& v, int l) { sys.uplink_power_w = dbm_to_watts(parse_double(k, v, l)); }},
      {"bandwidth_mhz",
       [&](auto& k, auto& v, int l) { sys.bandwidth_hz = parse_double(k, v, l) * 1e6; }},
      {"carrier_ghz",
       [&](auto& k, auto& v, int l) { sys.carrier_freq_hz = parse_double(k, v, l) * 1e9; }},
      {"noise_figure_db",
       [&](auto& k, auto& v, int l) { sys.noise_figure_db = parse_double(k, v, l); }},
      {"pilot_length",
       [&](auto& k, auto& v, int l) {
         sys.pilot_length = parse_int(k, v, l);
         pilot_explicit = sys.pilot_length != 0;
       }},
      {"shadowing_std_db",
       [&](auto& k, auto& v, int l) { sys.shadowing_std_db = parse_double(k, v, l); }},
      {"area_side_m",
       [&](auto& k, auto& v, int l) { spec.scenario.area_side_m = parse_double(k, v, l); }},
      {"center_x_m",
       [&](auto& k, auto& v, int l) { spec.scenario.area_center[0] = parse_double(k, v, l); }},
      {"center_y_m",
       [&](auto& k, auto& v, int l) { spec.scenario.area_center[1] = parse_double(k, v, l); }},
      {"ap_half_spacing_m",
       [&](auto& k, auto& v, int l) { spec.scenario.ap_half_spacing_m = parse_double(k, v, l); }},
      {"displacement_direction",
       [&](auto& k, auto& v, int l) {
         if (v == "up") spec.scenario.displacement_direction = {0.0, 1.0};
         else if (v == "diagonal")
           spec.scenario.displacement_direction = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
         else fail(k, l, "expected up|diagonal");
       }},
      {"stage1_memory",
       [&](auto& k, auto& v, int l) { spec.allocators.hs_stage1.hm_size = parse_int(k, v, l); }},
      {"stage1_hmcr",
       [&](auto& k, auto& v, int l) { spec.allocators.hs_stage1.hmcr = parse_double(k, v, l); }},
      {"stage1_iterations",
       [&](auto& k, auto& v, int l) { spec.allocators.hs_stage1.iterations = parse_int(k, v, l); }},
      {"stage2_memory",
       [&](auto& k, auto& v, int l) { spec.allocators.hs_stage2.hm_size = parse_int(k, v, l); }},
      {"stage2_hmcr",
       [&](auto& k, auto& v, int l) { spec.allocators.hs_stage2.hmcr = parse_double(k, v, l); }},
      {"stage2_iterations",
       [&](auto& k, auto& v, int l) { spec.allocators.hs_stage2.iterations = parse_int(k, v, l); }},
      {"outer_cycles",
       [&](auto& k, auto& v, int l) {
         spec.allocators.hs_stage2.outer_cycles = parse_int(k, v, l);
       }},
      {"exhaustive_cap",
       [&](auto& k, auto& v, int l) {
         spec.allocators.exhaustive_cap = static_cast<unsigned long long>(parse_double(k, v, l));
       }},
      {"sweep",
       [&](auto& k, auto& v, int l) {
         if (v == "none") spec.sweep = SweepKind::kNone;
         else if (v == "num_ues") spec.sweep = SweepKind::kNumUes;
         else if (v == "num_antennas") spec.sweep = SweepKind::kNumAntennas;
         else if (v == "center_displacement") spec.sweep = SweepKind::kCenterDisplacement;
         else if (v == "objective") spec.sweep = SweepKind::kObjectiveComparison;
         else fail(k, l, "unknown sweep '" + v + "'");
       }},
      {"sweep_values", [&](auto& k, auto& v, int l) { spec.sweep_values = parse_list(k, v, l); }},
      {"trials", [&](auto& k, auto& v, int l) { spec.trials = parse_int(k, v, l); }},
      {"seed",
       [&](auto& k, auto& v, int l) {
         spec.seed = static_cast<std::uint64_t>(parse_double(k, v, l));
       }},
      {"threads", [&](auto& k, auto& v, int l) { spec.threads = parse_int(k, v, l); }},
      {"methods",
       [&](auto& k, auto& v, int l) {
         spec.methods.clear();
         std::stringstream stream(v);
         std::string item;
         while (std::getline(stream, item, ',')) {
           item = trim(item);
           if (!item.empty()) spec.methods.push_back(item);
         }
         if (spec.methods.empty()) fail(k, l, "expected a comma-separated method list");
       }},
      {"objective",
       [&](auto& k, auto& v, int l) {
         try {
           spec.objective = objective_from_name(v);
         } catch (const std::exception& e) {
           fail(k, l, e.what());
         }
       }},
      {"record_allocation",
       [&](auto& k, auto& v, int l) {
         if (v == "true" || v == "1") spec.record_allocation = true;
         else if (v == "false" || v == "0") spec.record_allocation = false;
         else fail(k, l, "expected true|false");
       }},
      {"timings",
       [&](auto& k, auto& v, int l) {
         if (v == "true" || v == "1") spec.record_timings = true;
         else if (v == "false" || v == "0") spec.record_timings = false;
         else fail(k, l, "expected true|false");
       }},
  };

  std::istringstream stream(text);
  std::string raw;
  int line = 0;
  while (std::getline(stream, raw)) {
    ++line;
    std::string content = raw;
    const auto comment = content.find_first_of("#;");
    if (comment != std::string::npos) content = content.substr(0, comment);
    content = trim(content);
    if (content.empty()) continue;
    if (content.front() == '[') {
      if (content.back() != ']')
        throw ConfigError("config line " + std::to_string(line) + ": unterminated section header");
      continue;  // sections are organizational only
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line) + ": expected key = value, got '" +
                        content + "'");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end())
      throw ConfigError("config line " + std::to_string(line) + ": unknown key '" + key + "'");
    it->second(key, value, line);
  }

  // pilot_length = 0 requests the orthogonal default tau_p = K.
  if (!pilot_explicit || sys.pilot_length == 0) sys.pilot_length = sys.num_ues;
  sys.noise_power_w = derive_noise_power_w(sys.bandwidth_hz, sys.noise_figure_db);
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config constraint violated: ") + e.what());
  }
  return spec;
}

ExperimentSpec parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace cfbits
