// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

#include "cfbits/experiment.hpp"

namespace cfbits {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The default operating point: the 2.1 GHz / 20 MHz urban-micro scenario
/// with M=4, K=8, N=64, a 64-bit fronthaul budget and the standard search
/// parameters.
ExperimentSpec default_spec();

/// Reduced operating point (M=4, K=4, N=16, 32-bit budget) small enough for
/// exhaustive cross-checks.
ExperimentSpec desk_spec();

/// Parses a flat key = value configuration (optional [section] headers are
/// decorative; '#' and ';' start comments). dB/dBm fields are converted to
/// linear at this boundary; unknown keys are rejected. Errors carry the key
/// name and line number. An empty file yields default_spec().
ExperimentSpec parse_config_text(const std::string& text);

/// File variant; missing files raise std::ios_base::failure.
ExperimentSpec parse_config(const std::string& path);

}  // namespace cfbits
