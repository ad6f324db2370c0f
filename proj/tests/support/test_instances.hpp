// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cfbits/channel.hpp"
#include "cfbits/config_io.hpp"
#include "cfbits/rng.hpp"
#include "cfbits/types.hpp"

namespace cfbits::test_support {

// Small randomized scenario used across suites.
struct Instance {
  SystemConfig config;
  ChannelStatistics stats;
  BitGrid bits;
};

inline Instance random_instance(Rng& rng, int max_aps = 4, int max_ues = 4, int max_antennas = 8,
                                int max_bits = 12) {
  Instance inst;
  inst.config = default_spec().scenario.system;
  inst.config.num_aps = rng.uniform_int(1, max_aps);
  inst.config.num_ues = rng.uniform_int(1, max_ues);
  inst.config.antennas_per_ap = rng.uniform_int(1, max_antennas);
  inst.config.pilot_length = inst.config.num_ues;
  inst.config.bit_budget = 10000;  // unconstrained unless a test tightens it

  Geometry geometry;
  geometry.ap_positions = default_ap_positions(inst.config.num_aps, 250.0);
  Rng pos = rng.substream("ue_pos");
  geometry.ue_positions = draw_ue_positions(inst.config.num_ues, 600.0, {0.0, 0.0}, pos);
  Rng shadow = rng.substream("shadow");
  inst.stats = build_channel_statistics(geometry, inst.config, shadow);

  inst.bits = BitGrid(inst.config.num_aps, inst.config.num_ues);
  Rng bit_rng = rng.substream("bits");
  for (auto& b : inst.bits.data()) b = bit_rng.uniform_int(0, max_bits);
  return inst;
}

}  // namespace cfbits::test_support
