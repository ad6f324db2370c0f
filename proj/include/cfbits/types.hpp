// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfbits {

/// Dense row-major matrix, just large enough for this project's needs.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, T init = T{})
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, init) {}

  T& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const T& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using RealGrid = Grid<double>;
using BitGrid = Grid<int>;
using CGrid = Grid<std::complex<double>>;
using CVec = std::vector<std::complex<double>>;

/// System-level scenario parameters. Powers are linear watts; dB and dBm
/// appear only at the configuration boundary.
struct SystemConfig {
  int num_aps = 4;
  int num_ues = 8;
  int antennas_per_ap = 64;
  int bit_budget = 64;
  double pilot_power_w = 0.03162277660168379;   // 15 dBm
  double uplink_power_w = 0.03162277660168379;  // 15 dBm
  double noise_power_w = 6.362410294493624e-13;
  int pilot_length = 8;
  double bandwidth_hz = 20e6;
  double carrier_freq_hz = 2.1e9;
  double noise_figure_db = 9.0;
  double shadowing_std_db = 4.0;

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

struct Geometry {
  std::vector<std::array<double, 2>> ap_positions;
  std::vector<std::array<double, 2>> ue_positions;
};

/// Long-term channel knowledge: large-scale gains (beta) and the per-element
/// variance of the LMMSE channel estimate (gamma), both M x K, linear scale.
struct ChannelStatistics {
  RealGrid beta;
  RealGrid gamma;
};

enum class Objective { kTotalSe, kMaxMinSe };

std::string objective_name(Objective objective);
Objective objective_from_name(const std::string& name);

long long total_bits(const BitGrid& bits);

/// True when every entry lies in [0, max_bits].
bool within_bit_caps(const BitGrid& bits, int max_bits);

/// The per-AP view of an allocation in which all UEs of an AP share the same
/// bit count; empty when rows are not uniform.
std::optional<std::vector<int>> uniform_ap_view(const BitGrid& bits);

}  // namespace cfbits
