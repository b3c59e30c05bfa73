// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "srploc/eval.hpp"
#include "srploc/gcc.hpp"
#include "srploc/geometry.hpp"
#include "srploc/srp.hpp"
#include "srploc/stft.hpp"

namespace srploc {

struct RunConfig {
  std::string geometry_path;
  std::string input_path;
  std::string output_path;
  std::optional<std::string> timestamps_path;

  double block_ms = 512.0;
  double hop_ms = 256.0;
  std::size_t n_fft = 1024;
  double fs = 16000.0;
  double grid_res_deg = 1.0;
  double aoa_res_deg = 5.0;
  PoolingSpec pooling;
  double min_pair_angle_deg = 0.0;
  double speed_of_sound = kDefaultSpeedOfSound;
  std::optional<FrequencyBand> band;
  std::size_t threads = 1;  // 0 = one per hardware thread
};

// Block scores below this fraction of the largest attainable pooled value
// are reported as low-score (e.g. silent input).
inline constexpr double kLowScoreFraction = 1e-3;

struct LocateResult {
  std::vector<TrajectoryRecord> blocks;  // one estimate per block, at block centers
  std::vector<TrajectoryRecord> output;  // blocks, or interpolated to query timestamps
  std::size_t pairs_used = 0;
  std::size_t grid_points = 0;
  std::size_t low_score_blocks = 0;
  double low_score_floor = 0.0;
};

// Number of sliding blocks for a signal of `length` samples.
std::size_t block_count(std::size_t length, std::size_t block_len, std::size_t hop_len);

// Runs SRP-PHAT on an in-memory signal. The signal is decimated to
// config.fs first when needed. Throws on invalid configuration, a
// channel/geometry mismatch, or an unsupported rate.
LocateResult locate_signal(const ArrayGeometry& geom, const SignalBlock& signal,
                           const RunConfig& config,
                           const std::optional<std::vector<double>>& query_times = std::nullopt);

// File-based wrapper: reads geometry, audio and optional timestamps, writes
// the estimates CSV to config.output_path.
LocateResult locate(const RunConfig& config);

}  // namespace srploc
