// SPDX-License-Identifier: Apache-2.0
#include "srploc/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "srploc/error.hpp"
#include "srploc/geometry_io.hpp"
#include "srploc/wav.hpp"

namespace srploc {

namespace {

std::size_t ms_to_samples(double ms, double fs) {
  return static_cast<std::size_t>(std::llround(ms * fs / 1000.0));
}

void validate(const RunConfig& c) {
  if (!(c.fs > 0.0)) throw ArgumentError("target sampling rate must be positive");
  if (!(c.block_ms > 0.0) || !(c.hop_ms > 0.0)) throw ArgumentError("block and hop lengths must be positive");
  if (c.hop_ms > c.block_ms) throw ArgumentError("hop (" + std::to_string(c.hop_ms) +
                                                 " ms) must not exceed the block length (" +
                                                 std::to_string(c.block_ms) + " ms)");
  if (c.n_fft < 2 || c.n_fft % 2 != 0) throw ArgumentError("FFT size must be even and >= 2");
  if (c.n_fft > ms_to_samples(c.block_ms, c.fs)) {
    throw ArgumentError("FFT size " + std::to_string(c.n_fft) + " exceeds the " +
                        std::to_string(ms_to_samples(c.block_ms, c.fs)) + "-sample block");
  }
  if (!(c.speed_of_sound > 0.0)) throw ArgumentError("speed of sound must be positive");
  if (c.min_pair_angle_deg < 0.0 || c.min_pair_angle_deg > 180.0) {
    throw ArgumentError("minimum pair angle must lie in [0, 180] degrees");
  }
  c.pooling.validate();
}

}  // namespace

std::size_t block_count(std::size_t length, std::size_t block_len, std::size_t hop_len) {
  return frame_count(length, block_len, hop_len);
}

LocateResult locate_signal(const ArrayGeometry& geom, const SignalBlock& input,
                           const RunConfig& config, const std::optional<std::vector<double>>& query_times) {
  validate(config);
  input.validate();
  if (input.channel_count() != geom.size()) {
    throw ArgumentError("audio has " + std::to_string(input.channel_count()) +
                        " channels but the geometry lists " + std::to_string(geom.size()) +
                        " microphones");
  }
  const SignalBlock signal = decimate(input, config.fs);

  auto pairs = derive_pairs(geom, config.fs, config.speed_of_sound);
  pairs = select_pairs_curvilinear(geom, pairs, config.min_pair_angle_deg);
  if (pairs.empty()) {
    throw ArgumentError("no microphone pair has a central angle of at least " +
                        std::to_string(config.min_pair_angle_deg) + " degrees");
  }
  auto grid = std::make_shared<const DoaGrid>(config.grid_res_deg, config.grid_res_deg);
  SrpPhatOptions opts;
  opts.n_fft = config.n_fft;
  opts.fs = config.fs;
  opts.aoa_step_deg = config.aoa_res_deg;
  opts.pooling = config.pooling;
  opts.band = config.band;
  const SrpPhatProcessor processor(grid, std::move(pairs), opts);

  const std::size_t block_len = ms_to_samples(config.block_ms, config.fs);
  const std::size_t hop_len = ms_to_samples(config.hop_ms, config.fs);
  const std::size_t n_blocks = block_count(signal.length(), block_len, hop_len);
  const std::size_t stft_hop = config.n_fft / 2;

  LocateResult result;
  result.pairs_used = processor.pairs().size();
  result.grid_points = grid->size();
  result.blocks.resize(n_blocks);
  result.low_score_floor =
      kLowScoreFraction * processor.max_score(frame_count(block_len, config.n_fft, stft_hop));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      StftAnalyzer analyzer(config.n_fft, stft_hop);
      for (std::size_t k = next++; k < n_blocks; k = next++) {
        const SignalBlock block = extract_block(signal, k * hop_len, block_len);
        const AngularSpectrum spectrum = processor.process(analyzer.analyze(block));
        const Peak peak = find_peaks(spectrum, processor.grid()).front();
        TrajectoryRecord& r = result.blocks[k];
        r.time = block.start_time + static_cast<double>(block_len) / 2.0 / config.fs;
        r.azimuth = peak.azimuth_deg;
        r.elevation = peak.elevation_deg;
        r.score = peak.score;
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n_blocks;
    }
  };
  std::size_t n_threads = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  n_threads = std::max<std::size_t>(1, std::min(n_threads, n_blocks));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& r : result.blocks) {
    if (*r.score < result.low_score_floor) ++result.low_score_blocks;
  }
  if (query_times && !result.blocks.empty()) {
    result.output = interpolate_trajectory(result.blocks, *query_times);
  } else {
    result.output = result.blocks;
  }
  return result;
}

LocateResult locate(const RunConfig& config) {
  const ArrayGeometry geom = read_geometry(config.geometry_path);
  const SignalBlock audio = read_audio(config.input_path);
  if (audio.channel_count() != geom.size()) {
    throw ArgumentError(config.input_path + ": " + std::to_string(audio.channel_count()) +
                        " channels, expected " + std::to_string(geom.size()) + " to match " +
                        config.geometry_path);
  }
  std::optional<std::vector<double>> times;
  if (config.timestamps_path) times = read_timestamps(*config.timestamps_path);
  LocateResult result;
  try {
    result = locate_signal(geom, audio, config, times);
  } catch (const UnsupportedRateError& e) {
    throw UnsupportedRateError(config.input_path + ": " + e.what());
  }
  write_trajectory_csv(config.output_path, result.output);
  return result;
}

}  // namespace srploc
