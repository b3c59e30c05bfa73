// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srploc/gcc.hpp"
#include "srploc/geometry.hpp"
#include "srploc/stft.hpp"

namespace srploc {

enum class Reducer { kSum, kMax };
enum class PoolAxis { kPairs, kFrequency, kTime };

// How local spectra are reduced to one value per grid point: one reducer per
// axis, applied in `order` (order[0] first).
struct PoolingSpec {
  Reducer over_pairs = Reducer::kSum;
  Reducer over_freq = Reducer::kSum;
  Reducer over_time = Reducer::kMax;
  std::array<PoolAxis, 3> order{PoolAxis::kPairs, PoolAxis::kFrequency, PoolAxis::kTime};

  Reducer reducer(PoolAxis axis) const;
  // Throws ArgumentError unless order is a permutation of the three axes.
  void validate() const;

  // Accepts either three reducers for pairs,freq,time ("sum,sum,max") or
  // axis:reducer tokens in application order ("time:max,pairs:sum,freq:sum").
  static PoolingSpec parse(std::string_view text);
  std::string to_string() const;
};

// Global angular spectrum: one finite score per grid point.
struct AngularSpectrum {
  std::vector<double> values;
  std::size_t size() const { return values.size(); }
};

// Reduces per-pair [frame][bin][point] arrays. All inputs must share
// dimensions; a mismatch throws ArgumentError naming the pair.
AngularSpectrum pool(std::span<const GridSpectra> per_pair, const PoolingSpec& spec = {});

struct PeakSpec {
  std::size_t max_peaks = 1;
  std::optional<double> threshold;  // absolute score
  double min_separation_deg = 0.0;  // great-circle
};

struct Peak {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;
  double score = 0.0;
  std::size_t index = 0;  // linear grid index
};

// Greedy peak picking: take the largest remaining value (ties go to the
// lowest grid index), drop every point closer than min_separation_deg, and
// repeat. Stops at max_peaks or when the best remaining value falls below
// the threshold. At the poles every azimuth is the same direction, so the
// reported azimuth of a polar peak is arbitrary.
std::vector<Peak> find_peaks(const AngularSpectrum& spectrum, const DoaGrid& grid,
                             const PeakSpec& spec = {});

// Great-circle distance between two directions in degrees.
double great_circle_deg(const Vec3& a, const Vec3& b);

struct SrpPhatOptions {
  std::size_t n_fft = 1024;
  double fs = 16000.0;
  double aoa_step_deg = 5.0;
  PoolingSpec pooling;
  std::optional<FrequencyBand> band;
};

// Computes the pooled SRP-PHAT angular spectrum of a spectrogram without
// materializing [pair][frame][bin][point] arrays. Leading sum reductions
// commute with interpolation, so they are applied on the AOA axis before
// resampling to the grid; remaining reductions stream over grid vectors.
// Under the default sum,sum,max pooling the cost per block is
// pairs * frames * grid points. Immutable after construction; process() may
// be called concurrently.
class SrpPhatProcessor {
 public:
  SrpPhatProcessor(std::shared_ptr<const DoaGrid> grid, std::vector<MicPair> pairs,
                   const SrpPhatOptions& options);

  const DoaGrid& grid() const { return *grid_; }
  std::span<const MicPair> pairs() const { return pairs_; }
  std::span<const std::size_t> bins() const { return bins_; }
  const AoaAxis& axis() const { return axis_; }
  const SrpPhatOptions& options() const { return options_; }

  // Largest value the pooled spectrum can reach for this configuration
  // (every local value equal to 1).
  double max_score(std::size_t frames) const;

  AngularSpectrum process(const Spectrogram& spec) const;

 private:
  struct PairPlan {
    std::vector<double> steer_re;       // [bin][angle]
    std::vector<double> steer_im;       // [bin][angle]
    std::vector<std::uint16_t> knot;    // per grid point
    std::vector<double> weight;         // per grid point
  };

  std::shared_ptr<const DoaGrid> grid_;
  std::vector<MicPair> pairs_;
  SrpPhatOptions options_;
  AoaAxis axis_;
  std::vector<std::size_t> bins_;
  std::vector<PairPlan> plans_;
};

}  // namespace srploc
