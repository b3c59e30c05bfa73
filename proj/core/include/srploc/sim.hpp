// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "srploc/eval.hpp"
#include "srploc/geometry.hpp"
#include "srploc/stft.hpp"

namespace srploc {

// Keyframe of a source trajectory. Elevation is interpolated linearly
// between keyframes, azimuth along the shorter arc; the direction is held
// constant outside the keyframe span.
struct TrajectoryPoint {
  double time = 0.0;
  double azimuth = 0.0;
  double elevation = 0.0;
};

struct WhiteNoiseSource {
  std::uint64_t seed = 1;
  double rms = 0.1;
};

// Mono source signal at the scene rate.
struct SignalSource {
  std::vector<double> samples;
  double fs = 0.0;
};

struct SceneSpec {
  ArrayGeometry geometry;
  std::vector<TrajectoryPoint> trajectory;  // one point = static source
  std::variant<WhiteNoiseSource, SignalSource> source = WhiteNoiseSource{};
  std::optional<double> snr_db;             // unset: noiseless
  std::optional<std::uint64_t> noise_seed;  // required when snr_db is set
  double fs = 16000.0;
  double duration = 1.0;  // seconds
  double speed_of_sound = kDefaultSpeedOfSound;
  double truth_period = 0.1;      // seconds between ground-truth records
  double update_period = 0.01;    // delay update step for moving sources
};

struct RenderedScene {
  SignalBlock signal;
  std::vector<TrajectoryRecord> truth;
};

// Plane-wave arrival time of each microphone relative to the array center,
// seconds: -(p_m - center) . dir / c. Negative means earlier than the center.
std::vector<double> plane_wave_delays(const ArrayGeometry& geom, const Vec3& dir,
                                      double speed_of_sound);

// Source direction at time t (azimuth normalized to [0, 360)).
TrajectoryRecord doa_at(const std::vector<TrajectoryPoint>& trajectory, double t);

// Far-field, free-field render. Static sources are delayed exactly with one
// FFT phase ramp over the padded signal; moving sources are rendered in
// update_period steps, each delayed with its own phase ramp and
// cross-faded with power-complementary sin^2 windows.
// Throws ArgumentError on an invalid scene.
RenderedScene render(const SceneSpec& scene);

// Delays a padded real signal by `delay` samples (may be fractional or
// negative) with a circular FFT phase ramp.
std::vector<double> fractional_delay(const std::vector<double>& x, double delay);

}  // namespace srploc
