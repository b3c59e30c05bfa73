// SPDX-License-Identifier: Apache-2.0
#include "srploc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "srploc/error.hpp"
#include "srploc/fft.hpp"

namespace srploc {

namespace {

void validate(const SceneSpec& scene) {
  if (!(scene.fs > 0.0)) throw ArgumentError("scene sampling rate must be positive");
  if (!(scene.duration > 0.0)) throw ArgumentError("scene duration must be positive");
  if (!(scene.speed_of_sound > 0.0)) throw ArgumentError("speed of sound must be positive");
  if (!(scene.truth_period > 0.0)) throw ArgumentError("ground-truth period must be positive");
  if (!(scene.update_period > 0.0)) throw ArgumentError("update period must be positive");
  if (scene.trajectory.empty()) throw ArgumentError("scene has no source direction");
  for (std::size_t k = 0; k < scene.trajectory.size(); ++k) {
    const TrajectoryPoint& p = scene.trajectory[k];
    if (!std::isfinite(p.azimuth) || !std::isfinite(p.elevation) || p.elevation < -90.0 ||
        p.elevation > 90.0) {
      throw ArgumentError("trajectory point " + std::to_string(k) + " has an invalid direction");
    }
    if (scene.trajectory.size() > 1 && (p.time < 0.0 || p.time > scene.duration)) {
      throw ArgumentError("trajectory time " + std::to_string(p.time) +
                          " s lies outside the scene duration [0, " +
                          std::to_string(scene.duration) + "] s");
    }
    if (k > 0 && !(p.time > scene.trajectory[k - 1].time)) {
      throw ArgumentError("trajectory times must be strictly increasing");
    }
  }
  if (scene.snr_db) {
    if (!std::isfinite(*scene.snr_db)) throw ArgumentError("SNR must be finite when set");
    if (!scene.noise_seed) throw ArgumentError("a noise seed is required when an SNR is given");
  }
  if (const auto* sig = std::get_if<SignalSource>(&scene.source)) {
    if (std::abs(sig->fs - scene.fs) > 1e-9 * scene.fs) {
      throw ArgumentError("source signal rate " + std::to_string(sig->fs) +
                          " Hz differs from the scene rate " + std::to_string(scene.fs) + " Hz");
    }
  }
}

bool is_static(const std::vector<TrajectoryPoint>& traj) {
  return std::all_of(traj.begin(), traj.end(), [&](const TrajectoryPoint& p) {
    return p.azimuth == traj.front().azimuth && p.elevation == traj.front().elevation;
  });
}

// Source samples covering output indices [-pad, length + pad).
std::vector<double> source_samples(const SceneSpec& scene, std::size_t length, std::size_t pad) {
  std::vector<double> s(length + 2 * pad, 0.0);
  if (const auto* noise = std::get_if<WhiteNoiseSource>(&scene.source)) {
    std::mt19937_64 rng(noise->seed);
    std::normal_distribution<double> dist(0.0, noise->rms);
    // Samples 0..length-1 come first so every render mode sees the same
    // source for a given seed.
    for (std::size_t n = pad; n < pad + length; ++n) s[n] = dist(rng);
    for (std::size_t n = 0; n < pad; ++n) s[n] = dist(rng);
    for (std::size_t n = pad + length; n < s.size(); ++n) s[n] = dist(rng);
  } else {
    const auto& sig = std::get<SignalSource>(scene.source);
    if (sig.samples.size() < length) {
      throw ArgumentError("source signal has " + std::to_string(sig.samples.size()) +
                          " samples, the scene needs " + std::to_string(length));
    }
    std::copy(sig.samples.begin(), sig.samples.begin() + static_cast<std::ptrdiff_t>(length),
              s.begin() + static_cast<std::ptrdiff_t>(pad));
  }
  return s;
}

void apply_phase_ramp(std::span<std::complex<double>> spec, std::size_t n, double delay) {
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (2 * k == n) {
      // A real signal's Nyquist bin must stay real.
      spec[k] *= std::cos(kPi * delay);
    } else {
      spec[k] *= std::polar(1.0, -2.0 * kPi * static_cast<double>(k) * delay / static_cast<double>(n));
    }
  }
}

double max_abs_delay_samples(const ArrayGeometry& geom, double fs, double c) {
  double r = 0.0;
  for (const Vec3& p : geom.mics()) r = std::max(r, norm(p - geom.center()));
  return r * fs / c;
}

}  // namespace

std::vector<double> plane_wave_delays(const ArrayGeometry& geom, const Vec3& dir,
                                      double speed_of_sound) {
  std::vector<double> d;
  d.reserve(geom.size());
  for (const Vec3& p : geom.mics()) d.push_back(-dot(p - geom.center(), dir) / speed_of_sound);
  return d;
}

TrajectoryRecord doa_at(const std::vector<TrajectoryPoint>& trajectory, double t) {
  if (trajectory.empty()) throw ArgumentError("empty trajectory");
  TrajectoryRecord r;
  r.time = t;
  if (trajectory.size() == 1 || t <= trajectory.front().time) {
    r.azimuth = trajectory.front().azimuth;
    r.elevation = trajectory.front().elevation;
  } else if (t >= trajectory.back().time) {
    r.azimuth = trajectory.back().azimuth;
    r.elevation = trajectory.back().elevation;
  } else {
    const auto hi = std::upper_bound(trajectory.begin(), trajectory.end(), t,
                                     [](double v, const TrajectoryPoint& p) { return v < p.time; });
    const TrajectoryPoint& b = *hi;
    const TrajectoryPoint& a = *(hi - 1);
    const double w = (t - a.time) / (b.time - a.time);
    // Azimuth moves along the shorter arc between keyframes.
    double delta = normalize_azimuth(b.azimuth - a.azimuth);
    if (delta > 180.0) delta -= 360.0;
    r.azimuth = a.azimuth + w * delta;
    r.elevation = a.elevation + w * (b.elevation - a.elevation);
  }
  r.azimuth = normalize_azimuth(r.azimuth);
  return r;
}

std::vector<double> fractional_delay(const std::vector<double>& x, double delay) {
  RealFft fft(x.size());
  std::vector<std::complex<double>> spec(fft.bins());
  fft.forward(x, spec);
  apply_phase_ramp(spec, x.size(), delay);
  std::vector<double> y(x.size());
  fft.inverse(spec, y);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (double& v : y) v *= scale;
  return y;
}

RenderedScene render(const SceneSpec& scene) {
  validate(scene);
  const auto length = static_cast<std::size_t>(std::llround(scene.duration * scene.fs));
  if (length == 0) throw ArgumentError("scene is shorter than one sample");
  const std::size_t n_mics = scene.geometry.size();
  const double max_delay = max_abs_delay_samples(scene.geometry, scene.fs, scene.speed_of_sound);

  RenderedScene out;
  out.signal.fs = scene.fs;
  out.signal.channels.assign(n_mics, std::vector<double>(length, 0.0));

  if (is_static(scene.trajectory)) {
    const auto pad = static_cast<std::size_t>(std::ceil(max_delay)) + 64;
    const std::vector<double> src = source_samples(scene, length, pad);
    const TrajectoryPoint& p = scene.trajectory.front();
    const auto delays =
        plane_wave_delays(scene.geometry, direction(p.azimuth, p.elevation), scene.speed_of_sound);
    RealFft fft(src.size());
    std::vector<std::complex<double>> base(fft.bins());
    std::vector<std::complex<double>> spec(fft.bins());
    std::vector<double> y(src.size());
    fft.forward(src, base);
    const double scale = 1.0 / static_cast<double>(src.size());
    for (std::size_t m = 0; m < n_mics; ++m) {
      spec = base;
      apply_phase_ramp(spec, src.size(), delays[m] * scene.fs);
      fft.inverse(spec, y);
      for (std::size_t n = 0; n < length; ++n) out.signal.channels[m][n] = y[n + pad] * scale;
    }
  } else {
    const auto hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(scene.update_period * scene.fs)));
    const std::size_t core = 2 * hop;
    // Circular wrap-around lands at least `margin` samples from the kept core.
    const auto margin = static_cast<std::size_t>(std::ceil(max_delay)) + 256;
    const std::size_t seg_len = core + 2 * margin;
    const std::size_t pad = margin + 2 * hop;
    const std::vector<double> src = source_samples(scene, length, pad);

    std::vector<double> window(core);
    for (std::size_t n = 0; n < core; ++n) {
      const double s = std::sin(kPi * (static_cast<double>(n) + 0.5) / static_cast<double>(core));
      window[n] = s * s;
    }
    RealFft fft(seg_len);
    std::vector<std::complex<double>> base(fft.bins());
    std::vector<std::complex<double>> spec(fft.bins());
    std::vector<double> y(seg_len);
    const double scale = 1.0 / static_cast<double>(seg_len);
    const std::size_t segments = (length + hop - 1) / hop + 1;
    for (std::size_t k = 0; k < segments; ++k) {
      // Segment k covers output samples [k*hop - hop, k*hop + hop).
      const auto core_start = static_cast<std::ptrdiff_t>(k * hop) - static_cast<std::ptrdiff_t>(hop);
      const double t_center = static_cast<double>(k * hop) / scene.fs;
      const TrajectoryRecord doa = doa_at(scene.trajectory, t_center);
      const auto delays = plane_wave_delays(scene.geometry, direction(doa.azimuth, doa.elevation),
                                            scene.speed_of_sound);
      const std::ptrdiff_t src_start = core_start - static_cast<std::ptrdiff_t>(margin) +
                                       static_cast<std::ptrdiff_t>(pad);
      fft.forward(std::span<const double>(src.data() + src_start, seg_len), base);
      for (std::size_t m = 0; m < n_mics; ++m) {
        spec = base;
        apply_phase_ramp(spec, seg_len, delays[m] * scene.fs);
        fft.inverse(spec, y);
        std::vector<double>& ch = out.signal.channels[m];
        for (std::size_t n = 0; n < core; ++n) {
          const std::ptrdiff_t idx = core_start + static_cast<std::ptrdiff_t>(n);
          if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(length)) continue;
          ch[static_cast<std::size_t>(idx)] += window[n] * y[margin + n] * scale;
        }
      }
    }
  }

  if (scene.snr_db) {
    std::mt19937_64 rng(*scene.noise_seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    const double gain = std::pow(10.0, -*scene.snr_db / 20.0);
    for (auto& ch : out.signal.channels) {
      double energy = 0.0;
      for (double v : ch) energy += v * v;
      const double sigma = std::sqrt(energy / static_cast<double>(ch.size())) * gain;
      for (double& v : ch) v += sigma * unit(rng);
    }
  }

  const auto records = static_cast<std::size_t>(std::floor(scene.duration / scene.truth_period + 1e-9)) + 1;
  out.truth.reserve(records);
  for (std::size_t k = 0; k < records; ++k) {
    out.truth.push_back(doa_at(scene.trajectory, static_cast<double>(k) * scene.truth_period));
  }
  return out;
}

}  // namespace srploc
