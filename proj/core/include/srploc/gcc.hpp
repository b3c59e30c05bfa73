// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "srploc/geometry.hpp"
#include "srploc/stft.hpp"

namespace srploc {

// Uniform local-AOA axis over [0, 180] degrees. Both endpoints are always
// knots; when 180 is not a multiple of the step the last interval is shorter.
class AoaAxis {
 public:
  explicit AoaAxis(double step_deg);

  double step() const { return step_; }
  std::size_t size() const { return angles_.size(); }
  std::span<const double> angles() const { return angles_; }

  // Interval containing alpha (clamped to [0, 180]) and the weight of its
  // upper knot: value = (1 - w) * v[idx] + w * v[idx + 1].
  struct Bracket {
    std::size_t idx;
    double weight;
  };
  Bracket bracket(double alpha_deg) const;

 private:
  double step_;
  std::vector<double> angles_;
};

// Optional analysis band in Hz; both ends inclusive.
struct FrequencyBand {
  double low_hz = 0.0;
  double high_hz = 0.0;
};

// FFT bins that feed localization: 1 .. n_fft/2 - 1 (DC and Nyquist carry
// no phase), optionally restricted to a band.
std::vector<std::size_t> analysis_bins(std::size_t n_fft, double fs,
                                       const std::optional<FrequencyBand>& band = std::nullopt);

// Below this cross-power a bin is treated as empty and contributes zero.
inline constexpr double kPhatFloor = 1e-12;

// out[f] = x1[f] conj(x2[f]) / |x1[f] conj(x2[f])|, or 0 where the magnitude
// is below kPhatFloor.
std::vector<std::complex<double>> phat_cross_spectrum(std::span<const std::complex<double>> x1,
                                                      std::span<const std::complex<double>> x2);
std::complex<double> phat(std::complex<double> x1, std::complex<double> x2);

// GCC-PHAT local angular spectrum of one pair on an AOA axis, laid out
// [frame][bin][angle]. Every value is the real part of a unit (or zero)
// complex number, so it lies in [-1, 1].
struct LocalSpectrum {
  MicPair pair;
  std::size_t frames = 0;
  std::vector<std::size_t> bins;  // FFT bin index of each bin slot
  std::size_t angles = 0;
  std::vector<double> values;

  double at(std::size_t t, std::size_t b, std::size_t i) const {
    return values[(t * bins.size() + b) * angles + i];
  }
};

// Steering phase for FFT bin f at local angle alpha:
// exp(+2 pi i f tau cos(alpha) / n_fft). The cross-spectrum is taken as
// X_i conj(X_j), so a wavefront reaching mic i d samples after mic j
// (source towards +axis) cancels exactly at cos(alpha) = d / tau.
std::complex<double> steering(std::size_t bin, double tau, double alpha_deg, std::size_t n_fft);

// Throws ArgumentError if a pair channel is missing from the spectrogram.
LocalSpectrum local_spectrum(const Spectrogram& spec, const MicPair& pair, const AoaAxis& axis,
                             std::span<const std::size_t> bins);
LocalSpectrum local_spectrum(const Spectrogram& spec, const MicPair& pair, const AoaAxis& axis);

// Per-pair spectrum resampled onto the global DOA grid, [frame][bin][point].
struct GridSpectra {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::size_t points = 0;
  std::vector<double> values;

  double& at(std::size_t t, std::size_t b, std::size_t g) {
    return values[(t * bins + b) * points + g];
  }
  double at(std::size_t t, std::size_t b, std::size_t g) const {
    return values[(t * bins + b) * points + g];
  }
};

// Linear interpolation of the local spectrum at each grid point's AOA.
// Exact at axis knots.
GridSpectra interpolate_to_grid(const LocalSpectrum& local, const AoaTable& table,
                                const AoaAxis& axis);

}  // namespace srploc
