// SPDX-License-Identifier: Apache-2.0
#include "srploc/gcc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "srploc/error.hpp"

namespace srploc {

AoaAxis::AoaAxis(double step_deg) : step_(step_deg) {
  if (!(step_deg > 0.0) || step_deg > 180.0) {
    throw ArgumentError("AOA resolution must lie in (0, 180] degrees");
  }
  const auto intervals = static_cast<std::size_t>(std::ceil(180.0 / step_deg - 1e-9));
  angles_.resize(intervals + 1);
  for (std::size_t i = 0; i < intervals; ++i) angles_[i] = static_cast<double>(i) * step_deg;
  angles_.back() = 180.0;
}

AoaAxis::Bracket AoaAxis::bracket(double alpha_deg) const {
  const double a = std::clamp(alpha_deg, 0.0, 180.0);
  const std::size_t last = angles_.size() - 2;
  auto idx = static_cast<std::size_t>(a / step_);
  idx = std::min(idx, last);
  // Guard against a / step_ rounding one interval too high.
  if (idx > 0 && a < angles_[idx]) --idx;
  const double lo = angles_[idx];
  const double hi = angles_[idx + 1];
  return {idx, std::clamp((a - lo) / (hi - lo), 0.0, 1.0)};
}

std::vector<std::size_t> analysis_bins(std::size_t n_fft, double fs,
                                       const std::optional<FrequencyBand>& band) {
  if (band && !(band->high_hz >= band->low_hz)) {
    throw ArgumentError("frequency band upper edge must not be below the lower edge");
  }
  std::vector<std::size_t> bins;
  for (std::size_t f = 1; f < n_fft / 2; ++f) {
    if (band) {
      const double hz = static_cast<double>(f) * fs / static_cast<double>(n_fft);
      if (hz < band->low_hz || hz > band->high_hz) continue;
    }
    bins.push_back(f);
  }
  return bins;
}

std::complex<double> phat(std::complex<double> x1, std::complex<double> x2) {
  const std::complex<double> c = x1 * std::conj(x2);
  const double mag = std::abs(c);
  if (mag < kPhatFloor) return {0.0, 0.0};
  return c / mag;
}

std::vector<std::complex<double>> phat_cross_spectrum(std::span<const std::complex<double>> x1,
                                                      std::span<const std::complex<double>> x2) {
  if (x1.size() != x2.size()) {
    throw ArgumentError("cross-spectrum inputs differ in length: " + std::to_string(x1.size()) +
                        " vs " + std::to_string(x2.size()));
  }
  std::vector<std::complex<double>> out(x1.size());
  for (std::size_t f = 0; f < x1.size(); ++f) out[f] = phat(x1[f], x2[f]);
  return out;
}

std::complex<double> steering(std::size_t bin, double tau, double alpha_deg, std::size_t n_fft) {
  const double phase = 2.0 * kPi * static_cast<double>(bin) * tau * std::cos(deg2rad(alpha_deg)) /
                       static_cast<double>(n_fft);
  return std::polar(1.0, phase);
}

LocalSpectrum local_spectrum(const Spectrogram& spec, const MicPair& pair, const AoaAxis& axis,
                             std::span<const std::size_t> bins) {
  if (pair.i >= spec.channels() || pair.j >= spec.channels()) {
    throw ArgumentError("pair (" + std::to_string(pair.i) + ", " + std::to_string(pair.j) +
                        ") refers to a channel outside the " + std::to_string(spec.channels()) +
                        "-channel spectrogram");
  }
  LocalSpectrum out;
  out.pair = pair;
  out.frames = spec.frames();
  out.bins.assign(bins.begin(), bins.end());
  out.angles = axis.size();
  out.values.resize(out.frames * out.bins.size() * out.angles);

  // steer[b][i], shared by all frames.
  std::vector<std::complex<double>> steer(out.bins.size() * out.angles);
  for (std::size_t b = 0; b < out.bins.size(); ++b) {
    if (out.bins[b] >= spec.bins()) {
      throw ArgumentError("bin " + std::to_string(out.bins[b]) + " out of range");
    }
    for (std::size_t i = 0; i < out.angles; ++i) {
      steer[b * out.angles + i] = steering(out.bins[b], pair.tau, axis.angles()[i], spec.n_fft());
    }
  }
  for (std::size_t t = 0; t < out.frames; ++t) {
    const auto xi = spec.frame(pair.i, t);
    const auto xj = spec.frame(pair.j, t);
    for (std::size_t b = 0; b < out.bins.size(); ++b) {
      const std::complex<double> c = phat(xi[out.bins[b]], xj[out.bins[b]]);
      double* dst = out.values.data() + (t * out.bins.size() + b) * out.angles;
      const std::complex<double>* s = steer.data() + b * out.angles;
      for (std::size_t i = 0; i < out.angles; ++i) {
        dst[i] = c.real() * s[i].real() - c.imag() * s[i].imag();
      }
    }
  }
  return out;
}

LocalSpectrum local_spectrum(const Spectrogram& spec, const MicPair& pair, const AoaAxis& axis) {
  const auto bins = analysis_bins(spec.n_fft(), spec.fs());
  return local_spectrum(spec, pair, axis, bins);
}

GridSpectra interpolate_to_grid(const LocalSpectrum& local, const AoaTable& table,
                                const AoaAxis& axis) {
  if (local.angles != axis.size()) {
    throw ArgumentError("local spectrum has " + std::to_string(local.angles) +
                        " angles but the axis has " + std::to_string(axis.size()));
  }
  GridSpectra out;
  out.frames = local.frames;
  out.bins = local.bins.size();
  out.points = table.alpha_deg.size();
  out.values.resize(out.frames * out.bins * out.points);

  std::vector<AoaAxis::Bracket> brackets;
  brackets.reserve(out.points);
  for (double a : table.alpha_deg) brackets.push_back(axis.bracket(a));

  for (std::size_t t = 0; t < out.frames; ++t) {
    for (std::size_t b = 0; b < out.bins; ++b) {
      const double* v = local.values.data() + (t * out.bins + b) * local.angles;
      double* dst = out.values.data() + (t * out.bins + b) * out.points;
      for (std::size_t g = 0; g < out.points; ++g) {
        const auto [idx, w] = brackets[g];
        if (w == 0.0) {
          dst[g] = v[idx];
        } else if (w == 1.0) {
          dst[g] = v[idx + 1];
        } else {
          dst[g] = (1.0 - w) * v[idx] + w * v[idx + 1];
        }
      }
    }
  }
  return out;
}

}  // namespace srploc
