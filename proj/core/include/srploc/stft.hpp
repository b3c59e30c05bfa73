// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "srploc/fft.hpp"

namespace srploc {

// Equal-length real channels sampled at fs. start_time is the time of the
// first sample in seconds.
struct SignalBlock {
  std::vector<std::vector<double>> channels;
  double fs = 0.0;
  double start_time = 0.0;

  std::size_t channel_count() const { return channels.size(); }
  std::size_t length() const { return channels.empty() ? 0 : channels.front().size(); }

  // Throws ArgumentError on ragged channels or non-positive fs.
  void validate() const;
};

// Complex STFT values laid out [channel][frame][bin], non-negative bins only.
class Spectrogram {
 public:
  Spectrogram() = default;
  Spectrogram(std::size_t channels, std::size_t frames, std::size_t n_fft, std::size_t hop,
              double fs);

  std::size_t channels() const { return channels_; }
  std::size_t frames() const { return frames_; }
  std::size_t bins() const { return n_fft_ / 2 + 1; }
  std::size_t n_fft() const { return n_fft_; }
  std::size_t hop() const { return hop_; }
  double fs() const { return fs_; }

  std::span<std::complex<double>> frame(std::size_t ch, std::size_t t) {
    return {values_.data() + offset(ch, t), bins()};
  }
  std::span<const std::complex<double>> frame(std::size_t ch, std::size_t t) const {
    return {values_.data() + offset(ch, t), bins()};
  }
  const std::complex<double>& at(std::size_t ch, std::size_t t, std::size_t f) const {
    return values_[offset(ch, t) + f];
  }

  // Center time of each frame, seconds.
  std::vector<double>& frame_times() { return frame_times_; }
  const std::vector<double>& frame_times() const { return frame_times_; }

 private:
  std::size_t offset(std::size_t ch, std::size_t t) const { return (ch * frames_ + t) * bins(); }

  std::size_t channels_ = 0;
  std::size_t frames_ = 0;
  std::size_t n_fft_ = 0;
  std::size_t hop_ = 0;
  double fs_ = 0.0;
  std::vector<std::complex<double>> values_;
  std::vector<double> frame_times_;
};

// w[m] = sin(pi (m + 0.5) / n). Satisfies w[m]^2 + w[m + n/2]^2 = 1, so it
// is power-complementary at 50% overlap. n must be even and >= 2.
std::vector<double> sine_window(std::size_t n);

// Number of full frames in a signal of `length` samples; trailing partial
// frames are dropped. Zero when length < n_fft.
std::size_t frame_count(std::size_t length, std::size_t n_fft, std::size_t hop);

// Reusable analyzer; owns its FFT plan and window. Not thread-safe.
class StftAnalyzer {
 public:
  StftAnalyzer(std::size_t n_fft, std::size_t hop);

  std::size_t n_fft() const { return n_fft_; }
  std::size_t hop() const { return hop_; }

  // Throws ArgumentError if the block is shorter than n_fft.
  Spectrogram analyze(const SignalBlock& block);

 private:
  std::size_t n_fft_;
  std::size_t hop_;
  std::vector<double> window_;
  std::vector<double> scratch_;
  RealFft fft_;
};

Spectrogram stft(const SignalBlock& block, std::size_t n_fft, std::size_t hop);
inline Spectrogram stft(const SignalBlock& block, std::size_t n_fft) {
  return stft(block, n_fft, n_fft / 2);
}

// Linear-phase Kaiser-windowed sinc low-pass used before decimation by
// `factor`: -6 dB point at 0.45 fs_out, stopband from 0.5 fs_out with at
// least 60 dB attenuation. Odd length, symmetric, unit DC gain.
std::vector<double> antialias_filter(std::size_t factor);

// Low-pass filters and keeps every factor-th sample. The filter is applied
// zero-phase (centered), so output sample m is aligned with input sample
// m * factor. fs_in must be an integer multiple of fs_out.
SignalBlock decimate(const SignalBlock& input, double fs_out);

// Copies samples [start, start + length) of every channel. start_time is
// advanced accordingly.
SignalBlock extract_block(const SignalBlock& signal, std::size_t start, std::size_t length);

}  // namespace srploc
