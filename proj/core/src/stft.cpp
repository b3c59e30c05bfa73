// SPDX-License-Identifier: Apache-2.0
#include "srploc/stft.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "srploc/error.hpp"
#include "srploc/geometry.hpp"

namespace srploc {

void SignalBlock::validate() const {
  if (!(fs > 0.0)) throw ArgumentError("sampling rate must be positive");
  if (channels.empty()) throw ArgumentError("signal has no channels");
  const std::size_t len = channels.front().size();
  for (std::size_t c = 1; c < channels.size(); ++c) {
    if (channels[c].size() != len) {
      throw ArgumentError("channel " + std::to_string(c) + " has " +
                          std::to_string(channels[c].size()) + " samples, expected " +
                          std::to_string(len));
    }
  }
}

Spectrogram::Spectrogram(std::size_t channels, std::size_t frames, std::size_t n_fft,
                         std::size_t hop, double fs)
    : channels_(channels),
      frames_(frames),
      n_fft_(n_fft),
      hop_(hop),
      fs_(fs),
      values_(channels * frames * (n_fft / 2 + 1)),
      frame_times_(frames, 0.0) {}

std::vector<double> sine_window(std::size_t n) {
  if (n < 2 || n % 2 != 0) {
    throw ArgumentError("sine window length must be even and >= 2, got " + std::to_string(n));
  }
  std::vector<double> w(n);
  const double step = kPi / static_cast<double>(n);
  for (std::size_t m = 0; m < n; ++m) w[m] = std::sin(step * (static_cast<double>(m) + 0.5));
  return w;
}

std::size_t frame_count(std::size_t length, std::size_t n_fft, std::size_t hop) {
  if (length < n_fft) return 0;
  return (length - n_fft) / hop + 1;
}

StftAnalyzer::StftAnalyzer(std::size_t n_fft, std::size_t hop)
    : n_fft_(n_fft), hop_(hop), window_(sine_window(n_fft)), scratch_(n_fft), fft_(n_fft) {
  if (hop == 0) throw ArgumentError("STFT hop must be positive");
}

Spectrogram StftAnalyzer::analyze(const SignalBlock& block) {
  block.validate();
  const std::size_t len = block.length();
  if (len < n_fft_) {
    throw ArgumentError("block of " + std::to_string(len) + " samples is shorter than the " +
                        std::to_string(n_fft_) +
                        "-point FFT frame; pad the signal or skip this block");
  }
  const std::size_t frames = frame_count(len, n_fft_, hop_);
  Spectrogram spec(block.channel_count(), frames, n_fft_, hop_, block.fs);
  for (std::size_t t = 0; t < frames; ++t) {
    const double center = static_cast<double>(t * hop_) + static_cast<double>(n_fft_) / 2.0;
    spec.frame_times()[t] = block.start_time + center / block.fs;
  }
  for (std::size_t c = 0; c < block.channel_count(); ++c) {
    const std::vector<double>& x = block.channels[c];
    for (std::size_t t = 0; t < frames; ++t) {
      const double* src = x.data() + t * hop_;
      for (std::size_t m = 0; m < n_fft_; ++m) scratch_[m] = src[m] * window_[m];
      fft_.forward(scratch_, spec.frame(c, t));
    }
  }
  return spec;
}

Spectrogram stft(const SignalBlock& block, std::size_t n_fft, std::size_t hop) {
  StftAnalyzer analyzer(n_fft, hop);
  return analyzer.analyze(block);
}

std::vector<double> antialias_filter(std::size_t factor) {
  if (factor < 1) throw ArgumentError("decimation factor must be >= 1");
  if (factor == 1) return {1.0};
  // Kaiser design for 65 dB (5 dB margin over the 60 dB requirement).
  constexpr double kAttenuationDb = 65.0;
  const double beta = 0.1102 * (kAttenuationDb - 8.7);
  const double d = static_cast<double>(factor);
  const double cutoff = 0.45 / d;      // cycles/sample at the input rate
  const double transition = 0.1 / d;   // 0.4 .. 0.5 of the output rate
  auto taps = static_cast<std::size_t>(
      std::ceil((kAttenuationDb - 8.0) / (2.285 * 2.0 * kPi * transition)));
  if (taps % 2 == 0) ++taps;
  const double half = static_cast<double>(taps - 1) / 2.0;
  const double i0_beta = std::cyl_bessel_i(0.0, beta);
  std::vector<double> h(taps);
  double sum = 0.0;
  for (std::size_t k = 0; k < taps; ++k) {
    const double n = static_cast<double>(k) - half;
    const double sinc = n == 0.0 ? 2.0 * cutoff : std::sin(2.0 * kPi * cutoff * n) / (kPi * n);
    const double r = n / half;
    const double win = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
    h[k] = sinc * win;
    sum += h[k];
  }
  for (double& v : h) v /= sum;
  return h;
}

SignalBlock decimate(const SignalBlock& input, double fs_out) {
  input.validate();
  if (!(fs_out > 0.0)) throw ArgumentError("target sampling rate must be positive");
  const double ratio = input.fs / fs_out;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
    throw UnsupportedRateError("cannot decimate from " + std::to_string(input.fs) + " Hz to " +
                               std::to_string(fs_out) +
                               " Hz: the input rate must be an integer multiple of the target rate");
  }
  const auto factor = static_cast<std::size_t>(rounded);
  if (factor == 1) return input;

  const std::vector<double> h = antialias_filter(factor);
  const auto half = static_cast<std::ptrdiff_t>(h.size() / 2);
  const std::size_t len_in = input.length();
  const std::size_t len_out = (len_in + factor - 1) / factor;

  SignalBlock out;
  out.fs = fs_out;
  out.start_time = input.start_time;
  out.channels.resize(input.channel_count());
  for (std::size_t c = 0; c < input.channel_count(); ++c) {
    const std::vector<double>& x = input.channels[c];
    std::vector<double>& y = out.channels[c];
    y.resize(len_out);
    const auto n_in = static_cast<std::ptrdiff_t>(len_in);
    for (std::size_t m = 0; m < len_out; ++m) {
      const auto center = static_cast<std::ptrdiff_t>(m * factor);
      const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, center - half);
      const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n_in - 1, center + half);
      double acc = 0.0;
      for (std::ptrdiff_t n = lo; n <= hi; ++n) acc += h[static_cast<std::size_t>(n - center + half)] * x[static_cast<std::size_t>(n)];
      y[m] = acc;
    }
  }
  return out;
}

SignalBlock extract_block(const SignalBlock& signal, std::size_t start, std::size_t length) {
  if (start + length > signal.length()) {
    throw ArgumentError("block [" + std::to_string(start) + ", " + std::to_string(start + length) +
                        ") exceeds signal length " + std::to_string(signal.length()));
  }
  SignalBlock block;
  block.fs = signal.fs;
  block.start_time = signal.start_time + static_cast<double>(start) / signal.fs;
  block.channels.reserve(signal.channel_count());
  for (const auto& ch : signal.channels) {
    block.channels.emplace_back(ch.begin() + static_cast<std::ptrdiff_t>(start),
                                ch.begin() + static_cast<std::ptrdiff_t>(start + length));
  }
  return block;
}

}  // namespace srploc
