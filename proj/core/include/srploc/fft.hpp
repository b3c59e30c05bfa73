// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace srploc {

// Real-input FFT of a fixed length backed by FFTW. Instances are not
// thread-safe; use one per worker. Plans use FFTW_ESTIMATE so results are
// reproducible run to run.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  // in.size() == size(), out.size() == bins().
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  // Unnormalized inverse: in.size() == bins(), out.size() == size().
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace srploc
