// SPDX-License-Identifier: Apache-2.0
#include "srploc/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "srploc/error.hpp"

namespace srploc {

namespace {
// FFTW planning touches global state.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Impl {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
    fftw_free(real);
    fftw_free(spec);
  }
};

RealFft::RealFft(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n < 2) throw ArgumentError("FFT length must be at least 2");
  impl_->real = fftw_alloc_real(n);
  impl_->spec = fftw_alloc_complex(n / 2 + 1);
  const int len = static_cast<int>(n);
  std::lock_guard lock(planner_mutex());
  impl_->fwd = fftw_plan_dft_r2c_1d(len, impl_->real, impl_->spec, FFTW_ESTIMATE);
  impl_->inv = fftw_plan_dft_c2r_1d(len, impl_->spec, impl_->real, FFTW_ESTIMATE);
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  std::copy(in.begin(), in.end(), impl_->real);
  fftw_execute(impl_->fwd);
  const std::size_t nb = bins();
  for (std::size_t k = 0; k < nb; ++k) out[k] = {impl_->spec[k][0], impl_->spec[k][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  const std::size_t nb = bins();
  for (std::size_t k = 0; k < nb; ++k) {
    impl_->spec[k][0] = in[k].real();
    impl_->spec[k][1] = in[k].imag();
  }
  // c2r destroys its input; the copy above keeps `in` intact.
  fftw_execute(impl_->inv);
  std::copy(impl_->real, impl_->real + n_, out.begin());
}

}  // namespace srploc
