#include "fraclat/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

#include "fraclat/errors.hpp"

namespace fraclat::fft {

namespace {
// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

struct RealFFT::Impl {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

RealFFT::RealFFT(int n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n < 2) throw DomainError("RealFFT: size must be at least 2");
  std::lock_guard lock(planner_mutex());
  impl_->real = fftw_alloc_real(static_cast<size_t>(n));
  impl_->spec = fftw_alloc_complex(static_cast<size_t>(n / 2 + 1));
  impl_->fwd = fftw_plan_dft_r2c_1d(n, impl_->real, impl_->spec, FFTW_ESTIMATE);
  impl_->inv = fftw_plan_dft_c2r_1d(n, impl_->spec, impl_->real, FFTW_ESTIMATE);
}

RealFFT::~RealFFT() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(impl_->fwd);
  fftw_destroy_plan(impl_->inv);
  fftw_free(impl_->real);
  fftw_free(impl_->spec);
}

void RealFFT::forward(std::span<const double> in, std::span<cplx> out) {
  std::copy(in.begin(), in.begin() + n_, impl_->real);
  fftw_execute(impl_->fwd);
  std::memcpy(static_cast<void*>(out.data()), impl_->spec, sizeof(cplx) * static_cast<size_t>(n_ / 2 + 1));
}

void RealFFT::inverse(std::span<const cplx> in, std::span<double> out) {
  std::memcpy(impl_->spec, in.data(), sizeof(cplx) * static_cast<size_t>(n_ / 2 + 1));
  fftw_execute(impl_->inv);
  std::copy(impl_->real, impl_->real + n_, out.begin());
}

struct ComplexFFT::Impl {
  fftw_complex* a = nullptr;
  fftw_complex* b = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

ComplexFFT::ComplexFFT(int n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n < 1) throw DomainError("ComplexFFT: size must be positive");
  std::lock_guard lock(planner_mutex());
  impl_->a = fftw_alloc_complex(static_cast<size_t>(n));
  impl_->b = fftw_alloc_complex(static_cast<size_t>(n));
  impl_->fwd = fftw_plan_dft_1d(n, impl_->a, impl_->b, FFTW_FORWARD, FFTW_ESTIMATE);
  impl_->inv = fftw_plan_dft_1d(n, impl_->a, impl_->b, FFTW_BACKWARD, FFTW_ESTIMATE);
}

ComplexFFT::~ComplexFFT() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(impl_->fwd);
  fftw_destroy_plan(impl_->inv);
  fftw_free(impl_->a);
  fftw_free(impl_->b);
}

void ComplexFFT::forward(std::span<const cplx> in, std::span<cplx> out) {
  std::memcpy(impl_->a, in.data(), sizeof(cplx) * static_cast<size_t>(n_));
  fftw_execute(impl_->fwd);
  std::memcpy(static_cast<void*>(out.data()), impl_->b, sizeof(cplx) * static_cast<size_t>(n_));
}

void ComplexFFT::inverse(std::span<const cplx> in, std::span<cplx> out) {
  std::memcpy(impl_->a, in.data(), sizeof(cplx) * static_cast<size_t>(n_));
  fftw_execute(impl_->inv);
  std::memcpy(static_cast<void*>(out.data()), impl_->b, sizeof(cplx) * static_cast<size_t>(n_));
}

}  // namespace fraclat::fft
