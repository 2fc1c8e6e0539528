#pragma once

#include <complex>
#include <memory>
#include <span>

namespace fraclat::fft {

using cplx = std::complex<double>;

// Thin FFTW wrappers. Each object owns aligned work buffers, so a single
// object must not be used from two threads at once; separate objects are
// independent. Transforms are unnormalized (inverse(forward(x)) = n x).
class RealFFT {
 public:
  explicit RealFFT(int n);
  ~RealFFT();
  RealFFT(const RealFFT&) = delete;
  RealFFT& operator=(const RealFFT&) = delete;

  int size() const { return n_; }
  int spectrum_size() const { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<cplx> out);
  void inverse(std::span<const cplx> in, std::span<double> out);

 private:
  struct Impl;
  int n_;
  std::unique_ptr<Impl> impl_;
};

class ComplexFFT {
 public:
  explicit ComplexFFT(int n);
  ~ComplexFFT();
  ComplexFFT(const ComplexFFT&) = delete;
  ComplexFFT& operator=(const ComplexFFT&) = delete;

  int size() const { return n_; }

  void forward(std::span<const cplx> in, std::span<cplx> out);
  void inverse(std::span<const cplx> in, std::span<cplx> out);

 private:
  struct Impl;
  int n_;
  std::unique_ptr<Impl> impl_;
};

bool is_power_of_two(long n);

}  // namespace fraclat::fft
