#pragma once

// Thin FFTW wrappers. Forward transforms are unnormalised; inverse
// transforms divide by the number of points.

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace lieavg::spectral {

using Complex = std::complex<double>;

/// Real-to-complex DFT of length K; returns K/2 + 1 coefficients.
std::vector<Complex> rfft(std::span<const double> x);
/// Inverse of rfft for a real signal of length K.
std::vector<double> irfft(std::span<const Complex> c, int K);

/// Cached 2D real transforms for an N x N row-major grid. One instance per
/// thread (see workspace()); planning is serialised internally.
class Fft2d {
 public:
  explicit Fft2d(int N);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  int size() const { return N_; }
  int half() const { return N_ / 2 + 1; }

  /// N*N reals -> N*(N/2+1) coefficients, index [i * half() + j].
  void forward(std::span<const double> in, std::span<Complex> out);
  /// Inverse including the 1/N^2 factor.
  void inverse(std::span<const Complex> in, std::span<double> out);

 private:
  int N_;
  double* real_;
  void* cplx_;
  void* fwd_;
  void* inv_;
};

/// Per-thread cached transform for grid size N.
Fft2d& workspace(int N);

}  // namespace lieavg::spectral
