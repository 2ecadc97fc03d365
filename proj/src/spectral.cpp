#include "lieavg/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace lieavg::spectral {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

std::vector<Complex> rfft(std::span<const double> x) {
  const int K = static_cast<int>(x.size());
  if (K == 0) return {};
  std::vector<double> in(x.begin(), x.end());
  std::vector<Complex> out(static_cast<std::size_t>(K / 2 + 1));
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(K, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> irfft(std::span<const Complex> c, int K) {
  if (static_cast<int>(c.size()) != K / 2 + 1) throw std::invalid_argument("irfft: size mismatch");
  // c2r destroys its input.
  std::vector<Complex> in(c.begin(), c.end());
  std::vector<double> out(static_cast<std::size_t>(K));
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_c2r_1d(K, reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  for (double& v : out) v /= K;
  return out;
}

Fft2d::Fft2d(int N) : N_(N) {
  if (N < 2) throw std::invalid_argument("Fft2d: N must be >= 2");
  std::lock_guard lock(planner_mutex());
  real_ = fftw_alloc_real(static_cast<std::size_t>(N) * N);
  auto* c = fftw_alloc_complex(static_cast<std::size_t>(N) * (N / 2 + 1));
  cplx_ = c;
  fwd_ = fftw_plan_dft_r2c_2d(N, N, real_, c, FFTW_ESTIMATE);
  inv_ = fftw_plan_dft_c2r_2d(N, N, c, real_, FFTW_ESTIMATE);
}

Fft2d::~Fft2d() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(inv_));
  fftw_free(real_);
  fftw_free(cplx_);
}

void Fft2d::forward(std::span<const double> in, std::span<Complex> out) {
  std::copy(in.begin(), in.end(), real_);
  fftw_execute(static_cast<fftw_plan>(fwd_));
  const auto* c = reinterpret_cast<const Complex*>(cplx_);
  std::copy(c, c + out.size(), out.begin());
}

void Fft2d::inverse(std::span<const Complex> in, std::span<double> out) {
  auto* c = reinterpret_cast<Complex*>(cplx_);
  std::copy(in.begin(), in.end(), c);
  fftw_execute(static_cast<fftw_plan>(inv_));
  const double scale = 1.0 / (static_cast<double>(N_) * N_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = real_[i] * scale;
}

Fft2d& workspace(int N) {
  thread_local std::map<int, std::unique_ptr<Fft2d>> cache;
  auto& slot = cache[N];
  if (!slot) slot = std::make_unique<Fft2d>(N);
  return *slot;
}

}  // namespace lieavg::spectral
