#include "spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "ridgetv/common.hpp"

namespace ridgetv::spectral {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

std::mutex g_plan_mutex;

// Plans are created once per length and shared; fftw_execute_dft_* with
// fresh fftw_malloc'd buffers is thread-safe.
const Plans& plans_for(std::size_t n) {
  static std::map<std::size_t, Plans> cache;
  std::lock_guard lock(g_plan_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto* r = static_cast<double*>(fftw_malloc(sizeof(double) * n));
  auto* c = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
  Plans p;
  p.forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), r, c, FFTW_ESTIMATE);
  p.backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), c, r, FFTW_ESTIMATE);
  fftw_free(r);
  fftw_free(c);
  return cache.emplace(n, p).first->second;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

std::complex<double> derivative(double omega, int k) {
  std::complex<double> r(1.0, 0.0);
  const std::complex<double> io(0.0, omega);
  for (int j = 0; j < k; ++j) r *= io;
  return r;
}

std::complex<double> hilbert(double omega) {
  if (omega > 0.0) return {0.0, -1.0};
  if (omega < 0.0) return {0.0, 1.0};
  return {0.0, 0.0};
}

std::vector<double> apply(std::span<const double> in, double h, const Multiplier& mult, int pad_factor) {
  const std::size_t n = in.size();
  if (n < 2) throw ValidationError("spectral::apply: profile needs at least 2 samples");
  if (!(h > 0.0)) throw ValidationError("spectral::apply: spacing must be positive");
  const std::size_t M = next_pow2(static_cast<std::size_t>(pad_factor) * n);
  const Plans& plans = plans_for(M);

  std::unique_ptr<double, FftwFree> buf(static_cast<double*>(fftw_malloc(sizeof(double) * M)));
  std::unique_ptr<fftw_complex, FftwFree> spec(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (M / 2 + 1))));
  double* x = buf.get();
  for (std::size_t i = 0; i < n; ++i) x[i] = in[i];
  const std::size_t pad = M - n;
  const std::size_t half = pad / 2;
  const double right = in[n - 1];
  const double left = in[0];
  for (std::size_t j = 0; j < half; ++j) {
    const double s = static_cast<double>(j + 1) / static_cast<double>(half + 1);
    x[n + j] = right * 0.5 * (1.0 + std::cos(kPi * s));
  }
  const std::size_t rest = pad - half;
  for (std::size_t j = 0; j < rest; ++j) {
    const double s = static_cast<double>(j + 1) / static_cast<double>(rest + 1);
    x[n + half + j] = left * 0.5 * (1.0 - std::cos(kPi * s));
  }

  fftw_execute_dft_r2c(plans.forward, x, spec.get());
  const double dw = 2.0 * kPi / (static_cast<double>(M) * h);
  for (std::size_t k = 0; k <= M / 2; ++k) {
    std::complex<double> mk = mult(dw * static_cast<double>(k));
    if (k == M / 2) mk = {mk.real(), 0.0};
    const std::complex<double> v(spec.get()[k][0], spec.get()[k][1]);
    const std::complex<double> r = v * mk;
    spec.get()[k][0] = r.real();
    spec.get()[k][1] = r.imag();
  }
  fftw_execute_dft_c2r(plans.backward, spec.get(), x);
  std::vector<double> out(n);
  const double scale = 1.0 / static_cast<double>(M);
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * scale;
  return out;
}

}  // namespace ridgetv::spectral
