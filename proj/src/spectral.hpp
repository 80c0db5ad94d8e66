#pragma once

// FFT Fourier multipliers along a uniformly sampled 1-D profile.

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace ridgetv::spectral {

using Multiplier = std::function<std::complex<double>(double omega)>;

/// Applies `mult` to `in` (spacing h). The profile is extended to a power of
/// two >= pad_factor * n; the pad region is a Hann-shaped bridge from the right
/// edge value down to zero and back up to the left edge value, so the periodic
/// extension is continuous. At the Nyquist bin only the real part of the
/// multiplier is kept so the output stays real.
std::vector<double> apply(std::span<const double> in, double h, const Multiplier& mult, int pad_factor = 4);

std::complex<double> derivative(double omega, int k);
/// -i sgn(omega), sgn(0) = 0.
std::complex<double> hilbert(double omega);

}  // namespace ridgetv::spectral
