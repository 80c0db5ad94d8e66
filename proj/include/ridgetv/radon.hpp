#pragma once

// Radon transform, back-projection and the t-operators acting on sinograms,
// plus the weak-form pairing checks built on them.

#include <functional>
#include <span>
#include <vector>

#include "ridgetv/common.hpp"
#include "ridgetv/lizorkin.hpp"
#include "ridgetv/ridge.hpp"
#include "ridgetv/xi_geometry.hpp"

namespace ridgetv {

/// Directions on S^{d-1} with quadrature weights summing to |S^{d-1}|.
struct DirectionGrid {
  int d = 2;
  std::vector<UnitVector> dirs;
  std::vector<double> weights;
  /// Index of -dirs[j] in the grid, or -1.
  std::vector<int> antipode;
  /// d = 2 angles in [0, 2 pi); empty otherwise.
  std::vector<double> angles;

  std::size_t size() const { return dirs.size(); }

  /// theta_j = 2 pi j / N; for even N the second half is the exact negation
  /// of the first.
  static DirectionGrid uniform_circle(int n);
  /// Fibonacci spiral on the upper hemisphere (N/2 points, N even) together
  /// with the negations, equal weights 4 pi / N.
  static DirectionGrid fibonacci_sphere(int n);
  /// Default for dimension d: 256 circle points (d = 2), 512 sphere points (d = 3).
  static DirectionGrid for_dimension(int d, int n = 0);
  /// A single direction with weight 1 (for per-direction profiles).
  static DirectionGrid single(const UnitVector& n);
};

/// Symmetric uniform grid t_i = (i - (n-1)/2) h on [-T, T].
struct TGrid {
  double h = 0.05;
  int n = 0;

  /// Smallest symmetric grid with spacing h covering [-T, T].
  static TGrid covering(double T, double h);
  double T() const { return 0.5 * (n - 1) * h; }
  double operator[](int i) const { return (i - 0.5 * (n - 1)) * h; }
};

struct Sinogram {
  DirectionGrid grid;
  TGrid tgrid;
  std::vector<double> values;  // direction-major: values[j * n_t + i]
  Parity parity = Parity::None;

  Sinogram() = default;
  Sinogram(DirectionGrid g, TGrid tg, Parity p = Parity::None);

  int d() const { return grid.d; }
  std::size_t n_dir() const { return grid.size(); }
  int n_t() const { return tgrid.n; }
  double& at(std::size_t j, int i) { return values[j * static_cast<std::size_t>(tgrid.n) + static_cast<std::size_t>(i)]; }
  double at(std::size_t j, int i) const { return values[j * static_cast<std::size_t>(tgrid.n) + static_cast<std::size_t>(i)]; }
  std::span<const double> profile(std::size_t j) const;
  std::span<double> profile(std::size_t j);
  /// Cubic (4-point Lagrange) interpolation in t along direction j;
  /// ExtentError outside [-T, T].
  double interpolate(std::size_t j, double t) const;
  double max_abs() const;
};

/// Samples fn on the grid.
Sinogram sample_sinogram(const std::function<double(const UnitVector&, double)>& fn, const DirectionGrid& grid,
                         const TGrid& tgrid, Parity parity = Parity::None);

/// Largest |psi(n,t) - s psi(-n,-t)| over antipodal grid pairs, s = +1 for
/// even and -1 for odd.
double parity_defect(const Sinogram& s, Parity parity);

/// Values on the uniform grid x = -L + i h, i = 0..n-1, in every axis.
struct GridFunctionRd {
  int d = 2;
  double L = 8.0;
  double h = 0.05;
  int n = 0;  // points per axis
  std::vector<double> values;  // first axis fastest

  /// Samples fn; n = round(2L/h) + 1 (h is adjusted to fit exactly).
  static GridFunctionRd sample(const std::function<double(std::span<const double>)>& fn, int d, double L,
                               double h);
  double coord(int i) const { return -L + i * h; }
  /// Tensor cubic interpolation; 0 outside the box.
  double operator()(std::span<const double> x) const;
};

struct RadonOptions {
  double L = 8.0;     // hyperplane cross-section [-L, L]^{d-1}
  double h = 0.05;    // quadrature spacing on the hyperplane
  double tail_tol = Tolerances{}.tail;
};

/// Hyperplane trapezoid quadrature of phi on every (n_j, t_i). ExtentError if
/// phi on the cross-section boundary exceeds tail_tol times max |phi|.
Sinogram radon(const std::function<double(std::span<const double>)>& phi, const DirectionGrid& grid,
               const TGrid& tgrid, const RadonOptions& opt = {});
/// Same quadrature applied to the cubic interpolant of a grid function.
Sinogram radon(const GridFunctionRd& phi, const DirectionGrid& grid, const TGrid& tgrid,
               const RadonOptions& opt = {});

/// sum_j w_j psi(n_j, n_j . x).
double dual_radon(const Sinogram& psi, std::span<const double> x);
/// One value per row of X.
std::vector<double> dual_radon(const Sinogram& psi, const std::vector<std::vector<double>>& X);

/// Per-direction FFT multiplier -i sgn(omega). ExtentError if profile edges
/// exceed tail_tol times max |psi|.
Sinogram hilbert_t(const Sinogram& psi, double tail_tol = Tolerances{}.tail);
/// k-th spectral t-derivative.
Sinogram dt_m(const Sinogram& psi, int k);
/// int_{-T}^t psi(s) ds per direction: cumulative trapezoid with
/// Euler-Maclaurin end corrections. MomentError if some profile's mean is not
/// below moment_tol times its L1 mass.
Sinogram antider_A(const Sinogram& psi, double moment_tol = Tolerances{}.moment);
std::vector<double> antider_A(std::span<const double> profile, double h, double moment_tol = Tolerances{}.moment);
/// d = 3: -d^2/dt^2; d = 2: H d/dt.
Sinogram lambda_filter(const Sinogram& psi, int d, double tail_tol = Tolerances{}.tail);
/// 1/(2 (2 pi)^{d-1}) R* Lambda^{d-1} psi at each point.
std::vector<double> fbp_invert(const Sinogram& psi, int d, const std::vector<std::vector<double>>& points);

/// Default t-grid for a box [-L, L]^d: T = L sqrt(d) + 1.
TGrid default_tgrid(int d, double L, double h_t);

struct PairingResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
};

struct PairingOptions {
  RadonOptions radon{};
  double h_t = 0.05;
  double panel = 0.5;    // Gauss-Legendre panel width in the direct integral
  double outer_h = 0.05; // trapezoid spacing of the outer variable(s)
};

/// beta(p) int sigma_m(n.x - t) phi(x) dx against (-1)^m beta(p) (A^m R phi)(n, t).
PairingResult ridge_pairing_check(int m, const XiPoint& p, const TestFunctionRd& phi, const BetaSpec& beta,
                                  const PairingOptions& opt = {});

struct GreenOptions {
  double L = 8.0;      // integration box [-L, L]^d
  double h = 0.05;     // spatial trapezoid spacing
  double h_t = 0.025;  // t spacing of the filtered sinogram
  int n_dirs = 0;      // 0: DirectionGrid::for_dimension default
  double truncation = Tolerances{}.truncation;
};

struct GreenResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
  double scale = 0.0;             // 2 (2 pi)^{d-1} sum |a beta| max |psi|
  double truncation_bound = 0.0;  // growth bound * max boundary |R* Lambda d^m psi|
};

/// lhs = (-1)^m int f_mu R*(Lambda^{d-1} d_t^m psi) over the box;
/// rhs = 2 (2 pi)^{d-1} sum over tau-atoms a beta(theta) psi(theta).
/// ParityError if psi's parity is not (-1)^m, MomentError if its moment order
/// is below m, TruncationError if the truncation bound exceeds the allowed
/// fraction of |rhs| (of `scale` when rhs = 0).
GreenResult green_identity_check(const RidgeNetwork& net, const TestFunctionXi& psi, const GreenOptions& opt = {});

}  // namespace ridgetv
