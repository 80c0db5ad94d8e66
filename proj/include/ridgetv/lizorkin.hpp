#pragma once

// Approximate Lizorkin test functions: Schwartz functions with a certified
// finite number of vanishing moments, on R^d and on Xi.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ridgetv/common.hpp"
#include "ridgetv/xi_geometry.hpp"

namespace ridgetv {

/// Probabilists' Hermite polynomial He_n(x).
double hermite_he(int n, double x);

/// d^p/dt^p exp(-t^2 / (2 sigma^2)).
double gaussian_derivative(int p, double sigma, double t);

/// phi = Delta^k G with G(x) = exp(-|x - c|^2 / (2 sigma^2)); k = 0 is the
/// plain Gaussian.
class TestFunctionRd {
 public:
  TestFunctionRd(int d, int k, double sigma, std::vector<double> center);

  int dim() const { return d_; }
  int laplacian_order() const { return k_; }
  int moment_order() const { return 2 * k_; }
  double sigma() const { return sigma_; }
  const std::vector<double>& center() const { return center_; }
  std::string tag() const;

  double operator()(std::span<const double> x) const;
  /// Closed-form Radon transform (sigma sqrt(2 pi))^{d-1} d^{2k}/dt^{2k}
  /// exp(-(t - n.c)^2 / (2 sigma^2)).
  double radon(const UnitVector& n, double t) const;
  /// Radius of the ball outside which |phi| is below 1e-12 of its peak scale.
  double support_radius() const;

 private:
  int d_;
  int k_;
  double sigma_;
  std::vector<double> center_;
  std::vector<std::vector<int>> laplace_terms_;  // exponent tuples with |beta| = k
  std::vector<double> laplace_coeffs_;           // multinomial k! / prod beta_i!
};

/// Delta^k of a Gaussian. Vanishing moments up to total degree 2k-1 are
/// certified at construction when `certify` is set (MomentError otherwise).
TestFunctionRd make_lizorkin_rd(int d, int k, double sigma = 1.0, std::vector<double> center = {},
                                bool certify = true);

/// a(n) = sum_j coeff_j n^{exponents_j}.
struct AngularFactor {
  struct Term {
    double coeff;
    std::vector<int> exponents;
  };
  std::vector<Term> terms;

  static AngularFactor constant(int d, double c = 1.0);
  static AngularFactor coordinate(int d, int i, double c = 1.0);

  double operator()(const UnitVector& n) const;
  std::string describe() const;
};

/// psi(n, t) = (a(n) h(t) + s a(-n) h(-t)) / 2, h(t) = g^{(p)}(t - shift),
/// s = +1 for even and -1 for odd parity.
class TestFunctionXi {
 public:
  TestFunctionXi(Parity parity, int p, double sigma, double shift, AngularFactor angular);

  Parity parity() const { return parity_; }
  int moment_order() const { return p_; }
  double sigma() const { return sigma_; }
  double shift() const { return shift_; }
  const AngularFactor& angular() const { return angular_; }
  std::string tag() const;

  double operator()(const UnitVector& n, double t) const { return dt(n, t, 0); }
  double operator()(const XiPoint& q) const { return dt(q.n, q.t, 0); }
  /// j-th t-derivative, in closed form.
  double dt(const UnitVector& n, double t, int j) const;
  /// |t| beyond which every t-derivative of order <= 8 is negligible.
  double support_halfwidth() const;

 private:
  Parity parity_;
  int p_;
  double sigma_;
  double shift_;
  AngularFactor angular_;
};

/// Throws DegenerateError when the symmetrization annihilates psi and
/// ValidationError for p < 1 or parity none.
TestFunctionXi make_lizorkin_xi(Parity parity, int p, double sigma = 1.0, double shift = 0.0,
                                AngularFactor angular = {});

/// `count` test functions of the parity matching (-1)^m and moment order
/// p >= m, with pseudo-random shifts in [-shift_range, shift_range] and
/// angular factors; deterministic in `seed`.
std::vector<TestFunctionXi> make_lizorkin_xi_family(int d, int m, int count, std::uint64_t seed,
                                                    double shift_range = 1.0, double sigma = 0.5);

struct MomentEntry {
  int order = 0;            // total degree
  std::string label;        // monomial or direction label
  double value = 0.0;       // the moment
  double scale = 0.0;       // integral of |monomial * fn|
  double residual = 0.0;    // |value| / scale
  bool pass = false;
};

struct MomentTable {
  std::vector<MomentEntry> entries;
  double tol = 0.0;
  /// Largest p such that every moment of order < p passes.
  int vanishing_order() const;
  bool all_pass_below(int order) const;
};

/// Moments of total degree 0..max_order by tensor trapezoid quadrature.
MomentTable moment_check(const TestFunctionRd& fn, int max_order, double tol = Tolerances{}.moment);
/// t-moments 0..max_order for each direction in `dirs`.
MomentTable moment_check(const TestFunctionXi& fn, int max_order, std::span<const UnitVector> dirs,
                         double tol = Tolerances{}.moment);
/// t-moments 0..max_order of a 1-D profile on [center - halfwidth, center + halfwidth].
MomentTable moment_check(const std::function<double(double)>& profile, int max_order, double center,
                         double halfwidth, double tol = Tolerances{}.moment);

}  // namespace ridgetv
