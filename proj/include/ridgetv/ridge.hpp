#pragma once

// Truncated-power ridge networks f(x) = sum_k alpha_k sigma_m(n_k . x - t_k)
// and their coefficient-level diagnostics.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ridgetv/xi_geometry.hpp"

namespace ridgetv {

/// max(0, s)^{m-1} / (m-1)!. Throws ValidationError for m < 2.
double sigma_m(int m, double s);
/// d/ds sigma_m(s): sigma_{m-1}(s) for m >= 3, the Heaviside step (0 at s = 0)
/// for m = 2.
double sigma_m_derivative(int m, double s);

/// sigma_m(n . x - t).
double rho_m(int m, std::span<const double> x, const XiPoint& p);

/// Smoothing weight beta on Xi.
class BetaSpec {
 public:
  enum class Kind { DefaultRational, Custom };
  using Fn = std::function<double(const XiPoint&)>;

  /// beta(n, t) = 1 / (1 + |t|^m).
  static BetaSpec default_rational(int m);
  /// A user-supplied beta. Positivity, involution symmetry and the decay
  /// (1+|t|)^{m-1} beta -> 0 are checked on a sample grid in dimension d;
  /// ValidationError if any fails.
  static BetaSpec custom(int m, int d, std::string name, Fn fn);

  int m() const { return m_; }
  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  double operator()(const XiPoint& p) const;
  /// Partial derivative in t.
  double dt(const XiPoint& p) const;
  /// Euclidean gradient in n (zero for default_rational).
  std::vector<double> dn(const XiPoint& p) const;

 private:
  BetaSpec(int m, Kind kind, std::string name, Fn fn)
      : m_(m), kind_(kind), name_(std::move(name)), fn_(std::move(fn)) {}

  int m_;
  Kind kind_;
  std::string name_;
  Fn fn_;
};

inline double beta_eval(const BetaSpec& b, const XiPoint& p) { return b(p); }

struct Neuron {
  double alpha = 0.0;
  XiPoint point;
};

class RidgeNetwork {
 public:
  /// Throws ValidationError for m < 2, beta.m() != m, zero alpha, or a
  /// neuron of the wrong dimension.
  RidgeNetwork(int m, int d, std::vector<Neuron> neurons, BetaSpec beta);
  RidgeNetwork(int m, int d) : RidgeNetwork(m, d, {}, BetaSpec::default_rational(m)) {}

  int m() const { return m_; }
  int dim() const { return d_; }
  const std::vector<Neuron>& neurons() const { return neurons_; }
  const BetaSpec& beta() const { return beta_; }
  std::size_t size() const { return neurons_.size(); }

  double operator()(std::span<const double> x) const;
  /// One value per row of X (N x d).
  Eigen::VectorXd eval_batch(const Eigen::MatrixXd& X) const;

 private:
  int m_;
  int d_;
  std::vector<Neuron> neurons_;
  BetaSpec beta_;
};

inline double eval_network(const RidgeNetwork& net, std::span<const double> x) { return net(x); }

/// alpha_k = a_k beta(theta_k).
RidgeNetwork network_from_measure(const AtomicMeasure& mu, int m, const BetaSpec& beta);
/// a_k = alpha_k / beta(theta_k).
AtomicMeasure measure_from_network(const RidgeNetwork& net);

enum class PathNormMode { Cylinder, Projective };

/// Neurons moved to the canonical section via
/// sigma_m(s) = (-1)^m sigma_m(-s) + s^{m-1}/(m-1)!, then merged. `network`
/// differs from the input by the polynomial `remainder`.
struct ProjectiveForm {
  RidgeNetwork network;
  RidgeNetwork remainder_source;  // the flipped neurons, as given
  /// Evaluates sum over flipped neurons of alpha (n.x - t)^{m-1}/(m-1)!.
  double remainder(std::span<const double> x) const;
};
ProjectiveForm projective_form(const RidgeNetwork& net);

/// Sum |alpha_k| / beta(theta_k). Cylinder mode merges neurons that coincide
/// on Xi; projective mode first rewrites onto the canonical section.
double path_norm(const RidgeNetwork& net, PathNormMode mode = PathNormMode::Cylinder);

/// (sum |alpha_k| / (m-1)!) (R + max |t_k|)^{m-1}: bounds |f(x)| for |x| <= R.
double growth_bound(const RidgeNetwork& net, double R);

/// Exponent tuples of all monomials in d variables of total degree <= deg,
/// graded by degree.
std::vector<std::vector<int>> monomial_exponents(int d, int deg);

struct PolynomialFit {
  bool is_poly = false;
  int degree = -1;        // lowest degree that fits; -1 when none does
  double residual = 0.0;  // relative residual at `degree` (or at m-1)
  std::vector<std::vector<int>> exponents;
  std::vector<double> coefficients;

  double operator()(std::span<const double> x) const;
};

/// Least-squares fit of the network by polynomials of total degree <= m-1 on
/// a 7-per-axis grid over [-2,2]^d plus 50 seeded random points.
PolynomialFit polynomial_part_check(const RidgeNetwork& net, double tol = Tolerances{}.polynomial);

}  // namespace ridgetv
