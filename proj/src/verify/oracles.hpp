#pragma once

// Reference computations used to check the library. None of these call the
// routine they are meant to check.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ridgetv/ridge.hpp"
#include "ridgetv/solver.hpp"

namespace ridgetv::oracle {

/// s sqrt(2 pi) exp(-t^2 / (2 s^2)): line integrals of exp(-|x|^2 / (2 s^2)) in R^2.
double gaussian_line_integral(double s, double t);

/// int_{S^{d-1}} (n . x)^2 dn = |S^{d-1}| |x|^2 / d.
double sphere_quadratic_moment(std::span<const double> x);

/// (1/pi) p.v. int f(s) / (x - s) ds, as int_0^U (f(x-u) - f(x+u)) / u du / pi
/// with adaptive Gauss-Kronrod.
double pv_hilbert(const std::function<double(double)>& f, double x, double U = 60.0);

/// int t^j g^{(p)}(t) dt for g = exp(-t^2 / (2 sigma^2)), by integration by parts.
double hermite_moment(int p, int j, double sigma);

/// Real part of int phi(x) e^{-i w.x} dx over the box [-R, R]^2 by trapezoid.
double fourier_transform_2d(const std::function<double(std::span<const double>)>& phi, double w1, double w2,
                            double R = 9.0, double h = 0.05);

/// argmin_w (phi w - y)^2 + lam |w| (one sample, one feature).
double soft_threshold_single(double phi, double y, double lam);

/// Network value with the neurons summed in reverse order.
double reversed_sum_eval(const RidgeNetwork& net, std::span<const double> x);

struct LpResult {
  bool feasible = false;
  Eigen::VectorXd x;
  double objective = 0.0;
};

/// min sum |a| subject to A a = b by a dense two-phase simplex with Bland's
/// rule on the split a = u - v, u, v >= 0.
LpResult basis_pursuit(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

/// Three planted neurons with hyperplanes crossing [-1,1]^2, m = 2.
RidgeNetwork planted_teacher();

/// N points uniform on [-1,1]^d with targets teacher(x).
TrainingSet sample_teacher(const RidgeNetwork& teacher, int N, std::uint64_t seed);

}  // namespace ridgetv::oracle
