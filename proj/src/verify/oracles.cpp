#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ridgetv::oracle {

double gaussian_line_integral(double s, double t) {
  return s * std::sqrt(2.0 * std::numbers::pi) * std::exp(-t * t / (2.0 * s * s));
}

double sphere_quadratic_moment(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  const int d = static_cast<int>(x.size());
  double area = 0.0;
  if (d == 2) area = 2.0 * std::numbers::pi;
  else if (d == 3) area = 4.0 * std::numbers::pi;
  else throw std::invalid_argument("sphere_quadratic_moment: d must be 2 or 3");
  return area * r2 / d;
}

double pv_hilbert(const std::function<double(double)>& f, double x, double U) {
  auto integrand = [&](double u) { return (f(x - u) - f(x + u)) / u; };
  // split so the panel near u = 0 is resolved separately from the tail
  double total = 0.0;
  const double cuts[] = {0.0, 1.0, 4.0, 12.0, U};
  for (int i = 0; i + 1 < 5; ++i) {
    if (cuts[i] >= U) break;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, cuts[i],
                                                                            std::min(cuts[i + 1], U), 20, 1e-14);
  }
  return total / std::numbers::pi;
}

double hermite_moment(int p, int j, double sigma) {
  if (j < p) return 0.0;
  if (j == p) {
    double fact = 1.0;
    for (int i = 2; i <= p; ++i) fact *= i;
    return (p % 2 ? -1.0 : 1.0) * fact * sigma * std::sqrt(2.0 * std::numbers::pi);
  }
  throw std::invalid_argument("hermite_moment: only j <= p is tabulated");
}

double fourier_transform_2d(const std::function<double(std::span<const double>)>& phi, double w1, double w2,
                            double R, double h) {
  const int n = static_cast<int>(std::lround(2.0 * R / h));
  const double step = 2.0 * R / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      double x[2] = {-R + i * step, -R + j * step};
      acc += phi(x) * std::cos(w1 * x[0] + w2 * x[1]);
    }
  }
  return acc * step * step;
}

double soft_threshold_single(double phi, double y, double lam) {
  // stationarity 2 phi (phi w - y) + lam sgn(w) = 0
  const double z = phi * y;
  const double thr = 0.5 * lam;
  if (std::abs(z) <= thr) return 0.0;
  return (z - std::copysign(thr, z)) / (phi * phi);
}

double reversed_sum_eval(const RidgeNetwork& net, std::span<const double> x) {
  double acc = 0.0;
  const auto& ns = net.neurons();
  for (auto it = ns.rbegin(); it != ns.rend(); ++it) {
    double s = -it->point.t;
    for (int i = 0; i < net.dim(); ++i) s += it->point.n[i] * x[static_cast<std::size_t>(i)];
    if (s > 0.0) {
      double v = 1.0;
      for (int k = 1; k < net.m(); ++k) v *= s / k;
      acc += it->alpha * v;
    }
  }
  return acc;
}

namespace {

struct Tableau {
  Eigen::MatrixXd T;  // rows 0..m-1 constraints, row m costs; last column rhs
  std::vector<int> basis;

  int rows() const { return static_cast<int>(basis.size()); }
  int cols() const { return static_cast<int>(T.cols()) - 1; }

  void pivot(int r, int c) {
    T.row(r) /= T(r, c);
    for (int i = 0; i < T.rows(); ++i) {
      if (i != r && T(i, c) != 0.0) T.row(i) -= T(i, c) * T.row(r);
    }
    basis[r] = c;
  }

  // Bland's rule over columns [0, ncols). Returns false when unbounded.
  bool run(int ncols) {
    const double eps = 1e-11;
    for (int iter = 0; iter < 100000; ++iter) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j) {
        if (T(rows(), j) < -eps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < rows(); ++i) {
        if (T(i, enter) > eps) {
          const double ratio = T(i, cols()) / T(i, enter);
          if (leave < 0 || ratio < best - 1e-14 || (std::abs(ratio - best) <= 1e-14 && basis[i] < basis[leave])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw std::runtime_error("basis_pursuit: simplex iteration limit");
  }
};

}  // namespace

LpResult basis_pursuit(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const int m = static_cast<int>(A.rows());
  const int k = static_cast<int>(A.cols());
  const int nz = 2 * k;         // u, v
  const int ntot = nz + m;      // plus artificials
  Tableau tab;
  tab.T = Eigen::MatrixXd::Zero(m + 1, ntot + 1);
  tab.basis.resize(m);
  for (int i = 0; i < m; ++i) {
    const double s = b[i] < 0.0 ? -1.0 : 1.0;
    tab.T.block(i, 0, 1, k) = s * A.row(i);
    tab.T.block(i, k, 1, k) = -s * A.row(i);
    tab.T(i, nz + i) = 1.0;
    tab.T(i, ntot) = s * b[i];
    tab.basis[i] = nz + i;
  }
  // phase 1: minimize the sum of artificials
  for (int i = 0; i < m; ++i) tab.T.row(m) -= tab.T.row(i);
  for (int i = 0; i < m; ++i) tab.T(m, nz + i) = 0.0;
  tab.run(ntot);
  LpResult res;
  if (-tab.T(m, ntot) > 1e-9 * std::max(1.0, b.cwiseAbs().maxCoeff())) return res;

  // drive zero-level artificials out of the basis; rows that cannot be are redundant
  std::vector<int> keep;
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] >= nz) {
      int c = -1;
      for (int j = 0; j < nz; ++j) {
        if (std::abs(tab.T(i, j)) > 1e-9) {
          c = j;
          break;
        }
      }
      if (c >= 0) tab.pivot(i, c);
      else continue;
    }
    keep.push_back(i);
  }
  Tableau p2;
  const int m2 = static_cast<int>(keep.size());
  p2.T = Eigen::MatrixXd::Zero(m2 + 1, nz + 1);
  p2.basis.resize(m2);
  for (int r = 0; r < m2; ++r) {
    p2.T.block(r, 0, 1, nz) = tab.T.block(keep[r], 0, 1, nz);
    p2.T(r, nz) = tab.T(keep[r], ntot);
    p2.basis[r] = tab.basis[keep[r]];
  }
  p2.T.block(m2, 0, 1, nz).setOnes();
  for (int r = 0; r < m2; ++r) p2.T.row(m2) -= p2.T.row(r);  // every basic cost is 1
  if (!p2.run(nz)) return res;

  Eigen::VectorXd z = Eigen::VectorXd::Zero(nz);
  for (int r = 0; r < m2; ++r) z[p2.basis[r]] = p2.T(r, nz);
  res.feasible = true;
  res.x = z.head(k) - z.tail(k);
  res.objective = res.x.cwiseAbs().sum();
  return res;
}

RidgeNetwork planted_teacher() {
  return RidgeNetwork(2, 2,
                      {{1.0, XiPoint{UnitVector::from_angle(0.3), 0.2}},
                       {-0.8, XiPoint{UnitVector::from_angle(2.0), -0.3}},
                       {0.6, XiPoint{UnitVector::from_angle(4.1), 0.1}}},
                      BetaSpec::default_rational(2));
}

TrainingSet sample_teacher(const RidgeNetwork& teacher, int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int d = teacher.dim();
  Eigen::MatrixXd X(N, d);
  Eigen::VectorXd y(N);
  std::vector<double> x(d);
  for (int i = 0; i < N; ++i) {
    for (int c = 0; c < d; ++c) x[c] = X(i, c) = u(rng);
    y[i] = teacher(x);
  }
  return TrainingSet(X, y);
}

}  // namespace ridgetv::oracle
