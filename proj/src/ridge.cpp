#include "ridgetv/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ridgetv/parallel.hpp"

namespace ridgetv {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

void check_order(int m) {
  if (m < 2) throw ValidationError("activation order m must be >= 2, got " + std::to_string(m));
}

XiPoint with_t(const XiPoint& p, double t) { return XiPoint{p.n, t}; }

std::vector<Neuron> merge_neurons(const std::vector<Neuron>& in, double tol) {
  std::vector<Neuron> out;
  std::vector<double> mass;
  for (const auto& nr : in) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Neuron& o) {
      return xi_distance(o.point, nr.point) <= tol;
    });
    if (it == out.end()) {
      out.push_back(nr);
      mass.push_back(std::abs(nr.alpha));
    } else {
      it->alpha += nr.alpha;
      mass[static_cast<std::size_t>(it - out.begin())] += std::abs(nr.alpha);
    }
  }
  std::vector<Neuron> kept;
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (std::abs(out[k].alpha) > 1e-14 * mass[k]) kept.push_back(out[k]);
  }
  return kept;
}

}  // namespace

double sigma_m(int m, double s) {
  check_order(m);
  if (s <= 0.0) return 0.0;
  return std::pow(s, m - 1) / factorial(m - 1);
}

double sigma_m_derivative(int m, double s) {
  check_order(m);
  if (m == 2) return s > 0.0 ? 1.0 : 0.0;
  return sigma_m(m - 1, s);
}

double rho_m(int m, std::span<const double> x, const XiPoint& p) {
  return sigma_m(m, p.n.dot(x) - p.t);
}

BetaSpec BetaSpec::default_rational(int m) {
  check_order(m);
  return BetaSpec(m, Kind::DefaultRational, "default_rational", nullptr);
}

BetaSpec BetaSpec::custom(int m, int d, std::string name, Fn fn) {
  check_order(m);
  if (!fn) throw ValidationError("BetaSpec::custom: empty function");
  BetaSpec b(m, Kind::Custom, std::move(name), std::move(fn));
  const int n_dirs = d == 1 ? 2 : 16;
  const std::vector<double> ts{-50.0, -7.5, -2.0, -0.5, 0.0, 0.3, 1.0, 4.0, 25.0};
  for (int j = 0; j < n_dirs; ++j) {
    std::vector<double> v(static_cast<std::size_t>(d), 0.0);
    if (d == 1) {
      v[0] = j == 0 ? 1.0 : -1.0;
    } else {
      // Deterministic spread of directions; last coordinates vary slowly.
      for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] = std::cos(0.7 * (j + 1) * (i + 1) + 0.3 * i);
    }
    const auto n = UnitVector::normalized(v);
    for (double t : ts) {
      const XiPoint p{n, t};
      const double a = b(p);
      const double c = b(involute(p));
      if (!(a > 0.0) || !std::isfinite(a)) {
        throw ValidationError("BetaSpec::custom: beta must be positive and finite");
      }
      if (std::abs(a - c) > 1e-12 * std::max(1.0, std::abs(a))) {
        throw ValidationError("BetaSpec::custom: beta(-n,-t) != beta(n,t)");
      }
    }
    // (1+|t|)^{m-1} beta(n,t) must decrease towards zero along |t| -> inf.
    double prev = INFINITY;
    for (double t : {1e2, 1e3, 1e4, 1e5}) {
      const double g = std::pow(1.0 + t, m - 1) * std::max(b(XiPoint{n, t}), b(XiPoint{n, -t}));
      if (!(g < prev)) throw ValidationError("BetaSpec::custom: decay condition fails");
      prev = g;
    }
    if (prev > 1e-2) throw ValidationError("BetaSpec::custom: decay condition fails");
  }
  return b;
}

double BetaSpec::operator()(const XiPoint& p) const {
  if (kind_ == Kind::DefaultRational) return 1.0 / (1.0 + std::pow(std::abs(p.t), m_));
  return fn_(p);
}

double BetaSpec::dt(const XiPoint& p) const {
  if (kind_ == Kind::DefaultRational) {
    const double a = std::abs(p.t);
    const double den = 1.0 + std::pow(a, m_);
    const double sgn = p.t > 0.0 ? 1.0 : (p.t < 0.0 ? -1.0 : 0.0);
    return -m_ * std::pow(a, m_ - 1) * sgn / (den * den);
  }
  const double h = 1e-6 * std::max(1.0, std::abs(p.t));
  return (fn_(with_t(p, p.t + h)) - fn_(with_t(p, p.t - h))) / (2.0 * h);
}

std::vector<double> BetaSpec::dn(const XiPoint& p) const {
  std::vector<double> g(static_cast<std::size_t>(p.dim()), 0.0);
  if (kind_ == Kind::DefaultRational) return g;
  const double h = 1e-6;
  for (int i = 0; i < p.dim(); ++i) {
    std::vector<double> a(p.n.coords().begin(), p.n.coords().end());
    std::vector<double> b = a;
    a[static_cast<std::size_t>(i)] += h;
    b[static_cast<std::size_t>(i)] -= h;
    g[static_cast<std::size_t>(i)] =
        (fn_(XiPoint{UnitVector::normalized(a), p.t}) - fn_(XiPoint{UnitVector::normalized(b), p.t})) /
        (2.0 * h);
  }
  return g;
}

RidgeNetwork::RidgeNetwork(int m, int d, std::vector<Neuron> neurons, BetaSpec beta)
    : m_(m), d_(d), neurons_(std::move(neurons)), beta_(std::move(beta)) {
  check_order(m);
  if (d < 1) throw ValidationError("RidgeNetwork: d must be >= 1");
  if (beta_.m() != m) throw ValidationError("RidgeNetwork: beta order differs from m");
  for (const auto& nr : neurons_) {
    if (nr.alpha == 0.0 || !std::isfinite(nr.alpha)) {
      throw ValidationError("RidgeNetwork: neuron coefficients must be finite and nonzero");
    }
    if (nr.point.dim() != d) throw ValidationError("RidgeNetwork: neuron dimension mismatch");
  }
}

double RidgeNetwork::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_) {
    throw ValidationError("eval_network: point has d=" + std::to_string(x.size()) +
                          ", network has d=" + std::to_string(d_));
  }
  double s = 0.0;
  for (const auto& nr : neurons_) s += nr.alpha * sigma_m(m_, nr.point.n.dot(x) - nr.point.t);
  return s;
}

Eigen::VectorXd RidgeNetwork::eval_batch(const Eigen::MatrixXd& X) const {
  if (X.cols() != d_) throw ValidationError("eval_batch: column count differs from d");
  Eigen::VectorXd out(X.rows());
  parallel_for(static_cast<std::size_t>(X.rows()), [&](std::size_t i) {
    const Eigen::VectorXd row = X.row(static_cast<Eigen::Index>(i)).transpose();
    out[static_cast<Eigen::Index>(i)] = (*this)(std::span<const double>(row.data(), row.size()));
  });
  return out;
}

RidgeNetwork network_from_measure(const AtomicMeasure& mu, int m, const BetaSpec& beta) {
  std::vector<Neuron> ns;
  ns.reserve(mu.size());
  for (const auto& a : mu.atoms()) ns.push_back(Neuron{a.weight * beta(a.point), a.point});
  return RidgeNetwork(m, mu.dim(), std::move(ns), beta);
}

AtomicMeasure measure_from_network(const RidgeNetwork& net) {
  AtomicMeasure mu(net.dim());
  for (const auto& nr : net.neurons()) mu.add(nr.alpha / net.beta()(nr.point), nr.point);
  return mu;
}

double ProjectiveForm::remainder(std::span<const double> x) const {
  const int m = remainder_source.m();
  double s = 0.0;
  for (const auto& nr : remainder_source.neurons()) {
    s += nr.alpha * std::pow(nr.point.n.dot(x) - nr.point.t, m - 1) / factorial(m - 1);
  }
  return s;
}

ProjectiveForm projective_form(const RidgeNetwork& net) {
  const double sign = net.m() % 2 == 0 ? 1.0 : -1.0;
  std::vector<Neuron> moved;
  std::vector<Neuron> flipped;
  for (const auto& nr : net.neurons()) {
    const auto c = canonicalize(nr.point);
    if (c.flip < 0) {
      flipped.push_back(nr);
      moved.push_back(Neuron{sign * nr.alpha, c.point});
    } else {
      moved.push_back(nr);
    }
  }
  return ProjectiveForm{
      RidgeNetwork(net.m(), net.dim(), merge_neurons(moved, Tolerances{}.merge), net.beta()),
      RidgeNetwork(net.m(), net.dim(), std::move(flipped), net.beta())};
}

double path_norm(const RidgeNetwork& net, PathNormMode mode) {
  const auto ns = mode == PathNormMode::Projective ? projective_form(net).network.neurons()
                                                   : merge_neurons(net.neurons(), Tolerances{}.merge);
  double s = 0.0;
  for (const auto& nr : ns) s += std::abs(nr.alpha) / net.beta()(nr.point);
  return s;
}

double growth_bound(const RidgeNetwork& net, double R) {
  double a = 0.0;
  double tmax = 0.0;
  for (const auto& nr : net.neurons()) {
    a += std::abs(nr.alpha);
    tmax = std::max(tmax, std::abs(nr.point.t));
  }
  return a / factorial(net.m() - 1) * std::pow(R + tmax, net.m() - 1);
}

std::vector<std::vector<int>> monomial_exponents(int d, int deg) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  // Exponent vectors of total degree exactly `total`, first coordinate largest first.
  std::function<void(int, int)> rec = [&](int i, int remaining) {
    if (i == d - 1) {
      cur[static_cast<std::size_t>(i)] = remaining;
      out.push_back(cur);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur[static_cast<std::size_t>(i)] = e;
      rec(i + 1, remaining - e);
    }
  };
  for (int total = 0; total <= deg; ++total) rec(0, total);
  return out;
}

namespace {

double monomial(std::span<const double> x, const std::vector<int>& e) {
  double v = 1.0;
  for (std::size_t i = 0; i < e.size(); ++i) v *= std::pow(x[i], e[i]);
  return v;
}

Eigen::MatrixXd polynomial_sample_points(int d) {
  constexpr int kPerAxis = 7;
  constexpr int kRandom = 50;
  int grid = 1;
  for (int i = 0; i < d; ++i) grid *= kPerAxis;
  Eigen::MatrixXd X(grid + kRandom, d);
  for (int r = 0; r < grid; ++r) {
    int idx = r;
    for (int i = 0; i < d; ++i) {
      X(r, i) = -2.0 + 4.0 * (idx % kPerAxis) / (kPerAxis - 1);
      idx /= kPerAxis;
    }
  }
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int r = grid; r < grid + kRandom; ++r)
    for (int i = 0; i < d; ++i) X(r, i) = u(rng);
  return X;
}

}  // namespace

double PolynomialFit::operator()(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t k = 0; k < exponents.size(); ++k) s += coefficients[k] * monomial(x, exponents[k]);
  return s;
}

PolynomialFit polynomial_part_check(const RidgeNetwork& net, double tol) {
  const int d = net.dim();
  const Eigen::MatrixXd X = polynomial_sample_points(d);
  const Eigen::VectorXd f = net.eval_batch(X);
  const double fnorm = f.norm();
  PolynomialFit fit;
  if (fnorm == 0.0) {
    fit.is_poly = true;
    fit.degree = 0;
    fit.exponents = monomial_exponents(d, 0);
    fit.coefficients.assign(fit.exponents.size(), 0.0);
    return fit;
  }
  for (int deg = 0; deg <= net.m() - 1; ++deg) {
    auto ex = monomial_exponents(d, deg);
    Eigen::MatrixXd A(X.rows(), static_cast<Eigen::Index>(ex.size()));
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
      const Eigen::VectorXd row = X.row(r).transpose();
      for (std::size_t k = 0; k < ex.size(); ++k)
        A(r, static_cast<Eigen::Index>(k)) = monomial({row.data(), static_cast<std::size_t>(d)}, ex[k]);
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(f);
    const double res = (A * c - f).norm() / fnorm;
    fit.residual = res;
    fit.exponents = ex;
    fit.coefficients.assign(c.data(), c.data() + c.size());
    if (res < tol) {
      fit.is_poly = true;
      fit.degree = deg;
      return fit;
    }
  }
  fit.is_poly = false;
  fit.degree = -1;
  return fit;
}

}  // namespace ridgetv
