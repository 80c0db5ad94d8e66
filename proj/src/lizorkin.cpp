#include "ridgetv/lizorkin.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ridgetv/ridge.hpp"

namespace ridgetv {

namespace {

constexpr double kPi = 3.14159265358979323846;

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

std::string exponent_label(const std::vector<int>& e) {
  std::ostringstream os;
  os << "x^(";
  for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
  os << ")";
  return os.str();
}

}  // namespace

double hermite_he(int n, double x) {
  if (n < 0) throw ValidationError("hermite_he: negative degree");
  if (n == 0) return 1.0;
  double a = 1.0;
  double b = x;
  for (int k = 1; k < n; ++k) {
    const double c = x * b - k * a;
    a = b;
    b = c;
  }
  return b;
}

double gaussian_derivative(int p, double sigma, double t) {
  const double u = t / sigma;
  const double sign = p % 2 == 0 ? 1.0 : -1.0;
  return sign * std::pow(sigma, -p) * hermite_he(p, u) * std::exp(-0.5 * u * u);
}

TestFunctionRd::TestFunctionRd(int d, int k, double sigma, std::vector<double> center)
    : d_(d), k_(k), sigma_(sigma), center_(std::move(center)) {
  if (d < 1) throw ValidationError("TestFunctionRd: d must be >= 1");
  if (k < 0) throw ValidationError("TestFunctionRd: k must be >= 0");
  if (!(sigma > 0.0)) throw ValidationError("TestFunctionRd: sigma must be positive");
  if (center_.empty()) center_.assign(static_cast<std::size_t>(d), 0.0);
  if (static_cast<int>(center_.size()) != d) throw ValidationError("TestFunctionRd: center dimension mismatch");
  for (auto& e : monomial_exponents(d, k)) {
    int total = 0;
    double denom = 1.0;
    for (int b : e) {
      total += b;
      denom *= factorial(b);
    }
    if (total != k) continue;
    laplace_terms_.push_back(e);
    laplace_coeffs_.push_back(factorial(k) / denom);
  }
}

std::string TestFunctionRd::tag() const {
  std::ostringstream os;
  os << (k_ == 0 ? "gaussian" : "laplacian_gaussian") << "(d=" << d_ << ",k=" << k_ << ",sigma=" << sigma_
     << ")";
  return os.str();
}

double TestFunctionRd::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_) throw ValidationError("TestFunctionRd: dimension mismatch");
  double r2 = 0.0;
  std::vector<double> u(static_cast<std::size_t>(d_));
  for (int i = 0; i < d_; ++i) {
    u[static_cast<std::size_t>(i)] = (x[static_cast<std::size_t>(i)] - center_[static_cast<std::size_t>(i)]) / sigma_;
    r2 += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
  }
  const double g = std::exp(-0.5 * r2);
  if (k_ == 0) return g;
  double s = 0.0;
  for (std::size_t j = 0; j < laplace_terms_.size(); ++j) {
    double prod = laplace_coeffs_[j];
    for (int i = 0; i < d_; ++i) prod *= hermite_he(2 * laplace_terms_[j][static_cast<std::size_t>(i)], u[static_cast<std::size_t>(i)]);
    s += prod;
  }
  return std::pow(sigma_, -2 * k_) * s * g;
}

double TestFunctionRd::radon(const UnitVector& n, double t) const {
  const double s = t - n.dot(center_);
  return std::pow(sigma_ * std::sqrt(2.0 * kPi), d_ - 1) * gaussian_derivative(2 * k_, sigma_, s);
}

double TestFunctionRd::support_radius() const {
  double c = 0.0;
  for (double v : center_) c += v * v;
  return 8.0 * sigma_ + std::sqrt(c);
}

TestFunctionRd make_lizorkin_rd(int d, int k, double sigma, std::vector<double> center, bool certify) {
  TestFunctionRd fn(d, k, sigma, std::move(center));
  if (certify && k >= 1) {
    const auto table = moment_check(fn, 2 * k - 1);
    if (!table.all_pass_below(2 * k)) {
      throw MomentError("make_lizorkin_rd: declared moment order " + std::to_string(2 * k) + " not certified");
    }
  }
  return fn;
}

AngularFactor AngularFactor::constant(int d, double c) {
  return AngularFactor{{Term{c, std::vector<int>(static_cast<std::size_t>(d), 0)}}};
}

AngularFactor AngularFactor::coordinate(int d, int i, double c) {
  std::vector<int> e(static_cast<std::size_t>(d), 0);
  e.at(static_cast<std::size_t>(i)) = 1;
  return AngularFactor{{Term{c, e}}};
}

double AngularFactor::operator()(const UnitVector& n) const {
  double s = 0.0;
  for (const auto& term : terms) {
    if (static_cast<int>(term.exponents.size()) != n.dim()) {
      throw ValidationError("AngularFactor: dimension mismatch");
    }
    double v = term.coeff;
    for (int i = 0; i < n.dim(); ++i) v *= std::pow(n[i], term.exponents[static_cast<std::size_t>(i)]);
    s += v;
  }
  return s;
}

std::string AngularFactor::describe() const {
  std::ostringstream os;
  for (std::size_t j = 0; j < terms.size(); ++j) {
    if (j) os << " + ";
    os << terms[j].coeff << "*n^(";
    for (std::size_t i = 0; i < terms[j].exponents.size(); ++i) os << (i ? "," : "") << terms[j].exponents[i];
    os << ")";
  }
  return os.str();
}

TestFunctionXi::TestFunctionXi(Parity parity, int p, double sigma, double shift, AngularFactor angular)
    : parity_(parity), p_(p), sigma_(sigma), shift_(shift), angular_(std::move(angular)) {
  if (parity == Parity::None) throw ValidationError("TestFunctionXi: parity must be even or odd");
  if (p < 1) throw ValidationError("TestFunctionXi: moment order p must be >= 1");
  if (!(sigma > 0.0)) throw ValidationError("TestFunctionXi: sigma must be positive");
  if (angular_.terms.empty()) throw ValidationError("TestFunctionXi: empty angular factor");
}

std::string TestFunctionXi::tag() const {
  std::ostringstream os;
  os << "xi(" << to_string(parity_) << ",p=" << p_ << ",sigma=" << sigma_ << ",shift=" << shift_
     << ",a=" << angular_.describe() << ")";
  return os.str();
}

double TestFunctionXi::dt(const UnitVector& n, double t, int j) const {
  const double s = parity_ == Parity::Even ? 1.0 : -1.0;
  const double sj = j % 2 == 0 ? 1.0 : -1.0;
  // d^j/dt^j h(-t) = (-1)^j h^{(j)}(-t)
  const double a = angular_(n) * gaussian_derivative(p_ + j, sigma_, t - shift_);
  const double b = angular_(-n) * sj * gaussian_derivative(p_ + j, sigma_, -t - shift_);
  return 0.5 * (a + s * b);
}

double TestFunctionXi::support_halfwidth() const { return std::abs(shift_) + 10.0 * sigma_; }

TestFunctionXi make_lizorkin_xi(Parity parity, int p, double sigma, double shift, AngularFactor angular) {
  if (angular.terms.empty()) angular = AngularFactor::constant(2);
  TestFunctionXi fn(parity, p, sigma, shift, std::move(angular));
  const int d = static_cast<int>(fn.angular().terms.front().exponents.size());
  // Probe a direction/offset grid for annihilation by the symmetrization.
  double peak = 0.0;
  double raw = 0.0;
  const int n_dir = d == 1 ? 2 : 24;
  for (int j = 0; j < n_dir; ++j) {
    std::vector<double> v(static_cast<std::size_t>(d), 0.0);
    if (d == 1) {
      v[0] = j == 0 ? 1.0 : -1.0;
    } else {
      for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] = std::cos(0.9 * (j + 1) * (i + 1) + 0.4 * i + 0.1);
    }
    const auto n = UnitVector::normalized(v);
    for (int q = -40; q <= 40; ++q) {
      const double t = shift + 0.1 * q * sigma;
      peak = std::max(peak, std::abs(fn(n, t)));
      raw = std::max(raw, std::abs(fn.angular()(n) * gaussian_derivative(p, sigma, t - shift)));
    }
  }
  if (peak <= 1e-12 * raw || raw == 0.0) {
    throw DegenerateError("make_lizorkin_xi: symmetrization to " + std::string(to_string(parity)) +
                          " parity annihilates the test function");
  }
  return fn;
}

std::vector<TestFunctionXi> make_lizorkin_xi_family(int d, int m, int count, std::uint64_t seed,
                                                    double shift_range, double sigma) {
  if (d < 2) throw ValidationError("make_lizorkin_xi_family: d must be >= 2");
  const Parity parity = m % 2 == 0 ? Parity::Even : Parity::Odd;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<TestFunctionXi> out;
  int attempt = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempt > 100 * count) throw DegenerateError("make_lizorkin_xi_family: too many degenerate draws");
    AngularFactor a = AngularFactor::constant(d, 1.0);
    // Even factor n_i n_j and odd factor n_i keep a(n) smooth on the sphere.
    std::vector<int> e2(static_cast<std::size_t>(d), 0);
    const int i = static_cast<int>(std::floor((u(rng) + 1.0) * 0.5 * d)) % d;
    const int j = static_cast<int>(std::floor((u(rng) + 1.0) * 0.5 * d)) % d;
    e2[static_cast<std::size_t>(i)] += 1;
    e2[static_cast<std::size_t>(j)] += 1;
    a.terms.push_back({0.5 * u(rng), e2});
    a.terms.push_back(AngularFactor::coordinate(d, (i + 1) % d, 0.5 * u(rng)).terms.front());
    const int p = m + (attempt % 3 == 0 ? 2 : 0);
    const double shift = shift_range * u(rng);
    try {
      out.push_back(make_lizorkin_xi(parity, p, sigma, shift, std::move(a)));
    } catch (const DegenerateError&) {
    }
  }
  return out;
}

int MomentTable::vanishing_order() const {
  int p = 0;
  while (true) {
    bool any = false;
    for (const auto& e : entries) {
      if (e.order != p) continue;
      any = true;
      if (!e.pass) return p;
    }
    if (!any) return p;
    ++p;
  }
}

bool MomentTable::all_pass_below(int order) const {
  for (const auto& e : entries)
    if (e.order < order && !e.pass) return false;
  return true;
}

MomentTable moment_check(const TestFunctionRd& fn, int max_order, double tol) {
  const int d = fn.dim();
  if (d > 3) throw ValidationError("moment_check: d must be <= 3");
  const double sigma = fn.sigma();
  const double half = 9.0 * sigma;
  const double h = sigma / (d == 3 ? 6.0 : 10.0);
  const int n = static_cast<int>(std::ceil(2.0 * half / h)) + 1;
  const double step = 2.0 * half / (n - 1);
  const auto exps = monomial_exponents(d, std::max(0, max_order));
  std::vector<double> val(exps.size(), 0.0);
  std::vector<double> absval(exps.size(), 0.0);
  long total = 1;
  for (int i = 0; i < d; ++i) total *= n;
  std::vector<double> x(static_cast<std::size_t>(d));
  for (long idx = 0; idx < total; ++idx) {
    long r = idx;
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      const int a = static_cast<int>(r % n);
      r /= n;
      x[static_cast<std::size_t>(i)] = fn.center()[static_cast<std::size_t>(i)] - half + a * step;
      if (a == 0 || a == n - 1) w *= 0.5;
    }
    const double f = fn(x) * w;
    if (f == 0.0) continue;
    for (std::size_t k = 0; k < exps.size(); ++k) {
      double mono = 1.0;
      for (int i = 0; i < d; ++i) mono *= std::pow(x[static_cast<std::size_t>(i)], exps[k][static_cast<std::size_t>(i)]);
      val[k] += mono * f;
      absval[k] += std::abs(mono * f);
    }
  }
  MomentTable table;
  table.tol = tol;
  const double cell = std::pow(step, d);
  for (std::size_t k = 0; k < exps.size(); ++k) {
    MomentEntry e;
    for (int b : exps[k]) e.order += b;
    e.label = exponent_label(exps[k]);
    e.value = val[k] * cell;
    e.scale = absval[k] * cell;
    e.residual = e.scale > 0.0 ? std::abs(e.value) / e.scale : 0.0;
    e.pass = e.residual <= tol;
    table.entries.push_back(e);
  }
  return table;
}

MomentTable moment_check(const std::function<double(double)>& profile, int max_order, double center,
                         double halfwidth, double tol) {
  constexpr int n = 8001;
  const double step = 2.0 * halfwidth / (n - 1);
  std::vector<double> val(static_cast<std::size_t>(max_order + 1), 0.0);
  std::vector<double> absval(val.size(), 0.0);
  for (int a = 0; a < n; ++a) {
    const double t = center - halfwidth + a * step;
    const double w = (a == 0 || a == n - 1) ? 0.5 : 1.0;
    const double f = profile(t) * w;
    double tp = 1.0;
    for (int j = 0; j <= max_order; ++j) {
      val[static_cast<std::size_t>(j)] += tp * f;
      absval[static_cast<std::size_t>(j)] += std::abs(tp * f);
      tp *= t;
    }
  }
  MomentTable table;
  table.tol = tol;
  for (int j = 0; j <= max_order; ++j) {
    MomentEntry e;
    e.order = j;
    e.label = "t^" + std::to_string(j);
    e.value = val[static_cast<std::size_t>(j)] * step;
    e.scale = absval[static_cast<std::size_t>(j)] * step;
    e.residual = e.scale > 0.0 ? std::abs(e.value) / e.scale : 0.0;
    e.pass = e.residual <= tol;
    table.entries.push_back(e);
  }
  return table;
}

MomentTable moment_check(const TestFunctionXi& fn, int max_order, std::span<const UnitVector> dirs, double tol) {
  MomentTable table;
  table.tol = tol;
  const double half = fn.support_halfwidth();
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const UnitVector& n = dirs[k];
    auto sub = moment_check([&](double t) { return fn(n, t); }, max_order, 0.0, half, tol);
    for (auto& e : sub.entries) {
      e.label = "dir" + std::to_string(k) + ":" + e.label;
      table.entries.push_back(std::move(e));
    }
  }
  return table;
}

}  // namespace ridgetv
