#include "ridgetv/radon.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "ridgetv/parallel.hpp"
#include "spectral.hpp"

namespace ridgetv {

namespace {

constexpr double kPi = std::numbers::pi;

Parity flipped(Parity p) {
  switch (p) {
    case Parity::Even: return Parity::Odd;
    case Parity::Odd: return Parity::Even;
    case Parity::None: return Parity::None;
  }
  return Parity::None;
}

// Orthonormal basis of the hyperplane n^perp (d = 2 or 3).
std::vector<std::vector<double>> tangent_basis(const UnitVector& n) {
  if (n.dim() == 2) return {{-n[1], n[0]}};
  if (n.dim() != 3) throw ValidationError("tangent_basis: d must be 2 or 3");
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(n[i]) < std::abs(n[axis])) axis = i;
  std::vector<double> e(3, 0.0);
  e[static_cast<std::size_t>(axis)] = 1.0;
  const double c = n[axis];
  std::vector<double> u1(3);
  double nrm = 0.0;
  for (int i = 0; i < 3; ++i) {
    u1[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)] - c * n[i];
    nrm += u1[static_cast<std::size_t>(i)] * u1[static_cast<std::size_t>(i)];
  }
  nrm = std::sqrt(nrm);
  for (double& v : u1) v /= nrm;
  std::vector<double> u2{n[1] * u1[2] - n[2] * u1[1], n[2] * u1[0] - n[0] * u1[2], n[0] * u1[1] - n[1] * u1[0]};
  return {u1, u2};
}

// 4-point Lagrange weights for nodes 0,1,2,3 at position u in [0,3].
std::array<double, 4> lagrange4(double u) {
  const double a = u, b = u - 1.0, c = u - 2.0, d = u - 3.0;
  return {-b * c * d / 6.0, a * c * d / 2.0, -a * b * d / 2.0, a * b * c / 6.0};
}

void check_tails(const Sinogram& psi, double tail_tol, const char* who) {
  const double peak = psi.max_abs();
  if (peak == 0.0) return;
  for (std::size_t j = 0; j < psi.n_dir(); ++j) {
    const double e = std::max(std::abs(psi.at(j, 0)), std::abs(psi.at(j, psi.n_t() - 1)));
    if (e > tail_tol * peak) {
      throw ExtentError(std::string(who) + ": profile does not decay inside [-T, T] (edge/peak = " +
                        std::to_string(e / peak) + ")");
    }
  }
}

Sinogram map_profiles(const Sinogram& psi, const std::function<std::vector<double>(std::span<const double>)>& f,
                      Parity out_parity) {
  Sinogram out(psi.grid, psi.tgrid, out_parity);
  parallel_for(psi.n_dir(), [&](std::size_t j) {
    const auto r = f(psi.profile(j));
    std::copy(r.begin(), r.end(), out.profile(j).begin());
  });
  return out;
}

}  // namespace

DirectionGrid DirectionGrid::uniform_circle(int n) {
  if (n < 1) throw ValidationError("uniform_circle: need at least one direction");
  DirectionGrid g;
  g.d = 2;
  const bool paired = n % 2 == 0;
  for (int j = 0; j < n; ++j) {
    const double theta = 2.0 * kPi * j / n;
    g.angles.push_back(theta);
    if (paired && j >= n / 2) {
      g.dirs.push_back(-g.dirs[static_cast<std::size_t>(j - n / 2)]);
    } else {
      g.dirs.push_back(UnitVector::from_angle(theta));
    }
    g.weights.push_back(2.0 * kPi / n);
    g.antipode.push_back(paired ? (j + n / 2) % n : -1);
  }
  return g;
}

DirectionGrid DirectionGrid::fibonacci_sphere(int n) {
  if (n < 2 || n % 2 != 0) throw ValidationError("fibonacci_sphere: N must be even and >= 2");
  DirectionGrid g;
  g.d = 3;
  const int half = n / 2;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < half; ++i) {
    const double z = 1.0 - (i + 0.5) / half;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    g.dirs.push_back(UnitVector::normalized({r * std::cos(phi), r * std::sin(phi), z}));
  }
  for (int i = 0; i < half; ++i) g.dirs.push_back(-g.dirs[static_cast<std::size_t>(i)]);
  g.weights.assign(static_cast<std::size_t>(n), 4.0 * kPi / n);
  for (int i = 0; i < n; ++i) g.antipode.push_back((i + half) % n);
  return g;
}

DirectionGrid DirectionGrid::for_dimension(int d, int n) {
  if (d == 2) return uniform_circle(n > 0 ? n : 256);
  if (d == 3) return fibonacci_sphere(n > 0 ? n : 512);
  throw ValidationError("DirectionGrid: unsupported dimension " + std::to_string(d));
}

DirectionGrid DirectionGrid::single(const UnitVector& n) {
  DirectionGrid g;
  g.d = n.dim();
  g.dirs.push_back(n);
  g.weights.push_back(1.0);
  g.antipode.push_back(-1);
  if (n.dim() == 2) {
    double a = n.angle();
    if (a < 0.0) a += 2.0 * kPi;
    g.angles.push_back(a);
  }
  return g;
}

TGrid TGrid::covering(double T, double h) {
  if (!(h > 0.0) || !(T > 0.0)) throw ValidationError("TGrid: T and h must be positive");
  const int half = static_cast<int>(std::ceil(T / h - 1e-9));
  return TGrid{h, 2 * half + 1};
}

TGrid default_tgrid(int d, double L, double h_t) { return TGrid::covering(L * std::sqrt(double(d)) + 1.0, h_t); }

Sinogram::Sinogram(DirectionGrid g, TGrid tg, Parity p) : grid(std::move(g)), tgrid(tg), parity(p) {
  if (grid.size() == 0) throw ValidationError("Sinogram: empty direction grid");
  if (tgrid.n < 4) throw ValidationError("Sinogram: t-grid needs at least 4 points");
  values.assign(grid.size() * static_cast<std::size_t>(tgrid.n), 0.0);
}

std::span<const double> Sinogram::profile(std::size_t j) const {
  return {values.data() + j * static_cast<std::size_t>(tgrid.n), static_cast<std::size_t>(tgrid.n)};
}

std::span<double> Sinogram::profile(std::size_t j) {
  return {values.data() + j * static_cast<std::size_t>(tgrid.n), static_cast<std::size_t>(tgrid.n)};
}

double Sinogram::interpolate(std::size_t j, double t) const {
  const double T = tgrid.T();
  if (!(std::abs(t) <= T * (1.0 + 1e-12))) {
    throw ExtentError("Sinogram: t = " + std::to_string(t) + " outside [-" + std::to_string(T) + ", " +
                      std::to_string(T) + "]");
  }
  const double u = (t + T) / tgrid.h;
  int i0 = static_cast<int>(std::floor(u)) - 1;
  i0 = std::clamp(i0, 0, tgrid.n - 4);
  const auto w = lagrange4(u - i0);
  const auto p = profile(j);
  return w[0] * p[static_cast<std::size_t>(i0)] + w[1] * p[static_cast<std::size_t>(i0 + 1)] +
         w[2] * p[static_cast<std::size_t>(i0 + 2)] + w[3] * p[static_cast<std::size_t>(i0 + 3)];
}

double Sinogram::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

Sinogram sample_sinogram(const std::function<double(const UnitVector&, double)>& fn, const DirectionGrid& grid,
                         const TGrid& tgrid, Parity parity) {
  Sinogram s(grid, tgrid, parity);
  parallel_for(grid.size(), [&](std::size_t j) {
    for (int i = 0; i < tgrid.n; ++i) s.at(j, i) = fn(grid.dirs[j], tgrid[i]);
  });
  return s;
}

double parity_defect(const Sinogram& s, Parity parity) {
  if (parity == Parity::None) return 0.0;
  const double sign = parity == Parity::Even ? 1.0 : -1.0;
  double worst = 0.0;
  for (std::size_t j = 0; j < s.n_dir(); ++j) {
    const int k = s.grid.antipode[j];
    if (k < 0) continue;
    for (int i = 0; i < s.n_t(); ++i) {
      worst = std::max(worst, std::abs(s.at(j, i) - sign * s.at(static_cast<std::size_t>(k), s.n_t() - 1 - i)));
    }
  }
  return worst;
}

GridFunctionRd GridFunctionRd::sample(const std::function<double(std::span<const double>)>& fn, int d, double L,
                                      double h) {
  if (d < 1 || d > 3) throw ValidationError("GridFunctionRd: d must be 1, 2 or 3");
  GridFunctionRd g;
  g.d = d;
  g.L = L;
  g.n = static_cast<int>(std::lround(2.0 * L / h)) + 1;
  g.h = 2.0 * L / (g.n - 1);
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(g.n);
  g.values.resize(total);
  const std::size_t rows = total / static_cast<std::size_t>(g.n);
  parallel_for(rows, [&](std::size_t r) {
    std::vector<double> x(static_cast<std::size_t>(d));
    std::size_t rest = r;
    for (int a = 1; a < d; ++a) {
      x[static_cast<std::size_t>(a)] = g.coord(static_cast<int>(rest % static_cast<std::size_t>(g.n)));
      rest /= static_cast<std::size_t>(g.n);
    }
    for (int i = 0; i < g.n; ++i) {
      x[0] = g.coord(i);
      g.values[r * static_cast<std::size_t>(g.n) + static_cast<std::size_t>(i)] = fn(x);
    }
  });
  return g;
}

double GridFunctionRd::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d) throw ValidationError("GridFunctionRd: dimension mismatch");
  std::array<int, 3> base{};
  std::array<std::array<double, 4>, 3> w{};
  for (int a = 0; a < d; ++a) {
    const double u = (x[static_cast<std::size_t>(a)] + L) / h;
    if (u < 0.0 || u > n - 1) return 0.0;
    int i0 = std::clamp(static_cast<int>(std::floor(u)) - 1, 0, n - 4);
    base[static_cast<std::size_t>(a)] = i0;
    w[static_cast<std::size_t>(a)] = lagrange4(u - i0);
  }
  double s = 0.0;
  const int combos = d == 1 ? 4 : (d == 2 ? 16 : 64);
  for (int c = 0; c < combos; ++c) {
    double wt = 1.0;
    std::size_t idx = 0;
    std::size_t stride = 1;
    int rest = c;
    for (int a = 0; a < d; ++a) {
      const int k = rest % 4;
      rest /= 4;
      wt *= w[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)];
      idx += static_cast<std::size_t>(base[static_cast<std::size_t>(a)] + k) * stride;
      stride *= static_cast<std::size_t>(n);
    }
    s += wt * values[idx];
  }
  return s;
}

Sinogram radon(const std::function<double(std::span<const double>)>& phi, const DirectionGrid& grid,
               const TGrid& tgrid, const RadonOptions& opt) {
  const int d = grid.d;
  if (d != 2 && d != 3) throw ValidationError("radon: d must be 2 or 3");
  const int ns = static_cast<int>(std::lround(2.0 * opt.L / opt.h)) + 1;
  const double hs = 2.0 * opt.L / (ns - 1);
  Sinogram out(grid, tgrid, Parity::Even);
  std::vector<double> peak(grid.size(), 0.0);
  std::vector<double> edge(grid.size(), 0.0);

  parallel_for(grid.size(), [&](std::size_t j) {
    const UnitVector& n = grid.dirs[j];
    const auto basis = tangent_basis(n);
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int i = 0; i < tgrid.n; ++i) {
      const double t = tgrid[i];
      double sum = 0.0;
      if (d == 2) {
        for (int a = 0; a < ns; ++a) {
          const double s = -opt.L + a * hs;
          x[0] = t * n[0] + s * basis[0][0];
          x[1] = t * n[1] + s * basis[0][1];
          const double v = phi(x);
          const bool boundary = a == 0 || a == ns - 1;
          sum += boundary ? 0.5 * v : v;
          peak[j] = std::max(peak[j], std::abs(v));
          if (boundary) edge[j] = std::max(edge[j], std::abs(v));
        }
        out.at(j, i) = sum * hs;
      } else {
        for (int a = 0; a < ns; ++a) {
          const double s1 = -opt.L + a * hs;
          const bool ba = a == 0 || a == ns - 1;
          double row = 0.0;
          for (int b = 0; b < ns; ++b) {
            const double s2 = -opt.L + b * hs;
            for (int c = 0; c < 3; ++c) {
              x[static_cast<std::size_t>(c)] = t * n[c] + s1 * basis[0][static_cast<std::size_t>(c)] +
                                               s2 * basis[1][static_cast<std::size_t>(c)];
            }
            const double v = phi(x);
            const bool bb = b == 0 || b == ns - 1;
            row += bb ? 0.5 * v : v;
            peak[j] = std::max(peak[j], std::abs(v));
            if (ba || bb) edge[j] = std::max(edge[j], std::abs(v));
          }
          sum += ba ? 0.5 * row : row;
        }
        out.at(j, i) = sum * hs * hs;
      }
    }
  });

  const double global_peak = *std::max_element(peak.begin(), peak.end());
  const double global_edge = *std::max_element(edge.begin(), edge.end());
  if (global_peak > 0.0 && global_edge > opt.tail_tol * global_peak) {
    throw ExtentError("radon: integrand does not decay inside the cross-section [-L, L]^{d-1} (edge/peak = " +
                      std::to_string(global_edge / global_peak) + ")");
  }
  return out;
}

Sinogram radon(const GridFunctionRd& phi, const DirectionGrid& grid, const TGrid& tgrid, const RadonOptions& opt) {
  if (phi.d != grid.d) throw ValidationError("radon: grid function and direction grid differ in dimension");
  return radon([&](std::span<const double> x) { return phi(x); }, grid, tgrid, opt);
}

double dual_radon(const Sinogram& psi, std::span<const double> x) {
  if (static_cast<int>(x.size()) != psi.d()) throw ValidationError("dual_radon: dimension mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < psi.n_dir(); ++j) s += psi.grid.weights[j] * psi.interpolate(j, psi.grid.dirs[j].dot(x));
  return s;
}

std::vector<double> dual_radon(const Sinogram& psi, const std::vector<std::vector<double>>& X) {
  std::vector<double> out(X.size());
  parallel_for(X.size(), [&](std::size_t i) { out[i] = dual_radon(psi, X[i]); });
  return out;
}

Sinogram hilbert_t(const Sinogram& psi, double tail_tol) {
  check_tails(psi, tail_tol, "hilbert_t");
  const double h = psi.tgrid.h;
  return map_profiles(
      psi, [&](std::span<const double> p) { return spectral::apply(p, h, spectral::hilbert); }, flipped(psi.parity));
}

Sinogram dt_m(const Sinogram& psi, int k) {
  if (k < 1) throw ValidationError("dt_m: derivative order must be >= 1");
  const double h = psi.tgrid.h;
  return map_profiles(
      psi,
      [&](std::span<const double> p) {
        return spectral::apply(p, h, [k](double w) { return spectral::derivative(w, k); });
      },
      k % 2 == 0 ? psi.parity : flipped(psi.parity));
}

std::vector<double> antider_A(std::span<const double> profile, double h, double moment_tol) {
  const std::size_t n = profile.size();
  if (n < 4) throw ValidationError("antider_A: profile needs at least 4 samples");
  double mean = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    mean += w * profile[i];
    mass += w * std::abs(profile[i]);
  }
  if (std::abs(mean) > moment_tol * mass) {
    throw MomentError("antider_A: profile has nonzero mean (|mean|/mass = " + std::to_string(std::abs(mean) / mass) +
                      "); it is not an approximate Lizorkin profile");
  }
  const auto d1 = spectral::apply(profile, h, [](double w) { return spectral::derivative(w, 1); });
  const auto d3 = spectral::apply(profile, h, [](double w) { return spectral::derivative(w, 3); });
  const auto d5 = spectral::apply(profile, h, [](double w) { return spectral::derivative(w, 5); });
  std::vector<double> out(n);
  double trap = 0.0;
  const double h2 = h * h;
  const double h4 = h2 * h2;
  const double h6 = h4 * h2;
  out[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    trap += 0.5 * h * (profile[i - 1] + profile[i]);
    out[i] = trap - h2 / 12.0 * (d1[i] - d1[0]) + h4 / 720.0 * (d3[i] - d3[0]) - h6 / 30240.0 * (d5[i] - d5[0]);
  }
  return out;
}

Sinogram antider_A(const Sinogram& psi, double moment_tol) {
  const double h = psi.tgrid.h;
  return map_profiles(
      psi, [&](std::span<const double> p) { return antider_A(p, h, moment_tol); }, flipped(psi.parity));
}

Sinogram lambda_filter(const Sinogram& psi, int d, double tail_tol) {
  const double h = psi.tgrid.h;
  if (d == 3) {
    // -d^2/dt^2 has multiplier omega^2.
    return map_profiles(
        psi,
        [&](std::span<const double> p) { return spectral::apply(p, h, [](double w) { return std::complex<double>(w * w, 0.0); }); },
        psi.parity);
  }
  if (d == 2) {
    check_tails(psi, tail_tol, "lambda_filter");
    // H d/dt: (-i sgn w)(i w) = |w|.
    return map_profiles(
        psi,
        [&](std::span<const double> p) {
          return spectral::apply(p, h, [](double w) { return spectral::hilbert(w) * spectral::derivative(w, 1); });
        },
        psi.parity);
  }
  throw ValidationError("lambda_filter: d must be 2 or 3, got " + std::to_string(d));
}

std::vector<double> fbp_invert(const Sinogram& psi, int d, const std::vector<std::vector<double>>& points) {
  if (psi.d() != d) throw ValidationError("fbp_invert: sinogram dimension differs from d");
  const Sinogram filtered = lambda_filter(psi, d);
  auto out = dual_radon(filtered, points);
  const double c = 1.0 / (2.0 * std::pow(2.0 * kPi, d - 1));
  for (double& v : out) v *= c;
  return out;
}

PairingResult ridge_pairing_check(int m, const XiPoint& p, const TestFunctionRd& phi, const BetaSpec& beta,
                                  const PairingOptions& opt) {
  const int d = phi.dim();
  if (p.dim() != d) throw ValidationError("ridge_pairing_check: dimension mismatch");
  if (d != 2 && d != 3) throw ValidationError("ridge_pairing_check: d must be 2 or 3");
  if (phi.moment_order() < m) {
    throw MomentError("ridge_pairing_check: test function has " + std::to_string(phi.moment_order()) +
                      " vanishing moments, m = " + std::to_string(m) + " needs at least m");
  }
  const double b = beta(p);
  const UnitVector& n = p.n;

  // Direct integral in Cartesian coordinates: trapezoid over the outer axes,
  // Gauss-Legendre panels over the axis most aligned with n, split at the kink.
  int inner = 0;
  for (int i = 1; i < d; ++i)
    if (std::abs(n[i]) > std::abs(n[inner])) inner = i;
  std::vector<int> outer;
  for (int i = 0; i < d; ++i)
    if (i != inner) outer.push_back(i);
  const double R = 9.0 * phi.sigma();
  const auto& c = phi.center();
  const int no = static_cast<int>(std::lround(2.0 * R / opt.outer_h)) + 1;
  const double ho = 2.0 * R / (no - 1);
  using GL = boost::math::quadrature::gauss<double, 20>;

  auto inner_integral = [&](std::vector<double>& x, double& abs_acc) {
    const double lo = c[static_cast<std::size_t>(inner)] - R;
    const double hi = c[static_cast<std::size_t>(inner)] + R;
    double rest = -p.t;
    for (int i : outer) rest += n[i] * x[static_cast<std::size_t>(i)];
    const double kink = -rest / n[inner];
    std::vector<double> cuts{lo};
    if (kink > lo && kink < hi) cuts.push_back(kink);
    cuts.push_back(hi);
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const int panels = std::max(1, static_cast<int>(std::ceil((cuts[s + 1] - cuts[s]) / opt.panel)));
      const double w = (cuts[s + 1] - cuts[s]) / panels;
      for (int q = 0; q < panels; ++q) {
        const double a = cuts[s] + q * w;
        total += GL::integrate(
            [&](double u) {
              x[static_cast<std::size_t>(inner)] = u;
              const double v = sigma_m(m, rest + n[inner] * u) * phi(x);
              abs_acc += std::abs(v);
              return v;
            },
            a, a + w);
      }
    }
    return total;
  };

  const std::size_t rows = d == 2 ? static_cast<std::size_t>(no) : static_cast<std::size_t>(no) * no;
  std::vector<double> row_val(rows, 0.0);
  std::vector<double> row_abs(rows, 0.0);
  parallel_for(rows, [&](std::size_t r) {
    std::vector<double> x(static_cast<std::size_t>(d), 0.0);
    double w = 1.0;
    std::size_t rest = r;
    for (int i : outer) {
      const int k = static_cast<int>(rest % static_cast<std::size_t>(no));
      rest /= static_cast<std::size_t>(no);
      x[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)] - R + k * ho;
      if (k == 0 || k == no - 1) w *= 0.5;
    }
    double abs_acc = 0.0;
    row_val[r] = w * inner_integral(x, abs_acc);
    row_abs[r] = w * abs_acc;
  });
  double lhs = 0.0;
  double mass = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    lhs += row_val[r];
    mass += row_abs[r];
  }
  const double cell = std::pow(ho, d - 1);
  lhs *= b * cell;

  // Radon side: hyperplane quadrature along n, then A applied m times.
  double nc = n.dot(c);
  const double T = std::max(std::abs(p.t) + 1.0, std::abs(nc) + R);
  const TGrid tg = TGrid::covering(T, opt.h_t);
  Sinogram prof = radon([&](std::span<const double> x) { return phi(x); }, DirectionGrid::single(n), tg, opt.radon);
  for (int k = 0; k < m; ++k) prof = antider_A(prof);
  const double sign = m % 2 == 0 ? 1.0 : -1.0;
  const double rhs = sign * b * prof.interpolate(0, p.t);

  PairingResult res{lhs, rhs, 0.0};
  const double eps = std::max(1e-300, 1e-14 * b * mass * cell);
  res.rel_err = std::abs(lhs - rhs) / std::max(std::abs(lhs), eps);
  return res;
}

GreenResult green_identity_check(const RidgeNetwork& net, const TestFunctionXi& psi, const GreenOptions& opt) {
  const int d = net.dim();
  const int m = net.m();
  if (d != 2 && d != 3) throw ValidationError("green_identity_check: d must be 2 or 3");
  const Parity expected = m % 2 == 0 ? Parity::Even : Parity::Odd;
  if (psi.parity() != expected) {
    throw ParityError("green_identity_check: m = " + std::to_string(m) + " needs a " + to_string(expected) +
                      " test function, got " + to_string(psi.parity()));
  }
  if (psi.moment_order() < m) {
    throw MomentError("green_identity_check: test function moment order " + std::to_string(psi.moment_order()) +
                      " is below m = " + std::to_string(m));
  }
  if (static_cast<int>(psi.angular().terms.front().exponents.size()) != d) {
    throw ValidationError("green_identity_check: test function dimension differs from the network");
  }

  const auto grid = DirectionGrid::for_dimension(d, opt.n_dirs);
  TGrid tg = default_tgrid(d, opt.L, opt.h_t);
  if (tg.T() < psi.support_halfwidth()) tg = TGrid::covering(psi.support_halfwidth(), opt.h_t);
  const Sinogram S = sample_sinogram([&](const UnitVector& n, double t) { return psi(n, t); }, grid, tg, psi.parity());

  const auto mu = measure_from_network(net);
  const auto tau = signed_part(mu, m, SignedPart::Tau);
  const double c = 2.0 * std::pow(2.0 * kPi, d - 1);
  GreenResult res;
  for (const auto& a : tau.atoms()) res.rhs += c * a.weight * net.beta()(a.point) * psi(a.point);
  double absum = 0.0;
  for (const auto& a : mu.atoms()) absum += std::abs(a.weight * net.beta()(a.point));
  res.scale = c * absum * S.max_abs();
  if (net.size() == 0) return res;

  const Sinogram Q = lambda_filter(dt_m(S, m), d);
  const int ng = static_cast<int>(std::lround(2.0 * opt.L / opt.h)) + 1;
  const double hx = 2.0 * opt.L / (ng - 1);
  const std::size_t rows = d == 2 ? static_cast<std::size_t>(ng) : static_cast<std::size_t>(ng) * ng;
  std::vector<double> row_sum(rows, 0.0);
  std::vector<double> row_edge(rows, 0.0);
  parallel_for(rows, [&](std::size_t r) {
    std::vector<double> x(static_cast<std::size_t>(d));
    double w_outer = 1.0;
    bool outer_edge = false;
    std::size_t rest = r;
    for (int a = 1; a < d; ++a) {
      const int k = static_cast<int>(rest % static_cast<std::size_t>(ng));
      rest /= static_cast<std::size_t>(ng);
      x[static_cast<std::size_t>(a)] = -opt.L + k * hx;
      if (k == 0 || k == ng - 1) {
        w_outer *= 0.5;
        outer_edge = true;
      }
    }
    double sum = 0.0;
    double edge = 0.0;
    for (int i = 0; i < ng; ++i) {
      x[0] = -opt.L + i * hx;
      const double g = dual_radon(Q, x);
      const bool e = outer_edge || i == 0 || i == ng - 1;
      if (e) edge = std::max(edge, std::abs(g));
      const double w = (i == 0 || i == ng - 1) ? 0.5 : 1.0;
      sum += w * net(x) * g;
    }
    row_sum[r] = w_outer * sum;
    row_edge[r] = edge;
  });
  double lhs = 0.0;
  double edge = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    lhs += row_sum[r];
    edge = std::max(edge, row_edge[r]);
  }
  const double sign = m % 2 == 0 ? 1.0 : -1.0;
  res.lhs = sign * lhs * std::pow(hx, d);
  res.truncation_bound = growth_bound(net, opt.L * std::sqrt(double(d))) * edge;
  const double reference = res.rhs != 0.0 ? std::abs(res.rhs) : res.scale;
  if (res.truncation_bound > opt.truncation * reference) {
    throw TruncationError("green_identity_check: box truncation not certified (bound " +
                          std::to_string(res.truncation_bound) + " vs reference " + std::to_string(reference) + ")");
  }
  const double eps = std::max(1e-300, 1e-12 * res.scale);
  res.rel_err = std::abs(res.lhs - res.rhs) / std::max(std::abs(res.lhs), eps);
  return res;
}

}  // namespace ridgetv
