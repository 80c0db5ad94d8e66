#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "ridgetv/radon.hpp"

using namespace ridgetv;

namespace {

constexpr double kPi = std::numbers::pi;

double gauss2(std::span<const double> x) { return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])); }

Sinogram profile_sinogram(const std::function<double(double)>& f, double T = 12.0, double h = 0.05) {
  return sample_sinogram([&](const UnitVector&, double t) { return f(t); },
                         DirectionGrid::single(UnitVector::from_angle(0.0)), TGrid::covering(T, h));
}

double max_diff(const Sinogram& s, const std::function<double(double)>& f) {
  double e = 0.0;
  for (int i = 0; i < s.n_t(); ++i) e = std::max(e, std::abs(s.at(0, i) - f(s.tgrid[i])));
  return e;
}

}  // namespace

TEST(DirectionGrid, CircleHasExactAntipodes) {
  const auto g = DirectionGrid::uniform_circle(16);
  double w = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    w += g.weights[j];
    const auto a = static_cast<std::size_t>(g.antipode[j]);
    EXPECT_EQ(g.dirs[a], -g.dirs[j]);
  }
  EXPECT_NEAR(w, 2.0 * kPi, 1e-13);
}

TEST(DirectionGrid, FibonacciSphere) {
  const auto g = DirectionGrid::fibonacci_sphere(64);
  ASSERT_EQ(g.size(), 64u);
  double w = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    w += g.weights[j];
    EXPECT_EQ(g.dirs[static_cast<std::size_t>(g.antipode[j])], -g.dirs[j]);
  }
  EXPECT_NEAR(w, 4.0 * kPi, 1e-12);
  EXPECT_THROW(DirectionGrid::fibonacci_sphere(7), ValidationError);
}

TEST(TGrid, CoversInterval) {
  const auto g = TGrid::covering(3.0, 0.1);
  EXPECT_GE(g.T(), 3.0 - 1e-12);
  EXPECT_NEAR(g[0], -g[g.n - 1], 1e-15);
}

TEST(Radon, GaussianClosedForm) {
  const auto grid = DirectionGrid::uniform_circle(16);
  const auto tg = default_tgrid(2, 8.0, 0.05);
  const auto S = radon(gauss2, grid, tg, {8.0, 0.05});
  for (std::size_t j = 0; j < S.n_dir(); ++j)
    for (int i = 0; i < S.n_t(); ++i)
      if (std::abs(tg[i]) <= 4.0)
        EXPECT_NEAR(S.at(j, i) / oracle::gaussian_line_integral(1.0, tg[i]), 1.0, 1e-6);
  EXPECT_LE(parity_defect(S, Parity::Even), 1e-8);
}

TEST(Radon, ZeroFunction) {
  const auto S = radon([](std::span<const double>) { return 0.0; }, DirectionGrid::uniform_circle(8),
                       default_tgrid(2, 4.0, 0.1), {4.0, 0.1});
  EXPECT_EQ(S.max_abs(), 0.0);
}

TEST(Radon, OffCentreTestFunction) {
  const auto phi = make_lizorkin_rd(2, 1, 0.8, {0.5, -0.3});
  const auto grid = DirectionGrid::uniform_circle(12);
  const auto tg = default_tgrid(2, 8.0, 0.1);
  const auto S = radon([&](std::span<const double> x) { return phi(x); }, grid, tg, {8.0, 0.05});
  for (std::size_t j = 0; j < grid.size(); ++j)
    for (int i = 0; i < tg.n; i += 7) EXPECT_NEAR(S.at(j, i), phi.radon(grid.dirs[j], tg[i]), 1e-9);
}

TEST(Radon, TooSmallBoxIsAnExtentError) {
  EXPECT_THROW(radon(gauss2, DirectionGrid::uniform_circle(8), default_tgrid(2, 3.0, 0.1), {3.0, 0.1}),
               ExtentError);
}

TEST(Sinogram, InterpolationRange) {
  const auto S = profile_sinogram([](double t) { return std::exp(-t * t); }, 5.0, 0.05);
  EXPECT_NEAR(S.interpolate(0, 0.123), std::exp(-0.123 * 0.123), 5e-6);
  EXPECT_THROW(S.interpolate(0, 6.0), ExtentError);
}

TEST(DualRadon, ConstantAndOdd) {
  const auto grid = DirectionGrid::uniform_circle(64);
  const auto tg = TGrid::covering(5.0, 0.05);
  const auto c = sample_sinogram([](const UnitVector&, double) { return 1.5; }, grid, tg);
  const double x[2] = {0.3, -0.4};
  EXPECT_NEAR(dual_radon(c, x), 2.0 * kPi * 1.5, 1e-12);
  const auto lin = sample_sinogram([](const UnitVector&, double t) { return t; }, grid, tg, Parity::Odd);
  EXPECT_NEAR(dual_radon(lin, x), 0.0, 1e-8);
  const auto odd = sample_sinogram([](const UnitVector& n, double t) { return n[0] * std::exp(-t * t) + t * (1.0 + n[1] * n[1]); },
                                   grid, tg, Parity::Odd);
  EXPECT_NEAR(dual_radon(odd, x), 0.0, 1e-8);
}

TEST(DualRadon, QuadraticMoment) {
  const auto tg = TGrid::covering(5.0, 0.05);
  const double x2[2] = {0.7, -1.1};
  const auto s2 = sample_sinogram([](const UnitVector&, double t) { return t * t; }, DirectionGrid::uniform_circle(64),
                                  tg);
  EXPECT_NEAR(dual_radon(s2, x2), oracle::sphere_quadratic_moment(x2), 1e-10);
  const double x3[3] = {0.2, 0.5, -0.9};
  const auto s3 = sample_sinogram([](const UnitVector&, double t) { return t * t; },
                                  DirectionGrid::fibonacci_sphere(2048), tg);
  EXPECT_NEAR(dual_radon(s3, x3) / oracle::sphere_quadratic_moment(x3), 1.0, 2e-3);
}

TEST(Hilbert, SquaresToMinusIdentity) {
  auto g4 = [](double t) { return gaussian_derivative(4, 1.0, t); };
  const auto S = profile_sinogram(g4, 150.0);
  const auto HH = hilbert_t(hilbert_t(S));
  double e = 0.0;
  for (int i = 0; i < S.n_t(); ++i) e = std::max(e, std::abs(HH.at(0, i) + S.at(0, i)));
  EXPECT_LE(e, 1e-6);
}

TEST(Hilbert, EvenToOdd) {
  const auto S = profile_sinogram([](double t) { return gaussian_derivative(2, 1.0, t); }, 150.0);
  const auto H = hilbert_t(S);
  for (int i = 0; i < S.n_t(); i += 37) EXPECT_NEAR(H.at(0, i), -H.at(0, S.n_t() - 1 - i), 1e-12);
}

TEST(Hilbert, MatchesPrincipalValueQuadrature) {
  auto g1 = [](double t) { return gaussian_derivative(1, 1.0, t); };
  const auto H = hilbert_t(profile_sinogram(g1, 150.0));
  for (int i = H.n_t() / 2 - 40; i <= H.n_t() / 2 + 40; i += 8)
    EXPECT_NEAR(H.at(0, i), oracle::pv_hilbert(g1, H.tgrid[i]), 1e-6);
}

TEST(Hilbert, GaussianMatchesDawsonValue) {
  // H[exp(-t^2/2)](1) = (2/sqrt(pi)) D(1/sqrt(2)), D the Dawson integral.
  const double dawson_value = 0.5782895424442387;
  EXPECT_NEAR(oracle::pv_hilbert([](double t) { return std::exp(-0.5 * t * t); }, 1.0), dawson_value, 1e-12);
}

TEST(Dt, AnalyticDerivative) {
  const auto S = profile_sinogram([](double t) { return gaussian_derivative(0, 1.0, t); });
  EXPECT_LE(max_diff(dt_m(S, 1), [](double t) { return gaussian_derivative(1, 1.0, t); }), 1e-8);
  EXPECT_LE(max_diff(dt_m(S, 3), [](double t) { return gaussian_derivative(3, 1.0, t); }), 1e-8);
}

TEST(Dt, Composition) {
  const auto S = profile_sinogram([](double t) { return gaussian_derivative(2, 0.8, t - 0.3); });
  const auto a = dt_m(dt_m(S, 1), 1);
  const auto b = dt_m(S, 2);
  for (int i = 0; i < S.n_t(); ++i) EXPECT_NEAR(a.at(0, i), b.at(0, i), 1e-9);
}

TEST(AntiderA, RecoversGaussian) {
  const auto S = profile_sinogram([](double t) { return gaussian_derivative(1, 1.0, t); });
  EXPECT_LE(max_diff(antider_A(S), [](double t) { return gaussian_derivative(0, 1.0, t); }), 1e-8);
}

TEST(AntiderA, InverseOfDerivative) {
  const auto S = profile_sinogram([](double t) { return gaussian_derivative(4, 1.0, t); });
  const auto a = antider_A(dt_m(S, 1));
  const auto b = dt_m(antider_A(S), 1);
  for (int i = 0; i < S.n_t(); ++i) {
    EXPECT_NEAR(a.at(0, i), S.at(0, i), 1e-8);
    EXPECT_NEAR(b.at(0, i), S.at(0, i), 1e-8);
  }
}

TEST(AntiderA, NonzeroMeanRejected) {
  const auto S = profile_sinogram([](double t) { return std::exp(-t * t); });
  EXPECT_THROW(antider_A(S), MomentError);
}

TEST(LambdaFilter, ThreeDimensionsIsMinusSecondDerivative) {
  const auto S = profile_sinogram([](double t) { return gaussian_derivative(0, 1.0, t); });
  Sinogram S3 = S;
  S3.grid = DirectionGrid::single(UnitVector({0.0, 0.0, 1.0}));
  const auto L = lambda_filter(S3, 3);
  for (int i = 0; i < S.n_t(); ++i) EXPECT_NEAR(L.at(0, i), -gaussian_derivative(2, 1.0, S.tgrid[i]), 1e-8);
}

TEST(LambdaFilter, EvenStaysEvenAndLinear) {
  const auto grid = DirectionGrid::uniform_circle(32);
  const auto tg = default_tgrid(2, 8.0, 0.05);
  const auto p1 = make_lizorkin_xi(Parity::Even, 2, 0.7, 0.5, AngularFactor{{{1.0, {0, 0}}, {0.3, {2, 0}}}});
  const auto p2 = make_lizorkin_xi(Parity::Even, 4, 0.5, -0.8, AngularFactor{{{1.0, {1, 1}}, {0.5, {0, 0}}}});
  const auto a = sample_sinogram([&](const UnitVector& n, double t) { return p1(n, t); }, grid, tg, Parity::Even);
  const auto b = sample_sinogram([&](const UnitVector& n, double t) { return p2(n, t); }, grid, tg, Parity::Even);
  const auto ab =
      sample_sinogram([&](const UnitVector& n, double t) { return 2.0 * p1(n, t) - 0.5 * p2(n, t); }, grid, tg);
  const auto La = lambda_filter(a, 2);
  const auto Lb = lambda_filter(b, 2);
  const auto Lab = lambda_filter(ab, 2);
  EXPECT_LE(parity_defect(La, Parity::Even), 1e-8);
  for (std::size_t k = 0; k < ab.values.size(); ++k)
    EXPECT_NEAR(Lab.values[k], 2.0 * La.values[k] - 0.5 * Lb.values[k], 1e-10);
}

TEST(Fbp, ZeroAndLinearity) {
  const auto grid = DirectionGrid::uniform_circle(64);
  const auto tg = default_tgrid(2, 6.0, 0.1);
  const std::vector<std::vector<double>> pts{{0.0, 0.0}, {0.5, -0.25}, {1.2, 0.7}};
  const auto z = sample_sinogram([](const UnitVector&, double) { return 0.0; }, grid, tg);
  for (double v : fbp_invert(z, 2, pts)) EXPECT_EQ(v, 0.0);
  const auto f = make_lizorkin_rd(2, 2, 1.0);
  const auto g = make_lizorkin_rd(2, 1, 0.8, {0.4, 0.1});
  auto R = [&](const TestFunctionRd& phi, double s) {
    return sample_sinogram([&](const UnitVector& n, double t) { return s * phi.radon(n, t); }, grid, tg);
  };
  const auto rf = fbp_invert(R(f, 1.0), 2, pts);
  const auto rg = fbp_invert(R(g, 1.0), 2, pts);
  auto sum = R(f, 3.0);
  const auto sg = R(g, -2.0);
  for (std::size_t k = 0; k < sum.values.size(); ++k) sum.values[k] += sg.values[k];
  const auto rs = fbp_invert(sum, 2, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_NEAR(rs[i], 3.0 * rf[i] - 2.0 * rg[i], 1e-10);
}

TEST(Fbp, RoundTripD2) {
  const auto phi = make_lizorkin_rd(2, 2, 1.0);
  const auto grid = DirectionGrid::uniform_circle(256);
  const auto S = radon([&](std::span<const double> x) { return phi(x); }, grid, default_tgrid(2, 8.0, 0.1), {8.0, 0.1});
  std::vector<std::vector<double>> pts;
  for (double x = -3.0; x <= 3.0; x += 0.5)
    for (double y = -3.0; y <= 3.0; y += 0.5) pts.push_back({x, y});
  const auto rec = fbp_invert(S, 2, pts);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double want = phi(pts[i]);
    num += (rec[i] - want) * (rec[i] - want);
    den += want * want;
  }
  EXPECT_LE(std::sqrt(num / den), 2e-2);
}

TEST(RidgePairing, Example) {
  const auto phi = make_lizorkin_rd(2, 2, 1.0);
  const XiPoint p{UnitVector({1.0, 0.0}), 0.3};
  for (int m : {2, 3}) {
    const auto r = ridge_pairing_check(m, p, phi, BetaSpec::default_rational(m));
    EXPECT_LE(r.rel_err, 1e-3) << "m=" << m;
  }
}

TEST(RidgePairing, InactiveHalfSpace) {
  // phi lives around x1 = -6 while the neuron is active only for x1 > 2
  const auto phi = make_lizorkin_rd(2, 2, 0.5, {-6.0, 0.0});
  PairingOptions opt;
  opt.radon.L = 12.0;
  const auto r = ridge_pairing_check(2, {UnitVector({1.0, 0.0}), 2.0}, phi, BetaSpec::default_rational(2), opt);
  EXPECT_NEAR(r.lhs, 0.0, 1e-9);
  EXPECT_NEAR(r.rhs, 0.0, 1e-9);
}

TEST(GreenIdentity, SingleAtom) {
  const auto beta = BetaSpec::default_rational(2);
  const RidgeNetwork net(2, 2, {{0.9, {UnitVector::from_angle(0.6), 0.3}}}, beta);
  for (const auto& psi : make_lizorkin_xi_family(2, 2, 3, 17, 1.0, 0.5)) {
    const auto r = green_identity_check(net, psi);
    EXPECT_LE(r.rel_err, 1e-2) << psi.tag();
  }
}

TEST(GreenIdentity, OddPairAndZeroNetwork) {
  const auto beta = BetaSpec::default_rational(2);
  const XiPoint p{UnitVector::from_angle(0.4), 0.3};
  const RidgeNetwork odd(2, 2, {{1.0, p}, {-1.0, involute(p)}}, beta);
  const auto psi = make_lizorkin_xi(Parity::Even, 2, 0.5, 0.2);
  const auto r = green_identity_check(odd, psi);
  EXPECT_EQ(r.rhs, 0.0);
  EXPECT_LE(std::abs(r.lhs), 1e-2 * r.scale);
  const auto z = green_identity_check(RidgeNetwork(2, 2), psi);
  EXPECT_EQ(z.lhs, 0.0);
  EXPECT_EQ(z.rhs, 0.0);
}

TEST(GreenIdentity, Preconditions) {
  const RidgeNetwork net(2, 2, {{1.0, {UnitVector::from_angle(0.4), 0.3}}}, BetaSpec::default_rational(2));
  EXPECT_THROW(green_identity_check(net, make_lizorkin_xi(Parity::Odd, 2, 0.5, 0.0, AngularFactor::coordinate(2, 0))),
               ParityError);
  EXPECT_THROW(green_identity_check(net, make_lizorkin_xi(Parity::Even, 1, 0.5, 0.7)), MomentError);
}
