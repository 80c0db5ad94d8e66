#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "ridgetv/lizorkin.hpp"

using namespace ridgetv;

TEST(Hermite, LowOrders) {
  EXPECT_EQ(hermite_he(0, 1.3), 1.0);
  EXPECT_EQ(hermite_he(1, 1.3), 1.3);
  EXPECT_NEAR(hermite_he(2, 1.3), 1.3 * 1.3 - 1.0, 1e-15);
  EXPECT_NEAR(hermite_he(4, 0.7), std::pow(0.7, 4) - 6 * 0.49 + 3, 1e-14);
}

TEST(GaussianDerivative, MatchesFiniteDifferences) {
  const double h = 1e-4;
  for (int p = 0; p < 5; ++p) {
    for (double t : {-1.3, 0.2, 2.0}) {
      const double fd = (gaussian_derivative(p, 0.8, t + h) - gaussian_derivative(p, 0.8, t - h)) / (2 * h);
      EXPECT_NEAR(gaussian_derivative(p + 1, 0.8, t), fd, 1e-6);
    }
  }
}

TEST(LizorkinRd, LaplacianOfGaussianMomentsVanish) {
  const auto phi = make_lizorkin_rd(2, 1, 1.0);
  const auto tab = moment_check(phi, 1, 1e-10);
  EXPECT_TRUE(tab.all_pass_below(2));
}

TEST(LizorkinRd, K2MomentsVanishThroughDegree3) {
  const auto phi = make_lizorkin_rd(2, 2, 1.0, {0.3, -0.2});
  const auto tab = moment_check(phi, 3, 1e-9);
  EXPECT_TRUE(tab.all_pass_below(4));
  EXPECT_GE(tab.vanishing_order(), 4);
}

TEST(LizorkinRd, PlainGaussianFailsOrderZero) {
  const auto g = make_lizorkin_rd(2, 0, 1.0, {}, false);
  EXPECT_EQ(moment_check(g, 0).vanishing_order(), 0);
}

TEST(LizorkinRd, ClosedFormRadonMatchesGaussian) {
  const auto g = make_lizorkin_rd(2, 0, 1.3, {}, false);
  for (double t : {0.0, 0.7, 2.5})
    EXPECT_NEAR(g.radon(UnitVector::from_angle(0.4), t), oracle::gaussian_line_integral(1.3, t), 1e-13);
}

TEST(LizorkinRd, FourierTransformVanishesToOrder2k) {
  // log-log slope of |F phi(omega)| between two small frequencies
  for (int k : {1, 2}) {
    const auto phi = make_lizorkin_rd(2, k, 1.0);
    auto F = [&](double w) {
      return oracle::fourier_transform_2d([&](std::span<const double> x) { return phi(x); }, w * 0.6, w * 0.8);
    };
    const double w1 = 0.05, w2 = 0.1;
    const double slope = std::log(std::abs(F(w2)) / std::abs(F(w1))) / std::log(w2 / w1);
    EXPECT_GE(slope, 2 * k - 0.1);
  }
}

TEST(LizorkinXi, EvenConstantSecondDerivative) {
  const auto psi = make_lizorkin_xi(Parity::Even, 2, 1.0);
  const auto n = UnitVector::from_angle(0.5);
  for (double t : {0.3, 1.1}) EXPECT_EQ(psi(n, t), psi(-n, -t));
  const UnitVector dirs[] = {n};
  EXPECT_TRUE(moment_check(psi, 1, dirs).all_pass_below(2));
}

TEST(LizorkinXi, OddByCoordinateFactor) {
  const auto psi = make_lizorkin_xi(Parity::Odd, 2, 1.0, 0.0, AngularFactor::coordinate(2, 0));
  const auto n = UnitVector::from_angle(0.5);
  for (double t : {0.3, 1.1}) EXPECT_EQ(psi(n, t), -psi(-n, -t));
  EXPECT_NE(psi(n, 0.3), 0.0);
}

TEST(LizorkinXi, DegenerateSymmetrization) {
  // h = g' is odd in t and a = 1, so the even part vanishes
  EXPECT_THROW(make_lizorkin_xi(Parity::Even, 1, 1.0), DegenerateError);
  EXPECT_THROW(make_lizorkin_xi(Parity::None, 2, 1.0), ValidationError);
  EXPECT_THROW(make_lizorkin_xi(Parity::Even, 0, 1.0), ValidationError);
}

TEST(LizorkinXi, DerivativesInClosedForm) {
  const auto psi = make_lizorkin_xi(Parity::Even, 3, 0.7, 0.4, AngularFactor::coordinate(2, 1));
  const auto n = UnitVector::from_angle(1.2);
  const double h = 1e-4;
  for (double t : {-0.5, 0.1, 0.9}) {
    const double fd = (psi.dt(n, t + h, 1) - psi.dt(n, t - h, 1)) / (2 * h);
    EXPECT_NEAR(psi.dt(n, t, 2), fd, 1e-5 * std::max(1.0, std::abs(fd)));
  }
}

TEST(LizorkinXi, FamilyHasMatchingParity) {
  const auto fam2 = make_lizorkin_xi_family(2, 2, 10, 3);
  ASSERT_EQ(fam2.size(), 10u);
  for (const auto& f : fam2) {
    EXPECT_EQ(f.parity(), Parity::Even);
    EXPECT_GE(f.moment_order(), 2);
  }
  for (const auto& f : make_lizorkin_xi_family(3, 3, 4, 3)) EXPECT_EQ(f.parity(), Parity::Odd);
  // deterministic in the seed
  const auto again = make_lizorkin_xi_family(2, 2, 10, 3);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(again[i].tag(), fam2[i].tag());
}

TEST(MomentCheck, HermiteProfile) {
  const double sigma = 0.9;
  auto h4 = [&](double t) { return gaussian_derivative(4, sigma, t); };
  const auto tab = moment_check(h4, 4, 0.0, 12.0);
  EXPECT_TRUE(tab.all_pass_below(4));
  EXPECT_EQ(tab.vanishing_order(), 4);
  for (const auto& e : tab.entries) {
    EXPECT_NEAR(e.value, oracle::hermite_moment(4, e.order, sigma), 1e-9);
  }
}
