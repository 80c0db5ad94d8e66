#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ridgetv/xi_geometry.hpp"

using namespace ridgetv;

namespace {

XiPoint pt(double a, double b, double t) { return {UnitVector({a, b}), t}; }

AtomicMeasure random_measure(std::mt19937_64& rng, int d, int K) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  AtomicMeasure mu(d);
  for (int k = 0; k < K; ++k) {
    std::vector<double> v(static_cast<std::size_t>(d));
    for (auto& x : v) x = g(rng);
    mu.add(u(rng), {UnitVector::normalized(v), u(rng)});
  }
  return mu;
}

}  // namespace

TEST(UnitVector, RejectsNonUnit) {
  EXPECT_THROW(UnitVector({1.0, 1.0}), ValidationError);
  EXPECT_THROW(UnitVector(std::vector<double>{}), ValidationError);
  EXPECT_NO_THROW(UnitVector({0.6, 0.8}));
}

TEST(UnitVector, NormalizedHasUnitLength) {
  const auto n = UnitVector::normalized({3.0, -4.0, 12.0});
  EXPECT_NEAR(n[0] * n[0] + n[1] * n[1] + n[2] * n[2], 1.0, 1e-15);
  EXPECT_THROW(UnitVector::normalized({0.0, 0.0}), ValidationError);
}

TEST(UnitVector, DotChecksDimension) {
  const auto n = UnitVector::from_angle(0.0);
  const double x3[3] = {1.0, 2.0, 3.0};
  EXPECT_THROW(n.dot(x3), ValidationError);
}

TEST(Involute, Examples) {
  const auto a = involute(pt(1, 0, 0.5));
  EXPECT_EQ(a.n[0], -1.0);
  EXPECT_EQ(a.n[1], -0.0);
  EXPECT_EQ(a.t, -0.5);
  const auto b = involute(pt(0, 1, 0.0));
  EXPECT_EQ(b.n[1], -1.0);
  EXPECT_EQ(b.t, 0.0);
}

TEST(Involute, IsAnInvolution) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const XiPoint p{UnitVector::from_angle(u(rng)), u(rng)};
    EXPECT_EQ(involute(involute(p)), p);
  }
}

TEST(ReflectMeasure, Examples) {
  AtomicMeasure mu(2);
  mu.add(2.0, pt(1, 0, 1.0));
  const auto r = reflect_measure(mu);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r.atoms()[0].weight, 2.0);
  EXPECT_EQ(r.atoms()[0].point.n[0], -1.0);
  EXPECT_EQ(r.atoms()[0].point.t, -1.0);
  EXPECT_TRUE(reflect_measure(AtomicMeasure(2)).empty());
}

TEST(ReflectMeasure, PreservesTv) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    const auto mu = random_measure(rng, 3, 5);
    EXPECT_NEAR(tv_norm(reflect_measure(mu)), tv_norm(mu), 1e-14);
  }
}

TEST(SignedPart, SingleDiracM2) {
  AtomicMeasure mu(2);
  const auto p = pt(0.6, 0.8, 0.3);
  mu.add(1.0, p);
  const auto tau = signed_part(mu, 2, SignedPart::Tau);
  ASSERT_EQ(tau.size(), 2u);
  EXPECT_EQ(tau.atoms()[0].weight, 0.5);
  EXPECT_EQ(tau.atoms()[0].point, p);
  EXPECT_EQ(tau.atoms()[1].weight, 0.5);
  EXPECT_EQ(tau.atoms()[1].point, involute(p));
  const auto nu = signed_part(mu, 2, SignedPart::Nu);
  ASSERT_EQ(nu.size(), 2u);
  EXPECT_EQ(nu.atoms()[1].weight, -0.5);
}

TEST(SignedPart, EvenMeasureHasNoNuPart) {
  AtomicMeasure mu(2);
  const auto p = pt(0.6, -0.8, 1.2);
  mu.add(1.5, p);
  mu.add(1.5, involute(p));
  EXPECT_NEAR(measure_distance(signed_part(mu, 2, SignedPart::Tau), mu), 0.0, 1e-15);
  EXPECT_TRUE(signed_part(mu, 2, SignedPart::Nu).empty());
  // for odd m the same measure is all nu
  EXPECT_TRUE(signed_part(mu, 3, SignedPart::Tau).empty());
}

TEST(SignedPart, RandomBounds) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    auto mu = random_measure(rng, 2, 4);
    const auto a = mu.atoms()[0];
    mu.add(0.7, involute(a.point));
    for (int m : {2, 3}) {
      const double tv = tv_norm(mu);
      const double t = tv_norm(signed_part(mu, m, SignedPart::Tau));
      const double n = tv_norm(signed_part(mu, m, SignedPart::Nu));
      EXPECT_LE(t, tv + 1e-12);
      EXPECT_LE(n, tv + 1e-12);
      EXPECT_LE(t + n, 2.0 * tv + 1e-12);
    }
  }
}

TEST(TvNorm, Examples) {
  AtomicMeasure a(2);
  a.add(1.0, pt(1, 0, 0.2));
  a.add(-1.0, pt(1, 0, 0.2));
  EXPECT_EQ(tv_norm(a), 0.0);
  AtomicMeasure b(2);
  b.add(2.0, pt(1, 0, 0.2));
  b.add(-3.0, pt(0, 1, 0.2));
  EXPECT_EQ(tv_norm(b), 5.0);
}

TEST(TvNorm, Subadditive) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_measure(rng, 2, 3);
    const auto b = random_measure(rng, 2, 4);
    EXPECT_LE(tv_norm(a + b), tv_norm(a) + tv_norm(b) + 1e-12);
  }
}

TEST(AtomicMeasure, MergesWithinTolerance) {
  AtomicMeasure a(2);
  a.add(1.0, pt(1, 0, 0.2));
  a.add(2.0, {UnitVector::from_angle(1e-12), 0.2 + 1e-12});
  a.add(1.0, pt(1, 0, 0.2 + 1e-6));
  const auto m = a.merged();
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.atoms()[0].weight, 3.0);
}

TEST(AtomicMeasure, RejectsBadAtoms) {
  AtomicMeasure a(2);
  EXPECT_THROW(a.add(1.0, {UnitVector({0.0, 0.0, 1.0}), 0.0}), ValidationError);
  EXPECT_THROW(a.add(std::nan(""), pt(1, 0, 0)), ValidationError);
  EXPECT_THROW(AtomicMeasure(2, {{0.0, pt(1, 0, 0)}}), ValidationError);
}

TEST(Canonicalize, Examples) {
  const auto c = canonicalize(pt(-1, 0, 2.0));
  EXPECT_EQ(c.flip, -1);
  EXPECT_EQ(c.point.n[0], 1.0);
  EXPECT_EQ(c.point.t, -2.0);
  const auto u = canonicalize(pt(1, 0, -2.0));
  EXPECT_EQ(u.flip, 1);
  EXPECT_EQ(u.point, pt(1, 0, -2.0));
}

TEST(Canonicalize, ClassInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const XiPoint p{UnitVector::from_angle(u(rng)), u(rng)};
    EXPECT_EQ(canonicalize(p).point, canonicalize(involute(p)).point);
  }
  // first coordinate zero: the second decides
  EXPECT_EQ(canonicalize(pt(0, -1, 1.0)).flip, -1);
}
