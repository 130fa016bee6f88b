#include <gtest/gtest.h>

#include <random>

#include "vecf/tensor.hpp"

using namespace vecf;

namespace {

const Vec4 e0{{1, 0, 0, 0}}, e1{{0, 1, 0, 0}};

// signature (-,+,+,+) iff the spatial block is positive definite and det g < 0
bool lorentzian_by_minors(const Mat4& g) {
  const double m1 = g(1, 1);
  const double m2 = g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1);
  const double m3 = g(1, 1) * (g(2, 2) * g(3, 3) - g(2, 3) * g(3, 2)) - g(1, 2) * (g(2, 1) * g(3, 3) - g(2, 3) * g(3, 1)) +
                    g(1, 3) * (g(2, 1) * g(3, 2) - g(2, 2) * g(3, 1));
  return m1 > 0 && m2 > 0 && m3 > 0 && determinant(g) < 0;
}

Vec4 random_vec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-3, 3);
  return Vec4{{d(rng), d(rng), d(rng), d(rng)}};
}

}  // namespace

TEST(Minkowski, IsDiagonal) {
  const Metric4 g = minkowski();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const double want = a != b ? 0.0 : (a == 0 ? -1.0 : 1.0);
      EXPECT_EQ(g(a, b), want);
      EXPECT_EQ(g.inv(a, b), want);
    }
  EXPECT_TRUE(g.is_minkowski());
}

TEST(Minkowski, Signature) {
  EXPECT_EQ(inner(e0, e0, minkowski()), -1.0);
  EXPECT_EQ(inner(e1, e1, minkowski()), 1.0);
}

TEST(RandomMetric, ZeroDeltaIsExactMinkowski) {
  EXPECT_TRUE(random_lorentzian_near_minkowski(0.0, 123).is_minkowski(0.0));
}

TEST(RandomMetric, DeterministicPerSeed) {
  const Metric4 a = random_lorentzian_near_minkowski(0.05, 42), b = random_lorentzian_near_minkowski(0.05, 42);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(a(i, j), b(i, j));
}

TEST(RandomMetric, PerturbationBoundedAndSymmetric) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Metric4 g = random_lorentzian_near_minkowski(0.05, s);
    const Mat4 eta = minkowski().components();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        EXPECT_LE(std::abs(g(i, j) - eta(i, j)), 0.05);
        EXPECT_EQ(g(i, j), g(j, i));
      }
  }
}

TEST(RandomMetric, ThousandSeedsAreLorentzian) {
  for (std::uint64_t s = 0; s < 1000; ++s)
    EXPECT_TRUE(lorentzian_by_minors(random_lorentzian_near_minkowski(0.05, s).components())) << "seed " << s;
}

TEST(RandomMetric, RejectsDeltaOutOfRange) {
  EXPECT_THROW(random_lorentzian_near_minkowski(-0.01, 1), std::invalid_argument);
  EXPECT_THROW(random_lorentzian_near_minkowski(0.2, 1), std::invalid_argument);
}

TEST(Metric, InverseWithinTolerance) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Metric4 g = random_lorentzian_near_minkowski(0.1, s);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        double p = 0.0;
        for (int m = 0; m < 4; ++m) p += g(a, m) * g.inv(m, b);
        EXPECT_NEAR(p, a == b ? 1.0 : 0.0, 1e-12);
      }
  }
}

TEST(Metric, RejectsBadComponents) {
  Mat4 g = minkowski().components();
  g(0, 1) = 0.1;
  EXPECT_THROW(Metric4{g}, std::invalid_argument);  // asymmetric
  Mat4 r = Mat4::identity();
  EXPECT_THROW(Metric4{r}, std::invalid_argument);  // Riemannian
  Mat4 z;
  z(0, 0) = -1;
  EXPECT_THROW(Metric4{z}, std::invalid_argument);  // singular
}

TEST(IndexGymnastics, LowerRestVector) {
  const Covec4 l = lower(e0, minkowski());
  EXPECT_EQ(l[0], -1.0);
  EXPECT_EQ(l[1], 0.0);
  EXPECT_EQ(l[2], 0.0);
  EXPECT_EQ(l[3], 0.0);
}

TEST(IndexGymnastics, RaiseLowerRoundTrip) {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Metric4 g = random_lorentzian_near_minkowski(0.1, rng());
    const Vec4 v = random_vec(rng);
    const Vec4 w = raise(lower(v, g), g);
    for (int a = 0; a < 4; ++a) worst = std::max(worst, std::abs(w[a] - v[a]));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(IndexGymnastics, InnerSymmetricAndBilinear) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 200; ++k) {
    const Metric4 g = random_lorentzian_near_minkowski(0.1, rng());
    const Vec4 v = random_vec(rng), w = random_vec(rng), z = random_vec(rng);
    EXPECT_EQ(inner(v, w, g), inner(w, v, g));
    Vec4 vz;
    for (int a = 0; a < 4; ++a) vz[a] = 2.0 * v[a] + z[a];
    EXPECT_NEAR(inner(vz, w, g), 2.0 * inner(v, w, g) + inner(z, w, g), 1e-12);
    const Covec4 lv = lower(v, g), lw = lower(w, g);
    EXPECT_EQ(inner(lv, lw, g), inner(lw, lv, g));
    EXPECT_NEAR(inner(lv, lw, g), inner(v, w, g), 1e-11);
  }
}

TEST(NormalizedVelocity, UnitTimelike) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-2, 2);
  for (int k = 0; k < 200; ++k) {
    const Metric4 g = random_lorentzian_near_minkowski(0.05, rng());
    const Vec4 u = normalized_velocity({d(rng), d(rng), d(rng)}, g);
    EXPECT_NEAR(inner(u, u, g), -1.0, 1e-12);
    EXPECT_GT(u[0], 0.0);
  }
}
