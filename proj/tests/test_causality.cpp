#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vecf/causality.hpp"

using namespace vecf;

namespace {

StatePoint state(double a2, double u2 = 0.0) {
  StatePoint s;
  s.transport.a2 = a2;
  s.u = velocity_from_u2(u2);
  return s;
}

}  // namespace

TEST(Slopes, ShearAtRest) {
  const SlopePair p = slope_s_pm_p2(velocity_from_u2(0.0), 0.3, 4.0);
  EXPECT_NEAR(p.plus, -0.5, 1e-15);
  EXPECT_NEAR(p.minus, 0.5, 1e-15);
}

TEST(Slopes, ShearBoostedAlongAxis) {
  const double r2 = std::sqrt(2.0);
  for (double th : {0.0, 2.0 * std::numbers::pi}) {
    const SlopePair p = slope_s_pm_p2(velocity_from_u2(1.0), th, 4.0);
    EXPECT_NEAR(p.plus, -(2.0 + 3.0 * r2) / 7.0, 1e-14);
    EXPECT_NEAR(p.minus, -(-2.0 + 3.0 * r2) / 7.0, 1e-14);
  }
  for (double u2 : {0.0, 0.5, 3.0, 50.0}) {
    const SlopePair a = slope_s_pm_p2(velocity_from_u2(u2), 0.0, 6.0), b = slope_p2_theta0_closed_form(u2, 6.0);
    EXPECT_NEAR(a.plus, b.plus, 1e-13);
    EXPECT_NEAR(a.minus, b.minus, 1e-13);
  }
}

TEST(Slopes, SoundAtRest) {
  const SlopePair p = slope_s_pm_p3(velocity_from_u2(0.0), 1.0, 6.0);
  EXPECT_NEAR(std::abs(p.plus), std::sqrt(8.0 / 9.0), 1e-14);
  EXPECT_NEAR(p.plus, -p.minus, 1e-14);
  const SlopePair q = slope_s_pm_p3(velocity_from_u2(0.0), 1.0, 4.0);
  EXPECT_NEAR(std::abs(q.plus), 1.0, 1e-14);
}

TEST(Slopes, FlowCone) {
  EXPECT_NEAR(slope_p1(velocity_from_u2(3.0), 0.0), -std::sqrt(3.0) / 2.0, 1e-15);
  EXPECT_NEAR(slope_p1(velocity_from_u2(3.0), std::numbers::pi / 2.0), 0.0, 1e-15);
  EXPECT_THROW(slope_p1(Vec4{{1, 1, 0, 0}}, 0.0), std::invalid_argument);
}

// Slopes are the xi_0 roots for xi_bar = (cos theta, sin theta, 0).
TEST(Slopes, MatchNumericRoots) {
  for (double a2 : {4.5, 6.0, 11.0})
    for (double u2 : {0.0, 0.7, 4.0})
      for (double th = 0.0; th < 6.3; th += 0.41) {
        const StatePoint s = state(a2, u2);
        const std::array<double, 3> xb{std::cos(th), std::sin(th), 0.0};
        const SlopePair p2 = slope_s_pm_p2(s.u, th, a2), p3 = slope_s_pm_p3(s.u, th, a2);
        const auto n2 = numeric_roots_in_xi0(s, xb, FactorId::p2).roots;
        const auto n3 = numeric_roots_in_xi0(s, xb, FactorId::p3).roots;
        ASSERT_EQ(n2.size(), 2u);
        ASSERT_EQ(n3.size(), 2u);
        EXPECT_NEAR(std::min(p2.plus, p2.minus), n2[0], 1e-9);
        EXPECT_NEAR(std::max(p2.plus, p2.minus), n2[1], 1e-9);
        EXPECT_NEAR(std::min(p3.plus, p3.minus), n3[0], 1e-9);
        EXPECT_NEAR(std::max(p3.plus, p3.minus), n3[1], 1e-9);
      }
}

TEST(CriticalAngle, ExtremizersOnAxis) {
  for (double a2 : {4.0, 5.0, 6.0, 8.0, 10.0})
    for (double u2 : {0.0, 0.25, 1.0, 9.0, 100.0}) {
      const CriticalAngleReport r = critical_angle_check(velocity_from_u2(u2), a2);
      EXPECT_TRUE(r.ok()) << "a2 " << a2 << " u2 " << u2;
    }
  const CriticalAngleReport r = critical_angle_check(velocity_from_u2(2.0), 6.0);
  EXPECT_FALSE(r.branch[0].flat);
  EXPECT_LE(r.branch[0].distance_to_axis, 1e-6);
}

TEST(Cone, StrictForA2Six) {
  const ConeReport r = cone_containment(state(6.0, 4.0));
  EXPECT_EQ(r.overall, Verdict::strict);
  EXPECT_LT(r[WaveFamily::shear].max_abs_slope, 1.0);
  EXPECT_LT(r[WaveFamily::sound].max_abs_slope, 1.0);
  EXPECT_EQ(r[WaveFamily::gravity].max_abs_slope, 1.0);
  EXPECT_EQ(r.v_max_coupled, 1.0);
}

TEST(Cone, BoundaryForA2Four) {
  for (double u2 : {0.0, 1.0, 25.0}) {
    const ConeReport r = cone_containment(state(4.0, u2));
    EXPECT_EQ(r.overall, Verdict::boundary);
    EXPECT_EQ(r[WaveFamily::sound].verdict, Verdict::boundary);
    EXPECT_EQ(r[WaveFamily::shear].verdict, Verdict::strict);
  }
}

TEST(Cone, ViolatedBelowFour) {
  const ConeReport r = cone_containment(state(3.5));
  EXPECT_EQ(r.overall, Verdict::violated);
  EXPECT_GT(r[WaveFamily::sound].max_abs_slope, 1.0);
  EXPECT_THROW(max_characteristic_speed(state(3.5)), std::domain_error);
}

TEST(Cone, CurvedMetricUsesNumericRoots) {
  StatePoint s;
  s.transport.a2 = 6.0;
  s.g = random_lorentzian_near_minkowski(0.05, 17);
  s.u = normalized_velocity({0.5, 0.2, -0.1}, s.g);
  const ConeReport r = cone_containment(s, 400);
  EXPECT_EQ(r.overall, Verdict::strict);
  EXPECT_LT(r.v_max_fluid, 1.0);
}

TEST(Cone, RejectsUnnormalized) {
  StatePoint s;
  s.u = Vec4{{1.0, 0.5, 0.0, 0.0}};
  EXPECT_THROW(cone_containment(s), std::invalid_argument);
}

TEST(MaxSpeed, RestValues) {
  EXPECT_NEAR(max_characteristic_speed(state(4.0)), 1.0, 1e-12);
  EXPECT_NEAR(max_characteristic_speed(state(9.0)), std::sqrt(22.0 / 27.0), 1e-12);
  EXPECT_NEAR(max_characteristic_speed(state(6.0)), std::sqrt(8.0 / 9.0), 1e-12);
  EXPECT_EQ(max_characteristic_speed(state(6.0), true), 1.0);
}

TEST(MaxSpeed, DecreasesWithA2) {
  double prev = 2.0;
  for (double a2 = 4.0; a2 <= 12.0; a2 += 0.5) {
    const double v = max_characteristic_speed(state(a2));
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(Scan, ThreadCountInvariant) {
  const std::vector<double> a2{4, 5, 6, 8, 10};
  const auto a = causality_scan(a2, 10.0, 11, 180, 4.0, 1);
  const auto b = causality_scan(a2, 10.0, 11, 180, 4.0, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].smax_p2, b[k].smax_p2);
    EXPECT_EQ(a[k].smax_p3, b[k].smax_p3);
    EXPECT_EQ(a[k].theta_max_p2, b[k].theta_max_p2);
    EXPECT_EQ(a[k].verdict, b[k].verdict);
  }
  for (const ScanRow& row : a) {
    EXPECT_LT(row.smax_p2, 1.0);
    EXPECT_EQ(row.verdict, row.a2 == 4.0 ? Verdict::boundary : Verdict::strict);
  }
}

TEST(Scan, RejectsBadGrid) {
  EXPECT_THROW(causality_scan({}, 1.0, 3, 10), std::invalid_argument);
  EXPECT_THROW(causality_scan({6.0}, 1.0, 0, 10), std::invalid_argument);
}

TEST(RegionMap, ClassifiesAndIsThreadInvariant) {
  const std::vector<double> a1{2.0, 4.0, 6.0}, a2{2.0, 4.0, 6.0, 10.0}, us{0.0, 0.5, 2.0, 8.0};
  const auto a = hyperbolicity_region_map(a1, a2, us, 72, 1);
  const auto b = hyperbolicity_region_map(a1, a2, us, 72, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].label, b[k].label);
    EXPECT_EQ(a[k].max_slope, b[k].max_slope);
  }
  auto find = [&](double x, double y) {
    for (const RegionCell& c : a)
      if (c.a1 == x && c.a2 == y) return c;
    ADD_FAILURE() << "cell missing";
    return RegionCell{};
  };
  EXPECT_EQ(find(4.0, 4.0).label, RegionClass::causal_boundary);
  EXPECT_EQ(find(4.0, 6.0).label, RegionClass::causal_strict);
  EXPECT_EQ(find(4.0, 10.0).label, RegionClass::causal_strict);
  EXPECT_NE(find(4.0, 2.0).label, RegionClass::causal_strict);
  EXPECT_THROW(hyperbolicity_region_map({}, a2, us), std::invalid_argument);
}
