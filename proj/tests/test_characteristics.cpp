#include <gtest/gtest.h>

#include <cmath>

#include "vecf/characteristics.hpp"
#include "vecf/polynomial.hpp"
#include "vecf/verify.hpp"

using namespace vecf;

namespace {

StatePoint rest(double a2) {
  StatePoint s;
  s.transport.a2 = a2;
  return s;
}

StatePoint boosted(double a2, std::array<double, 3> v) {
  StatePoint s = rest(a2);
  s.u = normalized_velocity(v, s.g);
  return s;
}

const Covec4 e0{{1, 0, 0, 0}}, e1{{0, 1, 0, 0}};

}  // namespace

TEST(Factors, RestValues) {
  const StatePoint s = rest(4);
  EXPECT_NEAR(eval_factor(FactorId::p1, s, e0), 1.0 / 12.0, 1e-15);
  EXPECT_NEAR(eval_factor(FactorId::p2, s, e0), 16.0, 1e-13);
  EXPECT_NEAR(eval_factor(FactorId::p4, s, e0), 1.0, 1e-15);
  EXPECT_NEAR(eval_factor(FactorId::p3, s, e0), 144.0, 1e-12);
  EXPECT_NEAR(eval_factor(FactorId::p3, s, e1), -144.0, 1e-12);
}

TEST(Factors, DeterminantFactorizes) {
  const SuiteResult r = factorization_suite(2000, 7);
  EXPECT_LE(r.max_error, 1e-9) << "worst sample " << r.worst;
}

TEST(Factors, FactorizationIsDeterministic) {
  EXPECT_EQ(factorization_suite(200, 3).max_error, factorization_suite(200, 3, 1e-9, {}, 3).max_error);
}

TEST(Quartic, CollapsesAtA1Four) {
  const SuiteResult r = collapse_suite(2000, 7);
  EXPECT_LE(r.max_error, 1e-9);
}

TEST(Quartic, LeadingCoefficientVanishesOnlyAtA1Four) {
  for (double a2 : {4.0, 6.0, 10.0}) {
    const Vec4 u = normalized_velocity({0.3, 0.1, -0.4}, minkowski());
    const QuarticCoeffs q4 = extract_quartic_coeffs(4.0, a2, u, minkowski());
    EXPECT_LE(std::abs(q4.C), 1e-12 * std::max({1.0, std::abs(q4.A), std::abs(q4.B)}));
    EXPECT_LT(q4.holdout_residual, 1e-10);
    for (double a1 : {1.0, 2.0, 6.0}) {
      const QuarticCoeffs q = extract_quartic_coeffs(a1, a2, u, minkowski());
      const double predicted = a2 * (4.0 - a1) * inner(u, u, minkowski());
      EXPECT_GT(std::abs(q.C), 1e-6);
      EXPECT_EQ(std::signbit(q.C), std::signbit(predicted)) << "a1 " << a1 << " a2 " << a2;
    }
  }
}

TEST(ClosedRoots, RestValues) {
  const Vec4 u{{1, 0, 0, 0}};
  const std::array<double, 3> xb{1, 0, 0};
  const RootPair p2 = closed_form_roots_p2(xb, u, 4.0);
  EXPECT_NEAR(std::max(p2.plus, p2.minus), 0.5, 1e-15);
  EXPECT_NEAR(std::min(p2.plus, p2.minus), -0.5, 1e-15);
  const RootPair s6 = closed_form_roots_p3(xb, u, 6.0);
  EXPECT_NEAR(std::max(s6.plus, s6.minus), 0.94280904, 1e-8);
  EXPECT_NEAR(std::min(s6.plus, s6.minus), -0.94280904, 1e-8);
  const RootPair s4 = closed_form_roots_p3(xb, u, 4.0);
  EXPECT_NEAR(std::max(s4.plus, s4.minus), 1.0, 1e-15);
  EXPECT_NEAR(std::min(s4.plus, s4.minus), -1.0, 1e-15);
}

TEST(ClosedRoots, AnnihilateTheirFactors) {
  for (std::size_t k = 0; k < 200; ++k) {
    for (FactorId f : {FactorId::p2, FactorId::p3}) {
      const RootSample r = root_sample(f, 21, k);
      StatePoint s = rest(r.a2);
      s.u = r.u;
      for (double t : {r.closed.plus, r.closed.minus}) {
        const Covec4 xi{{t, r.xb[0], r.xb[1], r.xb[2]}};
        const FactorScales sc = factor_scales(s, xi);
        const double scale = f == FactorId::p2 ? std::sqrt(sc.p2) : sc.p3;
        EXPECT_LE(std::abs(eval_base_factor(f, s, xi)), 1e-12 * std::max(1.0, scale));
      }
    }
  }
}

TEST(ClosedRoots, AgreeWithBisection) {
  for (FactorId f : {FactorId::p2, FactorId::p3}) {
    const RootsSuiteResult r = roots_suite(f, 2000, 7);
    EXPECT_TRUE(r.all_real);
    EXPECT_LE(r.agreement.max_error, 1e-9);
    EXPECT_GE(r.min_gap, kRootDistinctness);
  }
}

TEST(ClosedRoots, RejectOutsideDomain) {
  EXPECT_THROW(closed_form_roots_p2({1, 0, 0}, Vec4{{1, 1, 0, 0}}, 6.0), std::invalid_argument);
  EXPECT_THROW(closed_form_roots_p3({0, 0, 0}, Vec4{{1, 0, 0, 0}}, 6.0), std::invalid_argument);
}

TEST(NumericRoots, LightConeAndFlow) {
  const StatePoint s = boosted(6, {0.5, 0.2, 0.0});
  const std::array<double, 3> xb{0.6, 0.8, 0.0};
  const NumericRoots lc = numeric_roots_in_xi0(s, xb, FactorId::p4);
  ASSERT_TRUE(lc.complete());
  EXPECT_NEAR(lc.roots[0], -1.0, 1e-11);
  EXPECT_NEAR(lc.roots[1], 1.0, 1e-11);
  EXPECT_EQ(lc.multiplicity, 10);

  const NumericRoots fl = numeric_roots_in_xi0(s, xb, FactorId::p1);
  ASSERT_TRUE(fl.complete());
  EXPECT_TRUE(fl.degenerate);
  EXPECT_EQ(fl.multiplicity, 4);
  EXPECT_NEAR(fl.roots[0], -(s.u[1] * xb[0] + s.u[2] * xb[1]) / s.u[0], 1e-11);

  EXPECT_THROW(numeric_roots_in_xi0(s, {0, 0, 0}, FactorId::p2), std::invalid_argument);
}

TEST(Hyperbolicity, StrictForLargeA2) {
  for (const StatePoint& s : {rest(5), boosted(5, {1.5, -0.5, 0.7})}) {
    for (FactorId f : {FactorId::p2, FactorId::p3}) {
      const HyperbolicityResult h = is_hyperbolic(s, f, 500);
      EXPECT_TRUE(h.hyperbolic);
      EXPECT_FALSE(h.light_cone_degenerate);
      EXPECT_GT(h.min_gap, 0.1);
    }
  }
}

TEST(Hyperbolicity, SoundOnLightConeAtA2Four) {
  const HyperbolicityResult h = is_hyperbolic(boosted(4, {0.8, 0.1, -0.3}), FactorId::p3, 200);
  EXPECT_TRUE(h.hyperbolic);
  EXPECT_TRUE(h.light_cone_degenerate);
}

TEST(Hyperbolicity, FailsForSmallA2AtSomeVelocity) {
  bool found = false;
  for (double v = 0.0; v <= 4.0 && !found; v += 0.25) {
    const HyperbolicityResult h = is_hyperbolic(boosted(0.5, {v, 0.0, 0.0}), FactorId::p2, 200);
    if (!h.hyperbolic) {
      found = true;
      EXPECT_TRUE(h.witness.has_value());
    }
  }
  EXPECT_TRUE(found);
  EXPECT_TRUE(is_hyperbolic(rest(0.5), FactorId::p2, 200).hyperbolic);
}

TEST(Hyperbolicity, RootsScaleWithCovector) {
  const StatePoint s = boosted(7, {0.4, 0.4, 0.1});
  const std::array<double, 3> xb{0.3, -0.5, 0.2}, xb3{0.9, -1.5, 0.6};
  for (FactorId f : {FactorId::p2, FactorId::p3}) {
    const auto a = numeric_roots_in_xi0(s, xb, f), b = numeric_roots_in_xi0(s, xb3, f);
    ASSERT_TRUE(a.complete() && b.complete());
    for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(b.roots[k], 3.0 * a.roots[k], 1e-10);
  }
}

TEST(Gevrey, Indices) {
  EXPECT_EQ(fluid_factor_set().hyperbolic_factor_count(), 7);
  EXPECT_EQ(fluid_factor_set().total_degree(), 10);
  EXPECT_EQ(gevrey_index(fluid_factor_set()), Rational::make(7, 6));
  EXPECT_EQ(coupled_factor_set().total_degree(), 30);
  EXPECT_EQ(gevrey_index(coupled_factor_set()), Rational::make(17, 16));
  EXPECT_EQ(gevrey_index(FactorSet{{{FactorId::p2, 2, 2}}}), Rational::make(2, 1));
  EXPECT_THROW(gevrey_index(FactorSet{{{FactorId::p3, 2, 1}}}), std::invalid_argument);
  EXPECT_THROW(gevrey_index(FactorSet{}), std::invalid_argument);
  EXPECT_EQ(Rational::make(14, -12).str(), "-7/6");
}

TEST(Polynomial, RealRoots) {
  const Polynomial p({6.0, -7.0, 0.0, 1.0});  // (x - 1)(x - 2)(x + 3)
  const auto r = real_roots_bisection(p);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r[0], -3.0, 1e-11);
  EXPECT_NEAR(r[1], 1.0, 1e-11);
  EXPECT_NEAR(r[2], 2.0, 1e-11);
  EXPECT_TRUE(real_roots_bisection(Polynomial({1.0, 0.0, 1.0})).empty());
  EXPECT_EQ(Polynomial({1.0, 2.0, 0.0}).degree(), 1);
  EXPECT_LE(3.0, p.cauchy_bound());
}
