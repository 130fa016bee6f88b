#pragma once

// Factored characteristic polynomials p1..p4 of the fluid/coupled symbol,
// the general-(a1, a2) quartic, closed-form and numeric xi_0 roots,
// hyperbolicity sampling and Gevrey-index bookkeeping.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "vecf/polynomial.hpp"
#include "vecf/symbol.hpp"
#include "vecf/tensor.hpp"

namespace vecf {

enum class FactorId { p1, p2, p3, p4 };

inline const char* to_string(FactorId f) {
  switch (f) {
    case FactorId::p1: return "p1";
    case FactorId::p2: return "p2";
    case FactorId::p3: return "p3";
    case FactorId::p4: return "p4";
  }
  return "?";
}

inline FactorId factor_from_string(const std::string& s) {
  if (s == "p1") return FactorId::p1;
  if (s == "p2") return FactorId::p2;
  if (s == "p3") return FactorId::p3;
  if (s == "p4") return FactorId::p4;
  throw std::invalid_argument("unknown factor id '" + s + "'");
}

/// The bracket of p2 written out component by component.
inline double p2_bracket(const StatePoint& s, const Covec4& xi) {
  const double a = s.transport.a2 - 1.0;
  const Vec4& u = s.u;
  const double xixi = inner(xi, xi, s.g);
  return a * (u[0] * u[0] * xi[0] * xi[0] + u[1] * u[1] * xi[1] * xi[1] + u[2] * u[2] * xi[2] * xi[2] +
              u[3] * u[3] * xi[3] * xi[3]) -
         xixi + 2.0 * a * (u[1] * u[2] * xi[1] * xi[2] + u[1] * u[3] * xi[1] * xi[3] + u[2] * u[3] * xi[2] * xi[3]) +
         2.0 * a * u[0] * xi[0] * (u[1] * xi[1] + u[2] * xi[2] + u[3] * xi[3]);
}

/// The same bracket in the grouping of the general-a1 determinant listing.
inline double p2_tilde_bracket(const StatePoint& s, const Covec4& xi) {
  const double a2 = s.transport.a2;
  const Vec4& u = s.u;
  const Vec4 xu = raise(xi, s.g);
  return (a2 - 1.0) * u[0] * u[0] * xi[0] * xi[0] + (a2 - 1.0) * u[1] * u[1] * xi[1] * xi[1] -
         u[2] * u[2] * xi[2] * xi[2] + a2 * u[2] * u[2] * xi[2] * xi[2] - 2.0 * u[2] * u[3] * xi[2] * xi[3] +
         2.0 * a2 * u[2] * u[3] * xi[2] * xi[3] - u[3] * u[3] * xi[3] * xi[3] + a2 * u[3] * u[3] * xi[3] * xi[3] +
         xi[0] * (2.0 * (-1.0 + a2) * xi[1] * u[0] * u[1] + 2.0 * (a2 - 1.0) * xi[2] * u[0] * u[2] -
                  2.0 * xi[3] * u[0] * u[3] + 2.0 * a2 * u[0] * u[3] * xi[3] - xu[0]) +
         xi[1] * (2.0 * (-1.0 + a2) * u[1] * u[2] * xi[2] + 2.0 * (a2 - 1.0) * u[1] * u[3] * xi[3] - xu[1]) -
         xi[2] * xu[2] - xi[3] * xu[3];
}

inline double eval_factor(FactorId which, const StatePoint& s, const Covec4& xi) {
  const double uxi = contract(s.u, xi);
  switch (which) {
    case FactorId::p1: {
      if (!(s.eps > 0.0)) throw std::invalid_argument("eval_factor(p1): energy density must be positive");
      const double eta = s.transport.eta(s.eps);
      const double e2 = eta * eta, x2 = uxi * uxi;
      return e2 * e2 * x2 * x2 / (12.0 * s.eps);
    }
    case FactorId::p2: {
      const double b = p2_bracket(s, xi);
      return b * b;
    }
    case FactorId::p3: {
      const double a2 = s.transport.a2;
      const double w = s.norm_u();
      const double xixi = inner(xi, xi, s.g);
      return -6.0 * ((a2 + 5.0) * a2 + (a2 * a2 + 7.0 * a2 - 8.0) * w) * uxi * uxi +
             6.0 * (a2 + 2.0) * (1.0 + 5.0 * w) * xixi;
    }
    case FactorId::p4: {
      const double xixi = inner(xi, xi, s.g);
      double r = 1.0;
      for (int k = 0; k < 10; ++k) r *= xixi;
      return r;
    }
  }
  throw std::invalid_argument("eval_factor: unknown factor id");
}

/// p1 p2 p3, the factored form of det m at a1 = 4.
inline double factored_fluid_det(const StatePoint& s, const Covec4& xi) {
  return eval_factor(FactorId::p1, s, xi) * eval_factor(FactorId::p2, s, xi) * eval_factor(FactorId::p3, s, xi);
}

/// Rounding scales: each factor with every term replaced by its absolute
/// value (|u^a xi_a| and |g^{ab} xi_a xi_b| summed termwise).
struct FactorScales {
  double uxi = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
};

inline FactorScales factor_scales(const StatePoint& s, const Covec4& xi) {
  const double eta = s.transport.eta(s.eps);
  const double a2 = s.transport.a2;
  const double w = std::abs(s.norm_u());
  double uxi = 0.0, xixi = 0.0;
  for (int a = 0; a < 4; ++a) {
    uxi += std::abs(s.u[a] * xi[a]);
    for (int b = 0; b < 4; ++b) xixi += std::abs(s.g.inv(a, b) * xi[a] * xi[b]);
  }
  const double e2 = eta * eta;
  const double b2 = std::abs(a2 - 1.0) * uxi * uxi + xixi;
  FactorScales f;
  f.uxi = uxi;
  f.p1 = e2 * e2 * std::pow(uxi, 4) / (12.0 * s.eps);
  f.p2 = b2 * b2;
  f.p3 = 6.0 * (std::abs((a2 + 5.0) * a2) + std::abs(a2 * a2 + 7.0 * a2 - 8.0) * w) * uxi * uxi +
         6.0 * std::abs(a2 + 2.0) * (1.0 + 5.0 * w) * xixi;
  return f;
}

/// Scale for comparing det m against p1 p2 p3.
inline double factored_det_scale(const StatePoint& s, const Covec4& xi) {
  const FactorScales f = factor_scales(s, xi);
  return f.p1 * f.p2 * f.p3;
}

/// Quartic factor of det m for general (a1, a2), transcribed term for term.
/// Contractions take xi^mu = g^{mu nu} xi_nu and u_mu = g_{mu nu} u^nu.
inline double eval_p3_general(const StatePoint& s, const Covec4& xi, double a1, double a2) {
  const Vec4& uu = s.u;
  const Covec4 ud = lower(uu, s.g);
  const Vec4 xu = raise(xi, s.g);
  const double ux = xi[0] * uu[0] + xi[1] * uu[1] + xi[2] * uu[2] + xi[3] * uu[3];
  const double xx = xi[0] * xu[0] + xi[1] * xu[1] + xi[2] * xu[2] + xi[3] * xu[3];
  const double ux2 = ux * ux, ux3 = ux2 * ux, ux4 = ux2 * ux2;

  double r = 0.0;
  // lines 2-5
  r += -6.0 *
       (-2.0 * a1 * ud[0] * uu[0] - a2 * ud[0] * uu[0] + 2.0 * a1 * a2 * ud[0] * uu[0] + a2 * a2 * ud[0] * uu[0] -
        2.0 * a1 * ud[1] * uu[1] - a2 * ud[1] * uu[1] + 2.0 * a1 * a2 * ud[1] * uu[1] + a2 * a2 * ud[1] * uu[1] -
        2.0 * a1 * ud[2] * uu[2] - a2 * ud[2] * uu[2] + 2.0 * a1 * a2 * ud[2] * uu[2] + a2 * a2 * ud[2] * uu[2] -
        2.0 * a1 * ud[3] * uu[3] - a2 * ud[3] * uu[3] + 2.0 * a1 * a2 * ud[3] * uu[3] + a2 * a2 * ud[3] * uu[3]) *
       ux4;
  // lines 6-9
  r += -2.0 * (-a2 * ud[0] + 4.0 * a1 * a2 * ud[0] + 3.0 * a2 * a2 * ud[0]) * ux3 * xu[0];
  r += -2.0 * (-a2 * ud[1] + 4.0 * a1 * a2 * ud[1] + 3.0 * a2 * a2 * ud[1]) * ux3 * xu[1];
  r += -2.0 * (-a2 * ud[2] + 4.0 * a1 * a2 * ud[2] + 3.0 * a2 * a2 * ud[2]) * ux3 * xu[2];
  r += -2.0 * (-a2 * ud[3] + 4.0 * a1 * a2 * ud[3] + 3.0 * a2 * a2 * ud[3]) * ux3 * xu[3];
  // lines 10-13
  r += 5.0 *
       (3.0 * a1 * ud[0] * uu[0] + 2.0 * a2 * ud[0] * uu[0] + a1 * a2 * ud[0] * uu[0] + 3.0 * a1 * ud[1] * uu[1] +
        2.0 * a2 * ud[1] * uu[1] + a1 * a2 * ud[1] * uu[1] + 3.0 * a1 * ud[2] * uu[2] + 2.0 * a2 * ud[2] * uu[2] +
        a1 * a2 * ud[2] * uu[2] + 3.0 * a1 * ud[3] * uu[3] + 2.0 * a2 * ud[3] * uu[3] + a1 * a2 * ud[3] * uu[3]) *
       ux2 * xx;
  // lines 14-20
  r += (3.0 * a1 * ud[0] + 2.0 * a2 * ud[0] + a1 * a2 * ud[0]) * ux * xu[0] * xx;
  r += (3.0 * a1 * ud[1] + 2.0 * a2 * ud[1] + a1 * a2 * ud[1]) * ux * xu[1] * xx;
  r += (3.0 * a1 * ud[2] + 2.0 * a2 * ud[2] + a1 * a2 * ud[2]) * ux * xu[2] * xx;
  r += (3.0 * a1 * ud[3] + 2.0 * a2 * ud[3] + a1 * a2 * ud[3]) * ux * xu[3] * xx;
  // lines 21-22
  r += (4.0 * a2 * ud[0] * uu[0] - a1 * a2 * ud[0] * uu[0] + 4.0 * a2 * ud[1] * uu[1] - a1 * a2 * ud[1] * uu[1] +
        4.0 * a2 * ud[2] * uu[2] - a1 * a2 * ud[2] * uu[2] + 4.0 * a2 * ud[3] * uu[3] - a1 * a2 * ud[3] * uu[3]) *
       xx * xx;
  return r;
}

/// p~3 = A (u.xi)^4 + B (u.xi)^2 (xi.xi) + C (xi.xi)^2
struct QuarticCoeffs {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double holdout_residual = 0.0;  ///< relative residual at a held-out covector
};

namespace detail {

/// xi orthogonal to u: u^mu xi_mu = 0 with the given spatial part.
inline Covec4 orthogonal_covector(const Vec4& u, const std::array<double, 3>& sp) {
  Covec4 xi{{0.0, sp[0], sp[1], sp[2]}};
  xi[0] = -(u[1] * sp[0] + u[2] * sp[1] + u[3] * sp[2]) / u[0];
  return xi;
}

/// A null covector (g^{ab} xi_a xi_b = 0) with the given spatial part.
inline Covec4 null_covector(const Metric4& g, const std::array<double, 3>& sp) {
  // g^{00} t^2 + 2 g^{0i} sp_i t + g^{ij} sp_i sp_j = 0
  const double a = g.inv(0, 0);
  double b = 0.0, c = 0.0;
  for (int i = 1; i < 4; ++i) {
    b += 2.0 * g.inv(0, i) * sp[static_cast<std::size_t>(i - 1)];
    for (int j = 1; j < 4; ++j)
      c += g.inv(i, j) * sp[static_cast<std::size_t>(i - 1)] * sp[static_cast<std::size_t>(j - 1)];
  }
  const double disc = std::max(0.0, b * b - 4.0 * a * c);
  return Covec4{{(-b + std::sqrt(disc)) / (2.0 * a), sp[0], sp[1], sp[2]}};
}

}  // namespace detail

/// Recovers (A, B, C) by sampling the quartic at covectors orthogonal to u,
/// null, and generic, then solving the 3 x 3 system. Throws
/// std::runtime_error if five sample draws all give a singular system or the
/// held-out residual exceeds 1e-8.
inline QuarticCoeffs extract_quartic_coeffs(double a1, double a2, const Vec4& u, const Metric4& g,
                                            std::uint64_t seed = 17) {
  if (std::abs(inner(u, u, g)) < 1e-12) throw std::invalid_argument("extract_quartic_coeffs: u must be non-null");
  if (!(std::abs(u[0]) > 0.0)) throw std::invalid_argument("extract_quartic_coeffs: u^0 must be nonzero");
  StatePoint s;
  s.u = u;
  s.g = g;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto spatial = [&] {
    std::array<double, 3> sp{};
    double n = 0.0;
    do {
      for (double& x : sp) x = dist(rng);
      n = std::sqrt(sp[0] * sp[0] + sp[1] * sp[1] + sp[2] * sp[2]);
    } while (n < 0.2);
    for (double& x : sp) x /= n;
    return sp;
  };
  auto generic = [&] {
    const auto sp = spatial();
    return Covec4{{2.0 * dist(rng), sp[0], sp[1], sp[2]}};
  };

  for (int attempt = 0; attempt < 5; ++attempt) {
    const std::array<Covec4, 3> samples{detail::orthogonal_covector(u, spatial()), detail::null_covector(g, spatial()),
                                        generic()};
    SmallMatrix<3> sys;
    SmallVector<3> rhs{};
    double row_scale = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Covec4& xi = samples[static_cast<std::size_t>(k)];
      const double x = contract(u, xi);
      const double X = x * x;
      const double Y = inner(xi, xi, g);
      sys(k, 0) = X * X;
      sys(k, 1) = X * Y;
      sys(k, 2) = Y * Y;
      rhs[static_cast<std::size_t>(k)] = eval_p3_general(s, xi, a1, a2);
      row_scale = std::max(row_scale, sys.max_abs());
    }
    const double det = determinant(sys);
    if (!(std::abs(det) > 1e-8 * row_scale * row_scale * row_scale)) continue;
    const auto abc = solve(sys, rhs);
    QuarticCoeffs q{abc[0], abc[1], abc[2], 0.0};

    const Covec4 hold = generic();
    const double x = contract(u, hold);
    const double X = x * x, Y = inner(hold, hold, g);
    const double direct = eval_p3_general(s, hold, a1, a2);
    const double model = q.A * X * X + q.B * X * Y + q.C * Y * Y;
    const double scale = std::abs(q.A) * X * X + std::abs(q.B * X * Y) + std::abs(q.C) * Y * Y;
    q.holdout_residual = std::abs(direct - model) / std::max(scale, 1e-300);
    if (q.holdout_residual > 1e-8)
      throw std::runtime_error("extract_quartic_coeffs: held-out residual " + std::to_string(q.holdout_residual));
    return q;
  }
  throw std::runtime_error("extract_quartic_coeffs: sample system singular after 5 attempts");
}

/// Roots xi_{0,+} and xi_{0,-} of a quadratic-in-xi_0 factor.
struct RootPair {
  double plus = 0.0;
  double minus = 0.0;
  double discriminant = 0.0;  ///< the radicand under the square root
};

namespace detail {

struct FlatDomain {
  double q;       // |u_spatial|^2
  double udotxi;  // u_spatial . xi_spatial
  double xi2;     // |xi_spatial|^2
};

inline FlatDomain flat_domain(const std::array<double, 3>& xb, const Vec4& u, const char* who) {
  const double uu = -u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3];
  if (std::abs(uu + 1.0) > 1e-10) throw std::invalid_argument(std::string(who) + ": u must be normalized");
  FlatDomain d{};
  d.q = u[1] * u[1] + u[2] * u[2] + u[3] * u[3];
  d.udotxi = u[1] * xb[0] + u[2] * xb[1] + u[3] * xb[2];
  d.xi2 = xb[0] * xb[0] + xb[1] * xb[1] + xb[2] * xb[2];
  if (!(d.xi2 > 0.0)) throw std::invalid_argument(std::string(who) + ": spatial covector must be nonzero");
  return d;
}

}  // namespace detail

/// Shear-factor roots for the Minkowski metric and normalized u.
inline RootPair closed_form_roots_p2(const std::array<double, 3>& xb, const Vec4& u, double a2) {
  const auto d = detail::flat_domain(xb, u, "closed_form_roots_p2");
  const double den = 1.0 + (a2 - 1.0) * (1.0 + d.q);
  const double lin = (a2 - 1.0) * d.udotxi * std::sqrt(1.0 + d.q);
  const double rad = (a2 + (a2 - 1.0) * d.q) * d.xi2 - (a2 - 1.0) * d.udotxi * d.udotxi;
  const double root = std::sqrt(std::max(rad, 0.0));
  return {-(lin + root) / den, -(lin - root) / den, rad};
}

/// Sound-factor roots for the Minkowski metric and normalized u.
inline RootPair closed_form_roots_p3(const std::array<double, 3>& xb, const Vec4& u, double a2) {
  const auto d = detail::flat_domain(xb, u, "closed_form_roots_p3");
  const double k = a2 * a2 - 2.0 * a2 - 8.0;
  const double den = -2.0 * (2.0 + a2) - (a2 - 4.0) * (1.0 + d.q);
  const double lin = (a2 - 4.0) * d.udotxi * std::sqrt(1.0 + d.q);
  const double rad = (3.0 * a2 * (2.0 + a2) + k * d.q) * d.xi2 - k * d.udotxi * d.udotxi;
  const double root = std::sqrt(2.0) * std::sqrt(std::max(rad, 0.0));
  return {(lin + root) / den, (lin - root) / den, rad};
}

/// Real xi_0 roots of the hyperbolic base factor of p1 (u.xi), p2 (its
/// bracket), p3, or p4 (xi.xi) at fixed spatial xi.
struct NumericRoots {
  std::vector<double> roots;  ///< ascending
  int expected = 0;           ///< degree of the base factor in xi_0
  int multiplicity = 1;       ///< power of the base factor inside the factor
  bool degenerate = false;    ///< base factor appears with multiplicity > 1
  bool complete() const { return static_cast<int>(roots.size()) == expected; }
};

/// Base factor whose powers make up each p_i.
inline double eval_base_factor(FactorId which, const StatePoint& s, const Covec4& xi) {
  switch (which) {
    case FactorId::p1: return contract(s.u, xi);
    case FactorId::p2: return p2_bracket(s, xi);
    case FactorId::p3: return eval_factor(FactorId::p3, s, xi);
    case FactorId::p4: return inner(xi, xi, s.g);
  }
  throw std::invalid_argument("eval_base_factor: unknown factor id");
}

inline int base_degree(FactorId which) { return which == FactorId::p1 ? 1 : 2; }
inline int base_multiplicity(FactorId which) {
  switch (which) {
    case FactorId::p1: return 4;
    case FactorId::p2: return 2;
    case FactorId::p3: return 1;
    case FactorId::p4: return 10;
  }
  return 1;
}

/// Coefficients (c0, c1, c2) of t -> base factor at xi = (t, xb); exact for
/// polynomials of degree <= 2 up to rounding.
inline Polynomial base_factor_in_xi0(FactorId which, const StatePoint& s, const std::array<double, 3>& xb) {
  auto f = [&](double t) { return eval_base_factor(which, s, Covec4{{t, xb[0], xb[1], xb[2]}}); };
  const double f0 = f(0.0), fp = f(1.0), fm = f(-1.0);
  Polynomial p({f0, 0.5 * (fp - fm), 0.5 * (fp + fm) - f0});
  if (which == FactorId::p1) p = Polynomial({f0, fp - f0});
  return p;
}

/// Sign-bracketing and bisection on the base factor; the bracket bound comes
/// from the coefficient magnitudes.
inline NumericRoots numeric_roots_in_xi0(const StatePoint& s, const std::array<double, 3>& xb, FactorId which) {
  if (!(xb[0] * xb[0] + xb[1] * xb[1] + xb[2] * xb[2] > 0.0))
    throw std::invalid_argument("numeric_roots_in_xi0: spatial covector must be nonzero");
  NumericRoots r;
  r.expected = base_degree(which);
  r.multiplicity = base_multiplicity(which);
  r.degenerate = r.multiplicity > 1;
  const Polynomial p = base_factor_in_xi0(which, s, xb);
  r.roots = real_roots_bisection(p, 1e-12);
  return r;
}

struct HyperbolicityResult {
  bool hyperbolic = true;
  std::optional<std::array<double, 3>> witness;  ///< first failing unit direction
  double min_gap = 0.0;                           ///< smallest root separation seen
  bool light_cone_degenerate = false;             ///< all roots sat on xi_0 = +-|xi| (light cone)
};

inline constexpr double kRootDistinctness = 1e-8;

/// Samples `samples` unit spatial directions; hyperbolic iff every sample
/// yields the full number of real roots separated by at least 1e-8.
inline HyperbolicityResult is_hyperbolic(const StatePoint& s, FactorId which, int samples,
                                         std::uint64_t seed = 1) {
  HyperbolicityResult out;
  out.min_gap = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  bool all_on_light_cone = base_degree(which) == 2;
  for (int k = 0; k < samples; ++k) {
    std::array<double, 3> d{};
    double n = 0.0;
    do {
      for (double& x : d) x = nd(rng);
      n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    } while (n < 1e-3);
    for (double& x : d) x /= n;
    const NumericRoots nr = numeric_roots_in_xi0(s, d, which);
    bool ok = nr.complete();
    for (std::size_t i = 1; ok && i < nr.roots.size(); ++i) {
      const double gap = nr.roots[i] - nr.roots[i - 1];
      out.min_gap = std::min(out.min_gap, gap);
      if (gap < kRootDistinctness) ok = false;
    }
    if (ok && all_on_light_cone) {
      const NumericRoots lc = numeric_roots_in_xi0(s, d, FactorId::p4);
      if (!lc.complete() || std::abs(lc.roots[0] - nr.roots[0]) > 1e-9 || std::abs(lc.roots[1] - nr.roots[1]) > 1e-9)
        all_on_light_cone = false;
    }
    if (!ok) {
      out.hyperbolic = false;
      out.witness = d;
      break;
    }
  }
  out.light_cone_degenerate = out.hyperbolic && all_on_light_cone && samples > 0;
  return out;
}

/// Exact rational p/q in lowest terms, q > 0.
struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational make(long long n, long long d) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    return {n / g, d / g};
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct FactorEntry {
  FactorId id;
  int degree;        ///< degree of each hyperbolic factor
  int multiplicity;  ///< number of hyperbolic factors of that degree
};

struct FactorSet {
  std::vector<FactorEntry> entries;

  int total_degree() const {
    int d = 0;
    for (const auto& e : entries) d += e.degree * e.multiplicity;
    return d;
  }
  int hyperbolic_factor_count() const {
    int q = 0;
    for (const auto& e : entries) q += e.multiplicity;
    return q;
  }
};

/// p1: four degree-one factors, p2: two degree-two, p3: one degree-two.
inline FactorSet fluid_factor_set() {
  return FactorSet{{{FactorId::p1, 1, 4}, {FactorId::p2, 2, 2}, {FactorId::p3, 2, 1}}};
}

/// Fluid factors plus the ten degree-two light-cone factors of the Einstein block.
inline FactorSet coupled_factor_set() {
  FactorSet f = fluid_factor_set();
  f.entries.push_back({FactorId::p4, 2, 10});
  return f;
}

/// Q / (Q - 1) with Q the number of hyperbolic factors.
inline Rational gevrey_index(const FactorSet& f) {
  if (f.entries.empty()) throw std::invalid_argument("gevrey_index: empty factor set");
  const long long q = f.hyperbolic_factor_count();
  if (q < 2) throw std::invalid_argument("gevrey_index: needs at least two hyperbolic factors");
  return Rational::make(q, q - 1);
}

}  // namespace vecf
