#pragma once

// Cone slopes of the shear and sound families, light-cone containment
// verdicts, parameter scans and the maximal characteristic speed.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vecf/characteristics.hpp"
#include "vecf/parallel.hpp"
#include "vecf/symbol.hpp"
#include "vecf/tensor.hpp"

namespace vecf {

struct SlopePair {
  double plus = 0.0;
  double minus = 0.0;
  double radicand = 0.0;  ///< negative means complex slopes
};

namespace detail {

inline double spatial_norm2(const Vec4& u) { return u[1] * u[1] + u[2] * u[2] + u[3] * u[3]; }

inline void require_normalized_flat(const Vec4& u, const char* who) {
  if (!u.finite()) throw std::invalid_argument(std::string(who) + ": non-finite velocity");
  if (std::abs(-u[0] * u[0] + spatial_norm2(u) + 1.0) > 1e-10)
    throw std::invalid_argument(std::string(who) + ": u must be normalized for the Minkowski metric");
}

}  // namespace detail

/// xi_0 / |xi_bar| on the shear cone; theta is the angle between the spatial
/// parts of u and xi.
inline SlopePair slope_s_pm_p2(const Vec4& u, double theta, double a2) {
  detail::require_normalized_flat(u, "slope_s_pm_p2");
  const double q = detail::spatial_norm2(u);
  const double c = std::cos(theta);
  const double lin = (a2 - 1.0) * std::sqrt(q) * c * std::sqrt(1.0 + q);
  const double rad = a2 + (a2 - 1.0) * q - (a2 - 1.0) * q * c * c;
  const double den = 1.0 + (a2 - 1.0) * (1.0 + q);
  const double r = std::sqrt(std::max(rad, 0.0));
  return {-(lin + r) / den, -(lin - r) / den, rad};
}

/// Sound-cone counterpart of slope_s_pm_p2.
inline SlopePair slope_s_pm_p3(const Vec4& u, double theta, double a2) {
  detail::require_normalized_flat(u, "slope_s_pm_p3");
  const double q = detail::spatial_norm2(u);
  const double c = std::cos(theta);
  const double k = a2 * a2 - 2.0 * a2 - 8.0;
  const double lin = (a2 - 4.0) * std::sqrt(q) * c * std::sqrt(1.0 + q);
  const double rad = 3.0 * a2 * (2.0 + a2) + k * q - k * q * c * c;
  const double den = -2.0 * (2.0 + a2) - (a2 - 4.0) * (1.0 + q);
  const double r = std::sqrt(2.0) * std::sqrt(std::max(rad, 0.0));
  return {(lin + r) / den, (lin - r) / den, rad};
}

/// Slope of the flow cone u.xi = 0.
inline double slope_p1(const Vec4& u, double theta) {
  detail::require_normalized_flat(u, "slope_p1");
  const double q = detail::spatial_norm2(u);
  return -std::sqrt(q) * std::cos(theta) / std::sqrt(1.0 + q);
}

/// Closed form of the shear slopes at theta = 0.
inline SlopePair slope_p2_theta0_closed_form(double u2, double a2) {
  const double lin = (a2 - 1.0) * std::sqrt(u2 * (1.0 + u2));
  const double den = 1.0 + (a2 - 1.0) * (1.0 + u2);
  return {-(std::sqrt(a2) + lin) / den, -(-std::sqrt(a2) + lin) / den, a2};
}

/// Unit-speed boost direction x with |u_bar|^2 = u2.
inline Vec4 velocity_from_u2(double u2) {
  if (!(u2 >= 0.0)) throw std::invalid_argument("velocity_from_u2: u2 must be >= 0");
  return Vec4{{std::sqrt(1.0 + u2), std::sqrt(u2), 0.0, 0.0}};
}

enum class WaveFamily { flow, shear, sound, gravity };

inline const char* to_string(WaveFamily f) {
  switch (f) {
    case WaveFamily::flow: return "flow";
    case WaveFamily::shear: return "shear";
    case WaveFamily::sound: return "sound";
    case WaveFamily::gravity: return "gravity";
  }
  return "?";
}

struct CriticalAngleBranch {
  double theta_star = 0.0;  ///< maximizer of |s| in [0, 2 pi]
  double max_abs = 0.0;
  double distance_to_axis = 0.0;  ///< distance of theta_star to {0, pi, 2 pi}
  bool flat = false;               ///< |s| constant in theta to rounding
};

struct CriticalAngleReport {
  std::array<CriticalAngleBranch, 4> branch;  ///< p2+, p2-, p3+, p3-
  double tolerance = 1e-6;
  bool ok() const {
    return std::all_of(branch.begin(), branch.end(),
                       [&](const CriticalAngleBranch& b) { return b.flat || b.distance_to_axis <= tolerance; });
  }
};

namespace detail {

inline double axis_distance(double th) {
  const double pi = std::numbers::pi;
  return std::min({std::abs(th), std::abs(th - pi), std::abs(th - 2.0 * pi)});
}

template <class F>
CriticalAngleBranch maximize_over_theta(F&& f, int grid = 720) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double h = two_pi / grid;
  int best = 0;
  double bv = -1.0, lo = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= grid; ++k) {
    const double v = std::abs(f(k * h));
    lo = std::min(lo, v);
    if (v > bv) {
      bv = v;
      best = k;
    }
  }
  CriticalAngleBranch out;
  if (bv - lo <= 1e-14 * std::max(1.0, bv)) {
    out.flat = true;
    out.theta_star = 0.0;
    out.max_abs = bv;
    return out;
  }
  // golden section on [theta_best - h, theta_best + h]; |s| depends on
  // cos(theta) only, so the bracket may extend past 0 or 2 pi.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = (best - 1) * h, b = (best + 1) * h;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = std::abs(f(c)), fd = std::abs(f(d));
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = std::abs(f(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = std::abs(f(d));
    }
  }
  double th = 0.5 * (a + b);
  const double v = std::abs(f(th));
  if (bv >= v) th = best * h;
  if (th < 0.0) th = -th;
  if (th > two_pi) th = 2.0 * two_pi - th;
  out.theta_star = th;
  out.max_abs = std::max(v, bv);
  out.distance_to_axis = axis_distance(th);
  return out;
}

}  // namespace detail

inline CriticalAngleReport critical_angle_check(const Vec4& u, double a2, int grid = 720) {
  CriticalAngleReport r;
  r.branch[0] = detail::maximize_over_theta([&](double t) { return slope_s_pm_p2(u, t, a2).plus; }, grid);
  r.branch[1] = detail::maximize_over_theta([&](double t) { return slope_s_pm_p2(u, t, a2).minus; }, grid);
  r.branch[2] = detail::maximize_over_theta([&](double t) { return slope_s_pm_p3(u, t, a2).plus; }, grid);
  r.branch[3] = detail::maximize_over_theta([&](double t) { return slope_s_pm_p3(u, t, a2).minus; }, grid);
  return r;
}

enum class Verdict { strict, boundary, violated };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::strict: return "strict";
    case Verdict::boundary: return "boundary";
    case Verdict::violated: return "violated";
  }
  return "?";
}

inline constexpr double kBoundaryTol = 1e-12;

inline Verdict classify_slope(double max_abs, bool complex_roots = false) {
  if (complex_roots || !std::isfinite(max_abs)) return Verdict::violated;
  if (max_abs < 1.0 - kBoundaryTol) return Verdict::strict;
  if (std::abs(max_abs - 1.0) <= kBoundaryTol) return Verdict::boundary;
  return Verdict::violated;
}

inline Verdict worse(Verdict a, Verdict b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

struct FamilyCone {
  WaveFamily family = WaveFamily::flow;
  double max_abs_slope = 0.0;
  Verdict verdict = Verdict::strict;
  bool complex_roots = false;
  double witness_u2 = 0.0;
  double witness_theta = 0.0;
};

struct ConeReport {
  std::array<FamilyCone, 4> family;  ///< flow, shear, sound, gravity
  double v_max_fluid = 0.0;
  double v_max_coupled = 1.0;
  Verdict overall = Verdict::strict;  ///< over the fluid families

  const FamilyCone& operator[](WaveFamily f) const { return family[static_cast<std::size_t>(f)]; }
  std::string overall_label() const {
    switch (overall) {
      case Verdict::strict: return "causal (strict)";
      case Verdict::boundary: return "causal (boundary)";
      case Verdict::violated: return "violated";
    }
    return "?";
  }
};

namespace detail {

inline void finish_report(ConeReport& r) {
  r.family[3].family = WaveFamily::gravity;
  r.family[3].max_abs_slope = 1.0;
  r.family[3].verdict = Verdict::boundary;
  r.v_max_fluid = 0.0;
  r.overall = Verdict::strict;
  for (int k = 0; k < 3; ++k) {
    auto& f = r.family[static_cast<std::size_t>(k)];
    f.verdict = classify_slope(f.max_abs_slope, f.complex_roots);
    r.v_max_fluid = std::max(r.v_max_fluid, f.max_abs_slope);
    r.overall = worse(r.overall, f.verdict);
  }
  r.v_max_coupled = std::max(r.v_max_fluid, 1.0);
}

/// Root position relative to the light-cone roots lo < hi along the same
/// line: -1 and +1 are the light cone itself.
inline double normalized_slope(double root, double lo, double hi) { return (2.0 * root - (lo + hi)) / (hi - lo); }

/// Unit directions on a Fibonacci sphere.
inline std::vector<std::array<double, 3>> sphere_directions(int n) {
  std::vector<std::array<double, 3>> d(static_cast<std::size_t>(n));
  const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < n; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    d[static_cast<std::size_t>(k)] = {r * std::cos(ga * k), r * std::sin(ga * k), z};
  }
  return d;
}

}  // namespace detail

/// For the Minkowski metric the closed-form slopes are scanned over
/// `theta_steps` cells; otherwise the numeric xi_0 roots of each family are
/// located relative to the light cone over `theta_steps` sphere directions.
inline ConeReport cone_containment(const StatePoint& s, int theta_steps = 720) {
  s.validate();
  if (!s.normalized(1e-10)) throw std::invalid_argument("cone_containment: u must be normalized");
  if (theta_steps < 2) throw std::invalid_argument("cone_containment: theta_steps must be >= 2");
  const double a2 = s.transport.a2;
  ConeReport r;
  r.family[0].family = WaveFamily::flow;
  r.family[1].family = WaveFamily::shear;
  r.family[2].family = WaveFamily::sound;

  auto bump = [](FamilyCone& f, double v, double u2, double th) {
    if (v > f.max_abs_slope) {
      f.max_abs_slope = v;
      f.witness_u2 = u2;
      f.witness_theta = th;
    }
  };

  if (s.g.is_minkowski()) {
    const double u2 = detail::spatial_norm2(s.u);
    const double h = 2.0 * std::numbers::pi / theta_steps;
    for (int k = 0; k <= theta_steps; ++k) {
      const double th = k * h;
      bump(r.family[0], std::abs(slope_p1(s.u, th)), u2, th);
      const SlopePair p2 = slope_s_pm_p2(s.u, th, a2);
      const SlopePair p3 = slope_s_pm_p3(s.u, th, a2);
      if (p2.radicand < 0.0) r.family[1].complex_roots = true;
      if (p3.radicand < 0.0) r.family[2].complex_roots = true;
      bump(r.family[1], std::max(std::abs(p2.plus), std::abs(p2.minus)), u2, th);
      bump(r.family[2], std::max(std::abs(p3.plus), std::abs(p3.minus)), u2, th);
    }
  } else {
    const auto dirs = detail::sphere_directions(theta_steps);
    const std::array<FactorId, 3> ids{FactorId::p1, FactorId::p2, FactorId::p3};
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const NumericRoots lc = numeric_roots_in_xi0(s, dirs[k], FactorId::p4);
      if (!lc.complete()) throw std::domain_error("cone_containment: light cone roots not found");
      for (std::size_t f = 0; f < 3; ++f) {
        const NumericRoots nr = numeric_roots_in_xi0(s, dirs[k], ids[f]);
        if (!nr.complete()) r.family[f].complex_roots = true;
        for (double root : nr.roots)
          bump(r.family[f], std::abs(detail::normalized_slope(root, lc.roots[0], lc.roots[1])),
               detail::spatial_norm2(s.u), static_cast<double>(k));
      }
    }
  }
  detail::finish_report(r);
  return r;
}

/// Maximal characteristic speed; with `include_gravity` the light cone of the
/// Einstein block is included. Throws std::domain_error for violated states.
inline double max_characteristic_speed(const StatePoint& s, bool include_gravity = false, int theta_steps = 720) {
  const ConeReport r = cone_containment(s, theta_steps);
  if (r.overall == Verdict::violated) throw std::domain_error("max_characteristic_speed: state violates causality");
  return include_gravity ? r.v_max_coupled : r.v_max_fluid;
}

struct ScanRow {
  double a1 = 4.0;
  double a2 = 4.0;
  double u2 = 0.0;  ///< |u_bar|^2
  double theta_max_p2 = 0.0;
  double smax_p2 = 0.0;
  double smax_p3 = 0.0;
  Verdict verdict = Verdict::strict;
};

/// Rows are ordered by (a2 index, |u_bar| index); |u_bar| runs over a uniform
/// grid of `u_steps` points on [0, u_max].
inline std::vector<ScanRow> causality_scan(const std::vector<double>& a2_list, double u_max, int u_steps,
                                           int theta_steps, double a1 = 4.0, int threads = 1) {
  if (a2_list.empty()) throw std::invalid_argument("causality_scan: empty a2 list");
  if (!(u_max >= 0.0) || u_steps < 1 || theta_steps < 2)
    throw std::invalid_argument("causality_scan: invalid grid sizes");
  std::vector<ScanRow> rows(a2_list.size() * static_cast<std::size_t>(u_steps));
  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    const std::size_t ia = idx / static_cast<std::size_t>(u_steps);
    const int iu = static_cast<int>(idx % static_cast<std::size_t>(u_steps));
    const double umag = u_steps == 1 ? 0.0 : u_max * iu / (u_steps - 1);
    StatePoint s;
    s.transport.a1 = a1;
    s.transport.a2 = a2_list[ia];
    s.transport.eta_form = EtaForm::constant;
    s.u = velocity_from_u2(umag * umag);
    const ConeReport c = cone_containment(s, theta_steps);
    ScanRow& row = rows[idx];
    row.a1 = a1;
    row.a2 = a2_list[ia];
    row.u2 = umag * umag;
    row.theta_max_p2 = c[WaveFamily::shear].witness_theta;
    row.smax_p2 = c[WaveFamily::shear].max_abs_slope;
    row.smax_p3 = c[WaveFamily::sound].max_abs_slope;
    row.verdict = c.overall;
  });
  return rows;
}

enum class RegionClass { causal_strict, causal_boundary, hyperbolic_acausal, non_hyperbolic };

inline const char* to_string(RegionClass c) {
  switch (c) {
    case RegionClass::causal_strict: return "causal-strict";
    case RegionClass::causal_boundary: return "causal-boundary";
    case RegionClass::hyperbolic_acausal: return "hyperbolic-acausal";
    case RegionClass::non_hyperbolic: return "non-hyperbolic";
  }
  return "?";
}

inline RegionClass worse(RegionClass a, RegionClass b) {
  return static_cast<int>(a) > static_cast<int>(b) ? a : b;
}

/// A factor (u.xi)^2 - r (xi.xi), or the light cone xi.xi when light_cone is set.
struct ConeFactor {
  double r = 0.0;
  bool light_cone = false;
};

/// Real xi_0 roots of a ConeFactor at Minkowski, normalized u, spatial xi.
/// Returns false when the roots are complex.
inline bool cone_factor_roots(const ConeFactor& f, const Vec4& u, const std::array<double, 3>& xb, double& lo,
                              double& hi) {
  const double xi2 = xb[0] * xb[0] + xb[1] * xb[1] + xb[2] * xb[2];
  if (f.light_cone) {
    lo = -std::sqrt(xi2);
    hi = std::sqrt(xi2);
    return true;
  }
  const double b0 = u[1] * xb[0] + u[2] * xb[1] + u[3] * xb[2];
  // (u0 t + b0)^2 - r (-t^2 + xi2) = 0
  const double a = u[0] * u[0] + f.r;
  const double b = 2.0 * u[0] * b0;
  const double c = b0 * b0 - f.r * xi2;
  if (a == 0.0) {
    if (b == 0.0) return false;
    lo = hi = -c / b;
    return true;
  }
  double disc = b * b - 4.0 * a * c;
  const double scale = b * b + std::abs(4.0 * a * c);
  if (disc < 0.0 && disc > -1e-12 * scale) disc = 0.0;
  if (disc < 0.0) return false;
  const double sq = std::sqrt(disc);
  const double r1 = (-b - std::copysign(sq, b == 0.0 ? 1.0 : b)) / (2.0 * a);
  const double r2 = r1 != 0.0 ? c / (a * r1) : (-b + sq) / (2.0 * a);
  lo = std::min(r1, r2);
  hi = std::max(r1, r2);
  return true;
}

struct RegionCell {
  double a1 = 4.0;
  double a2 = 4.0;
  double disc = 0.0;  ///< B^2 - 4 A C at normalized u
  QuarticCoeffs quartic;
  std::vector<ConeFactor> factors;  ///< shear bracket and the quartic's factors
  double max_slope = 0.0;
  RegionClass label = RegionClass::causal_strict;
};

namespace detail {

/// Factors X - r Y of A X^2 + B X Y + C Y^2; empty optional if not real.
inline std::optional<std::vector<ConeFactor>> split_quartic(const QuarticCoeffs& q) {
  const double scale = std::max({std::abs(q.A), std::abs(q.B), std::abs(q.C), 1e-300});
  const double A = std::abs(q.A) <= 1e-10 * scale ? 0.0 : q.A;
  const double B = std::abs(q.B) <= 1e-10 * scale ? 0.0 : q.B;
  const double C = std::abs(q.C) <= 1e-10 * scale ? 0.0 : q.C;
  std::vector<ConeFactor> f;
  if (A == 0.0) {
    if (B == 0.0) {
      if (C == 0.0) return std::nullopt;
      return std::vector<ConeFactor>{{0.0, true}, {0.0, true}};
    }
    f.push_back({0.0, true});
    f.push_back({-C / B, false});
    return f;
  }
  double disc = B * B - 4.0 * A * C;
  if (disc < 0.0 && disc > -1e-12 * (B * B + std::abs(4.0 * A * C))) disc = 0.0;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double r1 = (-B - std::copysign(sq, B == 0.0 ? 1.0 : B)) / (2.0 * A);
  const double r2 = r1 != 0.0 ? C / (A * r1) : (-B + sq) / (2.0 * A);
  f.push_back({r1, false});
  f.push_back({r2, false});
  return f;
}

}  // namespace detail

/// Classifies every (a1, a2) cell: the quartic of the general determinant is
/// split into real quadratic cone factors, then every factor (plus the shear
/// bracket) is checked for real roots and light-cone containment over the
/// |u_bar| samples and `theta_steps` directions in the (x, y) plane.
inline std::vector<RegionCell> hyperbolicity_region_map(const std::vector<double>& a1_grid,
                                                        const std::vector<double>& a2_grid,
                                                        const std::vector<double>& u_samples, int theta_steps = 72,
                                                        int threads = 1) {
  if (a1_grid.empty() || a2_grid.empty() || u_samples.empty() || theta_steps < 2)
    throw std::invalid_argument("hyperbolicity_region_map: empty grid");
  std::vector<RegionCell> cells(a1_grid.size() * a2_grid.size());
  parallel_for(cells.size(), threads, [&](std::size_t idx) {
    RegionCell& cell = cells[idx];
    cell.a1 = a1_grid[idx / a2_grid.size()];
    cell.a2 = a2_grid[idx % a2_grid.size()];
    const Metric4 g = minkowski();
    cell.quartic = extract_quartic_coeffs(cell.a1, cell.a2, Vec4{{1.0, 0.0, 0.0, 0.0}}, g);
    cell.disc = cell.quartic.B * cell.quartic.B - 4.0 * cell.quartic.A * cell.quartic.C;
    auto split = detail::split_quartic(cell.quartic);
    if (!split) {
      cell.label = RegionClass::non_hyperbolic;
      return;
    }
    const double a = cell.a2 - 1.0;
    cell.factors.push_back(a == 0.0 ? ConeFactor{0.0, true} : ConeFactor{1.0 / a, false});
    for (const auto& f : *split) cell.factors.push_back(f);

    RegionClass label = RegionClass::causal_strict;
    for (double um : u_samples) {
      const Vec4 u = velocity_from_u2(um * um);
      for (int k = 0; k < theta_steps; ++k) {
        const double th = 2.0 * std::numbers::pi * k / theta_steps;
        const std::array<double, 3> xb{std::cos(th), std::sin(th), 0.0};
        for (const auto& f : cell.factors) {
          double lo = 0.0, hi = 0.0;
          if (!cone_factor_roots(f, u, xb, lo, hi)) {
            label = RegionClass::non_hyperbolic;
            continue;
          }
          const double m = std::max(std::abs(lo), std::abs(hi));
          cell.max_slope = std::max(cell.max_slope, m);
          switch (classify_slope(m)) {
            case Verdict::strict: break;
            case Verdict::boundary: label = worse(label, RegionClass::causal_boundary); break;
            case Verdict::violated: label = worse(label, RegionClass::hyperbolic_acausal); break;
          }
        }
      }
    }
    cell.label = label;
  });
  return cells;
}

}  // namespace vecf
