#pragma once

// Seeded identity suites over random states: determinant factorization, the
// a1 = 4 collapse of the general quartic, closed-form roots against the
// bisection roots, the time-matrix determinant and the trace of T.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "vecf/causality.hpp"
#include "vecf/characteristics.hpp"
#include "vecf/constitutive.hpp"
#include "vecf/parallel.hpp"
#include "vecf/symbol.hpp"

namespace vecf {

struct SampleSpec {
  double a2_min = 4.0;
  double a2_max = 12.0;
  double metric_delta = 0.05;  ///< odd samples use a perturbed metric
  double u_max = 3.0;          ///< bound on |u^mu|
  double xi_max = 2.0;         ///< bound on |xi_mu|
};

/// Per-sample generator; sample k depends only on (seed, k).
inline std::mt19937_64 sample_rng(std::uint64_t seed, std::size_t k) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  return std::mt19937_64(seq);
}

/// Random state for the identity suites. Normalized velocities have spatial
/// components bounded so that u^0 <= u_max; unnormalized ones are arbitrary
/// 4-vectors with |u^mu| <= u_max.
inline StatePoint random_state(std::mt19937_64& rng, const SampleSpec& spec, bool normalized, bool perturbed) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> a2d(spec.a2_min, spec.a2_max);
  std::uniform_real_distribution<double> epsd(0.5, 2.0);
  std::uniform_real_distribution<double> eta0d(0.5, 1.5);
  StatePoint s;
  s.transport.a1 = 4.0;
  s.transport.a2 = a2d(rng);
  s.transport.eta_form = EtaForm::power_law;
  s.transport.eta0 = eta0d(rng);
  s.eps = epsd(rng);
  if (perturbed) s.g = random_lorentzian_near_minkowski(spec.metric_delta, rng());
  if (normalized) {
    const double vb = std::sqrt((spec.u_max * spec.u_max - 1.0) / 3.0) * 0.98;
    s.u = normalized_velocity({vb * unit(rng), vb * unit(rng), vb * unit(rng)}, s.g);
  } else {
    for (int a = 0; a < 4; ++a) s.u[a] = spec.u_max * unit(rng);
  }
  return s;
}

inline Covec4 random_covector(std::mt19937_64& rng, double bound) {
  std::uniform_real_distribution<double> unit(-bound, bound);
  return Covec4{{unit(rng), unit(rng), unit(rng), unit(rng)}};
}

struct SuiteResult {
  std::size_t samples = 0;
  double max_error = 0.0;  ///< the suite's stated error measure
  std::size_t worst = 0;   ///< sample index attaining it
  double tolerance = 0.0;
  bool pass() const { return max_error <= tolerance; }
};

namespace detail {

template <class F>
SuiteResult run_suite(std::size_t n, double tol, int threads, F&& err) {
  std::vector<double> e(n, 0.0);
  parallel_for(n, threads, [&](std::size_t k) { e[k] = err(k); });
  SuiteResult r;
  r.samples = n;
  r.tolerance = tol;
  for (std::size_t k = 0; k < n; ++k)
    if (!(e[k] <= r.max_error)) {
      r.max_error = std::isnan(e[k]) ? std::numeric_limits<double>::infinity() : e[k];
      r.worst = k;
      if (std::isinf(r.max_error)) break;
    }
  return r;
}

}  // namespace detail

/// |det m - p1 p2 p3| / max(1, scale); samples alternate normalized /
/// unnormalized u and Minkowski / perturbed metrics.
inline SuiteResult factorization_suite(std::size_t n, std::uint64_t seed, double tol = 1e-9,
                                       const SampleSpec& spec = {}, int threads = 1) {
  return detail::run_suite(n, tol, threads, [&](std::size_t k) {
    auto rng = sample_rng(seed, k);
    const StatePoint s = random_state(rng, spec, k % 2 == 0, (k / 2) % 2 == 1);
    const Covec4 xi = random_covector(rng, spec.xi_max);
    const double d = fluid_char_det(s, xi);
    const double f = factored_fluid_det(s, xi);
    return std::abs(d - f) / std::max(1.0, factored_det_scale(s, xi));
  });
}

/// |p~3(a1 = 4) - (u.xi)^2 p3| / max(1, scale) with the termwise scale of
/// (u.xi)^2 p3.
inline SuiteResult collapse_suite(std::size_t n, std::uint64_t seed, double tol = 1e-9, const SampleSpec& spec = {},
                                  int threads = 1) {
  return detail::run_suite(n, tol, threads, [&](std::size_t k) {
    auto rng = sample_rng(seed, k);
    const StatePoint s = random_state(rng, spec, k % 2 == 0, (k / 2) % 2 == 1);
    const Covec4 xi = random_covector(rng, spec.xi_max);
    const double uxi = contract(s.u, xi);
    const double gen = eval_p3_general(s, xi, 4.0, s.transport.a2);
    const double col = uxi * uxi * eval_factor(FactorId::p3, s, xi);
    const FactorScales sc = factor_scales(s, xi);
    return std::abs(gen - col) / std::max(1.0, sc.uxi * sc.uxi * sc.p3);
  });
}

/// Closed-form roots of p2 or p3 against the bisection roots of the same
/// factor, max absolute difference; normalized u at Minkowski, unit xi_bar.
struct RootsSuiteResult {
  SuiteResult agreement;
  double min_gap = std::numeric_limits<double>::infinity();
  bool all_real = true;
  bool pass() const { return agreement.pass() && all_real && min_gap >= kRootDistinctness; }
};

struct RootSample {
  double a2 = 0.0;
  Vec4 u;
  std::array<double, 3> xb{};
  RootPair closed;
  std::vector<double> numeric;
};

inline RootSample root_sample(FactorId which, std::uint64_t seed, std::size_t k, const SampleSpec& spec = {}) {
  auto rng = sample_rng(seed, k);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> a2d(spec.a2_min, spec.a2_max);
  std::normal_distribution<double> nd(0.0, 1.0);
  RootSample r;
  r.a2 = a2d(rng);
  const double vb = std::sqrt((spec.u_max * spec.u_max - 1.0) / 3.0) * 0.98;
  r.u = normalized_velocity({vb * unit(rng), vb * unit(rng), vb * unit(rng)}, minkowski());
  double nrm = 0.0;
  do {
    for (double& x : r.xb) x = nd(rng);
    nrm = std::sqrt(r.xb[0] * r.xb[0] + r.xb[1] * r.xb[1] + r.xb[2] * r.xb[2]);
  } while (nrm < 1e-3);
  for (double& x : r.xb) x /= nrm;
  StatePoint s;
  s.u = r.u;
  s.transport.a2 = r.a2;
  r.closed = which == FactorId::p2 ? closed_form_roots_p2(r.xb, r.u, r.a2) : closed_form_roots_p3(r.xb, r.u, r.a2);
  r.numeric = numeric_roots_in_xi0(s, r.xb, which).roots;
  return r;
}

inline RootsSuiteResult roots_suite(FactorId which, std::size_t n, std::uint64_t seed, double tol = 1e-9,
                                    const SampleSpec& spec = {}, int threads = 1) {
  if (which != FactorId::p2 && which != FactorId::p3)
    throw std::invalid_argument("roots_suite: closed forms exist for p2 and p3 only");
  std::vector<RootSample> rs(n);
  parallel_for(n, threads, [&](std::size_t k) { rs[k] = root_sample(which, seed, k, spec); });
  RootsSuiteResult out;
  out.agreement = detail::run_suite(n, tol, 1, [&](std::size_t k) {
    const RootSample& r = rs[k];
    if (r.numeric.size() != 2 || r.closed.discriminant < 0.0) return std::numeric_limits<double>::infinity();
    const double lo = std::min(r.closed.plus, r.closed.minus), hi = std::max(r.closed.plus, r.closed.minus);
    return std::max(std::abs(lo - r.numeric[0]), std::abs(hi - r.numeric[1]));
  });
  for (const RootSample& r : rs) {
    if (r.numeric.size() != 2 || r.closed.discriminant < 0.0) {
      out.all_real = false;
      continue;
    }
    out.min_gap = std::min(out.min_gap, std::abs(r.closed.plus - r.closed.minus));
  }
  return out;
}

/// Numeric det of the time matrix against the closed form, relative; also
/// records the smallest closed-form value seen.
struct TimeMatrixSuiteResult {
  SuiteResult agreement;
  double min_value = std::numeric_limits<double>::infinity();
  bool pass() const { return agreement.pass() && min_value > 0.0; }
};

inline TimeMatrixSuiteResult time_matrix_suite(std::size_t n, std::uint64_t seed, double tol = 1e-10,
                                               const SampleSpec& spec = {}, int threads = 1) {
  std::vector<double> vals(n);
  TimeMatrixSuiteResult out;
  out.agreement = detail::run_suite(n, tol, threads, [&](std::size_t k) {
    auto rng = sample_rng(seed, k);
    const StatePoint s = random_state(rng, spec, true, false);
    const double num = determinant(time_matrix(s));
    const double cf = det_time_matrix_formula(s);
    vals[k] = cf;
    return std::abs(num - cf) / std::abs(cf);
  });
  for (double v : vals) out.min_value = std::min(out.min_value, v);
  return out;
}

/// Random first jet with g(u, u) = -1 and u^mu d_a u_mu = 0 built in.
inline StateJet1 random_normalized_jet(std::mt19937_64& rng, double metric_delta = 0.0) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  StateJet1 j;
  if (metric_delta > 0.0) j.g = random_lorentzian_near_minkowski(metric_delta, rng());
  j.eps = 0.5 + 1.5 * (0.5 * (unit(rng) + 1.0));
  for (int a = 0; a < 4; ++a) j.deps[a] = unit(rng);
  j.u = normalized_velocity({1.5 * unit(rng), 1.5 * unit(rng), 1.5 * unit(rng)}, j.g);
  const Covec4 ul = lower(j.u, j.g);
  for (int a = 0; a < 4; ++a) {
    // d_a u^0 solves u_mu d_a u^mu = 0
    double s = 0.0;
    for (int i = 1; i < 4; ++i) {
      j.du(a, i) = unit(rng);
      s += ul[i] * j.du(a, i);
    }
    j.du(a, 0) = -s / ul[0];
  }
  return j;
}

/// |g^{ab} T_ab| / max|T_ab| over random normalized jets.
inline SuiteResult trace_suite(std::size_t n, std::uint64_t seed, double tol = 1e-10, int threads = 1) {
  return detail::run_suite(n, tol, threads, [&](std::size_t k) {
    auto rng = sample_rng(seed, k);
    const StateJet1 j = random_normalized_jet(rng, k % 2 == 1 ? 0.05 : 0.0);
    TransportModel m;
    m.a2 = 4.0 + 8.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const SymMat4 T = stress_tensor(j, m);
    return std::abs(stress_trace(T, j.g)) / T.max_abs();
  });
}

}  // namespace vecf
