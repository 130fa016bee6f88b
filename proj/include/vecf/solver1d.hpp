#pragma once

// Flat-space fluid evolution in one space dimension. Unknowns V = (u^0, u^1,
// u^2, u^3, eps) depend on (t, x); W = d_t V. The second-order system
//   tt d_t^2 V + tx d_t d_x V + xx d_x^2 V + B = 0
// is integrated as d_t V = W, d_t W = -tt^{-1} (tx d_x W + xx d_x^2 V + B).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vecf/causality.hpp"
#include "vecf/constitutive.hpp"
#include "vecf/linalg.hpp"
#include "vecf/parallel.hpp"
#include "vecf/symbol.hpp"
#include "vecf/tensor.hpp"

namespace vecf {

using Vec5 = SmallVector<5>;

// ---------------------------------------------------------------------------
// lower-order terms

/// Individually weighted pieces of B, for mutation testing.
enum class BTerm : int {
  ideal,
  shear_norm_a,   // eta u_b pi^{am} d_a u_n d_m u^n
  shear_norm_b,   // eta pi_b^n u^a d_a u^m d_n u_m
  shear_coeff,    // -d_a(eta pi^{am} pi^n_b) sigma_{mn}
  accel_a,        // d_a(lambda u^a u^m) d_m u_b
  accel_b,        // d_a(lambda u_b u^m) d_m u^a
  bulk_perp,      // (1/3) d_a(chi pi^a_b) d_m u^m
  bulk_par,       // d_a(chi u^a u_b) d_m u^m
  heat_perp,      // d_a[lambda/(4 eps)(u^a pi^m_b + u_b pi^{am})] d_m eps
  heat_par,       // d_a[3 chi/(4 eps) u^a u_b u^m] d_m eps
  heat_mixed,     // d_a[chi/(4 eps) pi^a_b u^m] d_m eps
  count
};

inline constexpr std::array<const char*, static_cast<std::size_t>(BTerm::count)> kBTermNames{
    "ideal",     "shear_norm_a", "shear_norm_b", "shear_coeff", "accel_a",   "accel_b",
    "bulk_perp", "bulk_par",     "heat_perp",    "heat_par",    "heat_mixed"};

inline const char* to_string(BTerm t) { return kBTermNames[static_cast<std::size_t>(t)]; }

inline BTerm bterm_from_string(const std::string& s) {
  for (std::size_t k = 0; k < kBTermNames.size(); ++k)
    if (s == kBTermNames[k]) return static_cast<BTerm>(k);
  throw std::invalid_argument("unknown B term '" + s + "'");
}

struct BWeights {
  std::array<double, static_cast<std::size_t>(BTerm::count)> w;
  BWeights() { w.fill(1.0); }
  double operator[](BTerm t) const { return w[static_cast<std::size_t>(t)]; }
  double& operator[](BTerm t) { return w[static_cast<std::size_t>(t)]; }
};

/// First-order content of the five equations (four components of the
/// divergence with the index raised, then the normalization row). The
/// metric is taken constant; u is assumed normalized where the principal
/// part was simplified with u_l d u^l = 0. Coefficient derivatives are
/// expanded by the product rule with
///   d_a pi^{am} = theta u^m + a^m,  d_a pi^a_b = theta u_b + a_b,
/// theta = d_a u^a and a^m = u^c d_c u^m.
inline Vec5 assemble_lower_order(const StateJet1& jet, const TransportModel& model, const BWeights& wt = {}) {
  if (!(jet.eps > 0.0)) throw std::invalid_argument("assemble_lower_order: energy density must be positive");
  const Metric4& g = jet.g;
  const double eps = jet.eps;
  const double eta = model.eta(eps), deta = model.deta_deps(eps);
  const double lam = model.a2 * eta, dlam = model.a2 * deta;
  const double chi = model.a1 * eta, dchi = model.a1 * deta;
  // lambda/(4 eps), 3 chi/(4 eps), chi/(4 eps) and their eps-derivatives
  const double kap = lam / (4.0 * eps), dkap = dlam / (4.0 * eps) - lam / (4.0 * eps * eps);
  const double zet = 3.0 * chi / (4.0 * eps), dzet = 3.0 * (dchi / (4.0 * eps) - chi / (4.0 * eps * eps));
  const double xic = chi / (4.0 * eps), dxic = dchi / (4.0 * eps) - chi / (4.0 * eps * eps);

  std::array<double, 4> u{}, ul{}, e{};
  for (int a = 0; a < 4; ++a) {
    u[static_cast<std::size_t>(a)] = jet.u[a];
    e[static_cast<std::size_t>(a)] = jet.deps[a];
  }
  for (int a = 0; a < 4; ++a) {
    double s = 0.0;
    for (int b = 0; b < 4; ++b) s += g(a, b) * jet.u[b];
    ul[static_cast<std::size_t>(a)] = s;
  }
  const Mat4& du = jet.du;  // d_a u^b
  Mat4 Dl;                  // d_a u_b
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += g(n, k) * du(m, k);
      Dl(m, n) = s;
    }
  Mat4 puu, pud;  // pi^{am}, pi^a_b
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      puu(a, b) = g.inv(a, b) + u[static_cast<std::size_t>(a)] * u[static_cast<std::size_t>(b)];
      pud(a, b) = (a == b ? 1.0 : 0.0) + u[static_cast<std::size_t>(a)] * ul[static_cast<std::size_t>(b)];
    }
  double theta = 0.0, ue = 0.0, trdd = 0.0;
  for (int a = 0; a < 4; ++a) {
    theta += du(a, a);
    ue += u[static_cast<std::size_t>(a)] * e[static_cast<std::size_t>(a)];
    for (int m = 0; m < 4; ++m) trdd += du(a, m) * du(m, a);
  }
  Mat4 sigma;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) sigma(m, n) = Dl(m, n) + Dl(n, m) - (2.0 / 3.0) * g(m, n) * theta;

  std::array<double, 4> acc{}, accl{}, P{}, Pl{}, dE{};
  for (int m = 0; m < 4; ++m) {
    double s = 0.0, sl = 0.0, p = 0.0, pl = 0.0, de = 0.0;
    for (int c = 0; c < 4; ++c) {
      s += u[static_cast<std::size_t>(c)] * du(c, m);
      sl += u[static_cast<std::size_t>(c)] * Dl(c, m);
      p += puu(c, m) * e[static_cast<std::size_t>(c)];
      pl += pud(c, m) * e[static_cast<std::size_t>(c)];
      de += du(m, c) * e[static_cast<std::size_t>(c)];
    }
    acc[static_cast<std::size_t>(m)] = s;
    accl[static_cast<std::size_t>(m)] = sl;
    P[static_cast<std::size_t>(m)] = p;
    Pl[static_cast<std::size_t>(m)] = pl;
    dE[static_cast<std::size_t>(m)] = de;
  }
  double eacc = 0.0, eP = 0.0;
  for (int m = 0; m < 4; ++m) {
    eacc += e[static_cast<std::size_t>(m)] * acc[static_cast<std::size_t>(m)];
    eP += e[static_cast<std::size_t>(m)] * P[static_cast<std::size_t>(m)];
  }

  // d_a u_n d_m u^n, pi^{am} d_a u^n, pi^{am} d_a u_b
  Mat4 grad2, G, H;
  for (int a = 0; a < 4; ++a)
    for (int m = 0; m < 4; ++m) {
      double s = 0.0, gg = 0.0, hh = 0.0;
      for (int n = 0; n < 4; ++n) {
        s += Dl(a, n) * du(m, n);
        gg += puu(n, a) * du(n, m);
        hh += puu(n, a) * Dl(n, m);
      }
      grad2(a, m) = s;
      G(a, m) = gg;
      H(a, m) = hh;
    }
  double pi_grad2 = 0.0, sigG = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int m = 0; m < 4; ++m) {
      pi_grad2 += puu(a, m) * grad2(a, m);
      sigG += sigma(a, m) * G(a, m);
    }
  // u^a d_a u^m d_n u_m, sigma_{mn} u^n, C^m sigma_{mn}
  std::array<double, 4> acc2{}, sU{}, Cs{};
  std::array<double, 4> C{};
  for (int m = 0; m < 4; ++m)
    C[static_cast<std::size_t>(m)] =
        deta * P[static_cast<std::size_t>(m)] + eta * (theta * u[static_cast<std::size_t>(m)] + acc[static_cast<std::size_t>(m)]);
  for (int n = 0; n < 4; ++n) {
    double a2s = 0.0, su = 0.0, cs = 0.0;
    for (int m = 0; m < 4; ++m) {
      a2s += acc[static_cast<std::size_t>(m)] * Dl(n, m);
      su += sigma(n, m) * u[static_cast<std::size_t>(m)];
      cs += C[static_cast<std::size_t>(m)] * sigma(m, n);
    }
    acc2[static_cast<std::size_t>(n)] = a2s;
    sU[static_cast<std::size_t>(n)] = su;
    Cs[static_cast<std::size_t>(n)] = cs;
  }

  std::array<double, 4> Bl{};
  for (int b = 0; b < 4; ++b) {
    const std::size_t sb = static_cast<std::size_t>(b);
    const double ub = ul[sb];
    const double ideal = e[sb] / 3.0 + (4.0 / 3.0) * (ue * ub + eps * theta * ub + eps * accl[sb]);
    const double s1a = eta * ub * pi_grad2;
    double s1b = 0.0, s1c = -eta * ub * sigG, s2a = 0.0, s2b = lam * ub * trdd + dlam * ub * eacc;
    double dlP = 0.0, pdE = 0.0;
    for (int m = 0; m < 4; ++m) {
      const std::size_t sm = static_cast<std::size_t>(m);
      s1b += eta * pud(m, b) * acc2[sm];
      s1c -= Cs[sm] * pud(m, b) + eta * sU[sm] * H(m, b);
      s2a += ((dlam * ue + lam * theta) * u[sm] + lam * acc[sm]) * Dl(m, b);
      s2b += lam * Dl(m, b) * acc[sm];
      dlP += Dl(m, b) * P[sm];
      pdE += pud(m, b) * dE[sm];
    }
    const double s3 = theta / 3.0 * (dchi * Pl[sb] + chi * (theta * ub + accl[sb]));
    const double s4 = theta * (dchi * ue * ub + chi * theta * ub + chi * accl[sb]);
    const double s5 = (dkap * ue + kap * theta) * Pl[sb] + kap * (eacc * ub + ue * accl[sb]) + dkap * ub * eP +
                      kap * dlP + kap * ub * (theta * ue + eacc);
    const double s6 = (dzet * ue + zet * theta) * ub * ue + zet * (accl[sb] * ue + ub * eacc);
    const double s7 = dxic * Pl[sb] * ue + xic * (theta * ub + accl[sb]) * ue + xic * pdE;
    Bl[sb] = wt[BTerm::ideal] * ideal + wt[BTerm::shear_norm_a] * s1a + wt[BTerm::shear_norm_b] * s1b +
             wt[BTerm::shear_coeff] * s1c + wt[BTerm::accel_a] * s2a + wt[BTerm::accel_b] * s2b +
             wt[BTerm::bulk_perp] * s3 + wt[BTerm::bulk_par] * s4 + wt[BTerm::heat_perp] * s5 +
             wt[BTerm::heat_par] * s6 + wt[BTerm::heat_mixed] * s7;
  }

  Vec5 B{};
  for (int b = 0; b < 4; ++b) {
    double s = 0.0;
    for (int c = 0; c < 4; ++c) s += g.inv(b, c) * Bl[static_cast<std::size_t>(c)];
    B[static_cast<std::size_t>(b)] = s;
  }
  double row4 = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int m = 0; m < 4; ++m) row4 += u[static_cast<std::size_t>(a)] * u[static_cast<std::size_t>(m)] * grad2(a, m);
  B[4] = row4;
  return B;
}

// ---------------------------------------------------------------------------
// divergence oracle

/// Value and (t, x) derivatives up to second order of V = (u^0..u^3, eps).
struct FieldJet2 {
  Vec5 v{}, dt{}, dx{}, dtt{}, dtx{}, dxx{};
};

using ManufacturedField = std::function<FieldJet2(double t, double x)>;

/// eps = e0 + de sin(k x - t), u^1 = a sin(k x + t/2), u^2 = b cos(k x - 0.3 t),
/// u^3 = 0 and u^0 = sqrt(1 + |u_bar|^2), with k = 2 pi / L.
inline ManufacturedField manufactured_sinusoid(double L, double e0 = 1.0, double de = 0.1, double a = 0.2,
                                               double b = 0.1) {
  if (!(L > 0.0)) throw std::invalid_argument("manufactured_sinusoid: L must be positive");
  if (!(e0 - std::abs(de) > 0.0)) throw std::invalid_argument("manufactured_sinusoid: eps would reach zero");
  const double k = 2.0 * std::numbers::pi / L;
  return [=](double t, double x) {
    FieldJet2 j;
    // (phase, temporal frequency) pairs
    auto sinusoid = [&](double amp, double w, bool cosine, int comp) {
      const double ph = k * x + w * t;
      const double s = std::sin(ph), c = std::cos(ph);
      const std::size_t i = static_cast<std::size_t>(comp);
      if (!cosine) {
        j.v[i] = amp * s;
        j.dt[i] = amp * w * c;
        j.dx[i] = amp * k * c;
        j.dtt[i] = -amp * w * w * s;
        j.dtx[i] = -amp * w * k * s;
        j.dxx[i] = -amp * k * k * s;
      } else {
        j.v[i] = amp * c;
        j.dt[i] = -amp * w * s;
        j.dx[i] = -amp * k * s;
        j.dtt[i] = -amp * w * w * c;
        j.dtx[i] = -amp * w * k * c;
        j.dxx[i] = -amp * k * k * c;
      }
    };
    sinusoid(de, -1.0, false, 4);
    j.v[4] += e0;
    sinusoid(a, 0.5, false, 1);
    sinusoid(b, -0.3, true, 2);
    // u^0 = sqrt(1 + s), s = sum_i (u^i)^2
    double s = 1.0, st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0, sxx = 0.0;
    for (std::size_t i = 1; i < 4; ++i) {
      s += j.v[i] * j.v[i];
      st += 2.0 * j.v[i] * j.dt[i];
      sx += 2.0 * j.v[i] * j.dx[i];
      stt += 2.0 * (j.dt[i] * j.dt[i] + j.v[i] * j.dtt[i]);
      stx += 2.0 * (j.dt[i] * j.dx[i] + j.v[i] * j.dtx[i]);
      sxx += 2.0 * (j.dx[i] * j.dx[i] + j.v[i] * j.dxx[i]);
    }
    const double u0 = std::sqrt(s);
    j.v[0] = u0;
    j.dt[0] = st / (2.0 * u0);
    j.dx[0] = sx / (2.0 * u0);
    j.dtt[0] = stt / (2.0 * u0) - st * st / (4.0 * u0 * u0 * u0);
    j.dtx[0] = stx / (2.0 * u0) - st * sx / (4.0 * u0 * u0 * u0);
    j.dxx[0] = sxx / (2.0 * u0) - sx * sx / (4.0 * u0 * u0 * u0);
    return j;
  };
}

inline StateJet1 jet_from_field(const Vec5& v, const Vec5& dt, const Vec5& dx) {
  StateJet1 jet;
  jet.eps = v[4];
  jet.deps[0] = dt[4];
  jet.deps[1] = dx[4];
  for (int b = 0; b < 4; ++b) {
    jet.u[b] = v[static_cast<std::size_t>(b)];
    jet.du(0, b) = dt[static_cast<std::size_t>(b)];
    jet.du(1, b) = dx[static_cast<std::size_t>(b)];
  }
  return jet;
}

/// Principal part sum_g m_{bg}(d) V_g for fields of (t, x).
inline Vec5 principal_part(const SymbolBlocks1D& blk, const Vec5& vtt, const Vec5& vtx, const Vec5& vxx) {
  Vec5 r{};
  for (int i = 0; i < 5; ++i) {
    double s = 0.0;
    for (int j = 0; j < 5; ++j) {
      const std::size_t sj = static_cast<std::size_t>(j);
      s += blk.tt(i, j) * vtt[sj] + blk.tx(i, j) * vtx[sj] + blk.xx(i, j) * vxx[sj];
    }
    r[static_cast<std::size_t>(i)] = s;
  }
  return r;
}

struct OracleResult {
  double max_discrepancy = 0.0;   ///< rows 0-3: assembled minus d_a T^{ab}
  double max_constraint_row = 0.0;  ///< row 4 of the assembled system
  double max_divergence = 0.0;    ///< magnitude of d_a T^{ab} itself
};

/// Compares principal part + B against a fourth-order finite-difference
/// divergence of the stress tensor built pointwise from the field, on N
/// evenly spaced points of [0, L) at time t0 with step h = L / N in both t and x.
inline OracleResult divergence_oracle(const ManufacturedField& field, double L, int N, const TransportModel& model,
                                      const BWeights& wt = {}, double t0 = 0.3, int threads = 1) {
  if (N < 5) throw std::invalid_argument("divergence_oracle: N must be >= 5");
  const double h = L / N;
  std::vector<OracleResult> per(static_cast<std::size_t>(N));
  parallel_for(static_cast<std::size_t>(N), threads, [&](std::size_t jj) {
    const double x = static_cast<double>(jj) * h;
    // T^{0b} at t0 + k h and T^{1b} at x + k h, k = -2..2
    auto T_up = [&](double t, double xx) {
      const FieldJet2 f = field(t, xx);
      for (std::size_t c = 0; c < 5; ++c)
        if (!std::isfinite(f.v[c]) || !std::isfinite(f.dt[c]) || !std::isfinite(f.dx[c]))
          throw std::invalid_argument("divergence_oracle: non-finite manufactured field");
      if (!(f.v[4] > 0.0)) throw std::invalid_argument("divergence_oracle: manufactured eps <= 0");
      const StateJet1 jet = jet_from_field(f.v, f.dt, f.dx);
      const Mat4 Tl = stress_tensor(jet, model);
      Mat4 Tu;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          double s = 0.0;
          for (int c = 0; c < 4; ++c)
            for (int d = 0; d < 4; ++d) s += jet.g.inv(a, c) * jet.g.inv(b, d) * Tl(c, d);
          Tu(a, b) = s;
        }
      return Tu;
    };
    const std::array<double, 5> wts{1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0};
    std::array<double, 4> div{};
    for (int k = -2; k <= 2; ++k) {
      if (k == 0) continue;
      const double w = wts[static_cast<std::size_t>(k + 2)] / h;
      const Mat4 Tt = T_up(t0 + k * h, x);
      const Mat4 Tx = T_up(t0, x + k * h);
      for (int b = 0; b < 4; ++b) div[static_cast<std::size_t>(b)] += w * (Tt(0, b) + Tx(1, b));
    }
    const FieldJet2 f = field(t0, x);
    StatePoint s;
    s.eps = f.v[4];
    for (int b = 0; b < 4; ++b) s.u[b] = f.v[static_cast<std::size_t>(b)];
    s.transport = model;
    const Vec5 P = principal_part(symbol_blocks_1d(s), f.dtt, f.dtx, f.dxx);
    const Vec5 B = assemble_lower_order(jet_from_field(f.v, f.dt, f.dx), model, wt);
    OracleResult& r = per[jj];
    for (std::size_t b = 0; b < 4; ++b) {
      r.max_discrepancy = std::max(r.max_discrepancy, std::abs(P[b] + B[b] - div[b]));
      r.max_divergence = std::max(r.max_divergence, std::abs(div[b]));
    }
    r.max_constraint_row = std::abs(P[4] + B[4]);
  });
  OracleResult out;
  for (const auto& r : per) {
    out.max_discrepancy = std::max(out.max_discrepancy, r.max_discrepancy);
    out.max_constraint_row = std::max(out.max_constraint_row, r.max_constraint_row);
    out.max_divergence = std::max(out.max_divergence, r.max_divergence);
  }
  return out;
}

struct OracleConvergence {
  std::vector<int> resolutions;
  std::vector<double> discrepancy;
  std::vector<double> orders;  ///< log2 of successive discrepancy ratios
};

inline OracleConvergence divergence_oracle_convergence(const ManufacturedField& field, double L,
                                                       const std::vector<int>& resolutions,
                                                       const TransportModel& model, const BWeights& wt = {},
                                                       double t0 = 0.3, int threads = 1) {
  OracleConvergence c;
  c.resolutions = resolutions;
  for (int n : resolutions) c.discrepancy.push_back(divergence_oracle(field, L, n, model, wt, t0, threads).max_discrepancy);
  for (std::size_t k = 1; k < c.discrepancy.size(); ++k)
    c.orders.push_back(std::log2(c.discrepancy[k - 1] / c.discrepancy[k]));
  return c;
}

// ---------------------------------------------------------------------------
// grid and configuration

inline constexpr int kFields = 5;

struct FieldGrid {
  int N = 0;
  double L = 1.0;
  double t = 0.0;
  std::array<std::vector<double>, kFields> V;  ///< u^0, u^1, u^2, u^3, eps
  std::array<std::vector<double>, kFields> W;  ///< time derivatives

  FieldGrid() = default;
  FieldGrid(int n, double len) : N(n), L(len) {
    if (n < 5) throw std::invalid_argument("FieldGrid: N must be >= 5");
    if (!(len > 0.0)) throw std::invalid_argument("FieldGrid: L must be positive");
    for (auto& f : V) f.assign(static_cast<std::size_t>(n), 0.0);
    for (auto& f : W) f.assign(static_cast<std::size_t>(n), 0.0);
  }
  double h() const { return L / N; }
  double x(int j) const { return j * L / N; }
  int wrap(int j) const { return ((j % N) + N) % N; }
  double v(int field, int j) const { return V[static_cast<std::size_t>(field)][static_cast<std::size_t>(wrap(j))]; }
  double w(int field, int j) const { return W[static_cast<std::size_t>(field)][static_cast<std::size_t>(wrap(j))]; }

  /// max_j |g(u, u) + 1|
  double constraint_drift() const {
    double m = 0.0;
    for (std::size_t j = 0; j < static_cast<std::size_t>(N); ++j) {
      const double uu = -V[0][j] * V[0][j] + V[1][j] * V[1][j] + V[2][j] * V[2][j] + V[3][j] * V[3][j];
      m = std::max(m, std::abs(uu + 1.0));
    }
    return m;
  }
  double min_eps() const { return *std::min_element(V[4].begin(), V[4].end()); }
};

enum class ICKind { constant, gaussian_eps, shear_u2, custom };

inline const char* to_string(ICKind k) {
  switch (k) {
    case ICKind::constant: return "constant";
    case ICKind::gaussian_eps: return "gaussian";
    case ICKind::shear_u2: return "shear";
    case ICKind::custom: return "custom";
  }
  return "?";
}

inline ICKind ic_kind_from_string(const std::string& s) {
  if (s == "constant") return ICKind::constant;
  if (s == "gaussian" || s == "gaussian-eps") return ICKind::gaussian_eps;
  if (s == "shear" || s == "shear-u2") return ICKind::shear_u2;
  if (s == "custom") return ICKind::custom;
  throw std::invalid_argument("unknown ic kind '" + s + "' (expected constant, gaussian, shear or custom)");
}

/// Reduced data (eps0, eps1, v0, v1) at one cell.
struct ReducedData {
  double eps0 = 1.0;
  double eps1 = 0.0;
  std::array<double, 3> v0{};
  std::array<double, 3> v1{};
};

struct InitialCondition {
  ICKind kind = ICKind::constant;
  double eps0 = 1.0;               ///< background energy density
  std::array<double, 3> v0{};      ///< background spatial velocity
  double amplitude = 0.0;
  double width = 0.5;              ///< gaussian standard deviation
  double center = 0.0;
  std::vector<ReducedData> table;  ///< one row per cell (custom)
};

struct SolverConfig {
  TransportModel transport;
  int N = 256;
  double L = 20.0;
  double cfl = 0.25;
  double t_end = 1.0;
  InitialCondition ic;
  double filter_strength = 0.0;
  int output_every = 0;  ///< steps between snapshots; 0 keeps only the first and last
  int threads = 1;

  void validate() const {
    transport.validate();
    if (transport.a1 != 4.0) throw std::invalid_argument("SolverConfig: a1 must equal 4");
    if (!(transport.a2 >= 4.0)) throw std::invalid_argument("SolverConfig: a2 must be >= 4");
    if (!(transport.eta0 > 0.0)) throw std::invalid_argument("SolverConfig: eta0 must be positive");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("SolverConfig: cfl must lie in (0, 1]");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("SolverConfig: t_end must be >= 0");
    if (N < 8) throw std::invalid_argument("SolverConfig: N must be >= 8");
    if (!(L > 0.0)) throw std::invalid_argument("SolverConfig: L must be positive");
    if (!(filter_strength >= 0.0 && filter_strength <= 1.0))
      throw std::invalid_argument("SolverConfig: filter_strength must lie in [0, 1]");
    if (output_every < 0) throw std::invalid_argument("SolverConfig: output_every must be >= 0");
    if (!(ic.eps0 > 0.0)) throw std::invalid_argument("SolverConfig: background eps must be positive");
    if (!(ic.width > 0.0)) throw std::invalid_argument("SolverConfig: ic width must be positive");
    if (ic.kind == ICKind::custom && static_cast<int>(ic.table.size()) != N)
      throw std::invalid_argument("SolverConfig: custom ic table must have N rows");
  }
};

/// Thrown on eps <= 0, non-finite values or a singular time matrix; carries
/// the grid at the failing stage.
class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(const std::string& what, FieldGrid dump) : std::runtime_error(what), dump_(std::move(dump)) {}
  const FieldGrid& dump() const { return dump_; }

 private:
  FieldGrid dump_;
};

/// Periodic distance from x to c on [0, L).
inline double periodic_offset(double x, double c, double L) {
  double d = std::fmod(x - c, L);
  if (d > 0.5 * L) d -= L;
  if (d < -0.5 * L) d += L;
  return d;
}

/// Compactly supported bump amp (1 - (d/r)^2)^8, C^7 at |d| = r.
inline double bump(double d, double r, double amp) {
  const double s = d / r;
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  const double q2 = q * q, q4 = q2 * q2;
  return amp * q4 * q4;
}

inline void fill_from_reduced(FieldGrid& g, int j, const ReducedData& r) {
  const CompletedData c = complete_initial_data(r.eps0, r.eps1, r.v0, r.v1);
  const std::size_t jj = static_cast<std::size_t>(j);
  for (int b = 0; b < 4; ++b) {
    g.V[static_cast<std::size_t>(b)][jj] = c.u[b];
    g.W[static_cast<std::size_t>(b)][jj] = c.du_dt[b];
  }
  g.V[4][jj] = c.eps;
  g.W[4][jj] = c.deps_dt;
}

/// Reduced data for every cell of the configured initial condition.
inline std::vector<ReducedData> reduced_initial_data(const SolverConfig& cfg) {
  std::vector<ReducedData> rows(static_cast<std::size_t>(cfg.N));
  const double h = cfg.L / cfg.N;
  for (int j = 0; j < cfg.N; ++j) {
    ReducedData& r = rows[static_cast<std::size_t>(j)];
    if (cfg.ic.kind == ICKind::custom) {
      r = cfg.ic.table[static_cast<std::size_t>(j)];
      continue;
    }
    r.eps0 = cfg.ic.eps0;
    r.v0 = cfg.ic.v0;
    const double d = periodic_offset(j * h, cfg.ic.center, cfg.L);
    const double gauss = cfg.ic.amplitude * std::exp(-0.5 * d * d / (cfg.ic.width * cfg.ic.width));
    if (cfg.ic.kind == ICKind::gaussian_eps) r.eps0 += gauss;
    if (cfg.ic.kind == ICKind::shear_u2) r.v0[1] += gauss;
  }
  return rows;
}

inline FieldGrid grid_from_reduced(int N, double L, const std::vector<ReducedData>& rows) {
  if (static_cast<int>(rows.size()) != N) throw std::invalid_argument("grid_from_reduced: row count must equal N");
  FieldGrid g(N, L);
  for (int j = 0; j < N; ++j) {
    if (!(rows[static_cast<std::size_t>(j)].eps0 > 0.0))
      throw std::invalid_argument("initial data: eps <= 0 at cell " + std::to_string(j));
    fill_from_reduced(g, j, rows[static_cast<std::size_t>(j)]);
  }
  return g;
}

inline FieldGrid initial_grid(const SolverConfig& cfg) {
  cfg.validate();
  return grid_from_reduced(cfg.N, cfg.L, reduced_initial_data(cfg));
}

/// Largest fluid characteristic speed over all cells (u renormalized per cell).
inline double grid_max_speed(const FieldGrid& g, const TransportModel& model) {
  double vmax = 0.0;
  for (int j = 0; j < g.N; ++j) {
    StatePoint s;
    s.eps = g.v(4, j);
    s.transport = model;
    s.u = normalized_velocity({g.v(1, j), g.v(2, j), g.v(3, j)}, s.g);
    vmax = std::max(vmax, max_characteristic_speed(s, false, 16));
  }
  return vmax;
}

// ---------------------------------------------------------------------------
// spatial operators and stepping

inline double d1(const std::vector<double>& f, int j, int N, double h) {
  auto at = [&](int k) { return f[static_cast<std::size_t>(((j + k) % N + N) % N)]; };
  return (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
}
inline double d2(const std::vector<double>& f, int j, int N, double h) {
  auto at = [&](int k) { return f[static_cast<std::size_t>(((j + k) % N + N) % N)]; };
  return (-at(2) + 16.0 * at(1) - 30.0 * at(0) + 16.0 * at(-1) - at(-2)) / (12.0 * h * h);
}

struct Rhs {
  std::array<std::vector<double>, kFields> dV, dW;
};

namespace detail {

[[noreturn]] inline void abort_at(const FieldGrid& g, int j, const std::string& why) {
  std::ostringstream os;
  os.precision(17);
  os << "solver abort at t=" << g.t << ", cell " << j << " (x=" << g.x(j) << "): " << why << "; state";
  for (int f = 0; f < kFields; ++f) os << ' ' << g.v(f, j);
  throw SolverAbort(os.str(), g);
}

}  // namespace detail

/// Time derivative of (V, W) at every cell. The second x-derivative is D1
/// applied twice, so the discrete principal symbol is the exact symbol at the
/// modified wavenumber of D1; the multiple flow root (u.xi)^2 stays a
/// double root instead of splitting into a complex pair.
inline Rhs evaluate_rhs(const FieldGrid& g, const TransportModel& model, int threads = 1) {
  const int N = g.N;
  const double h = g.h();
  const std::size_t n = static_cast<std::size_t>(N);
  Rhs r;
  std::array<std::vector<double>, kFields> Vx, Vxx, Wx;
  for (std::size_t f = 0; f < kFields; ++f) {
    r.dV[f] = g.W[f];
    r.dW[f].assign(n, 0.0);
    Vx[f].resize(n);
    Vxx[f].resize(n);
    Wx[f].resize(n);
    for (int j = 0; j < N; ++j) {
      Vx[f][static_cast<std::size_t>(j)] = d1(g.V[f], j, N, h);
      Wx[f][static_cast<std::size_t>(j)] = d1(g.W[f], j, N, h);
    }
    for (int j = 0; j < N; ++j) Vxx[f][static_cast<std::size_t>(j)] = d1(Vx[f], j, N, h);
  }
  std::vector<std::string> errors(n);
  parallel_for(n, threads, [&](std::size_t jj) {
    Vec5 v{}, w{}, vx{}, vxx{}, wx{};
    for (std::size_t f = 0; f < kFields; ++f) {
      v[f] = g.V[f][jj];
      w[f] = g.W[f][jj];
      vx[f] = Vx[f][jj];
      vxx[f] = Vxx[f][jj];
      wx[f] = Wx[f][jj];
    }
    for (std::size_t f = 0; f < kFields; ++f)
      if (!std::isfinite(v[f]) || !std::isfinite(w[f])) {
        errors[jj] = "non-finite field value";
        return;
      }
    if (!(v[4] > 0.0)) {
      errors[jj] = "energy density <= 0";
      return;
    }
    StatePoint s;
    s.eps = v[4];
    for (int b = 0; b < 4; ++b) s.u[b] = v[static_cast<std::size_t>(b)];
    s.transport = model;
    const SymbolBlocks1D blk = symbol_blocks_1d(s);
    const Vec5 B = assemble_lower_order(jet_from_field(v, w, vx), model);
    Vec5 rhs{};
    for (int i = 0; i < 5; ++i) {
      double acc = B[static_cast<std::size_t>(i)];
      for (int k = 0; k < 5; ++k) {
        const std::size_t sk = static_cast<std::size_t>(k);
        acc += blk.tx(i, k) * wx[sk] + blk.xx(i, k) * vxx[sk];
      }
      rhs[static_cast<std::size_t>(i)] = -acc;
    }
    if (!(std::abs(determinant(blk.tt)) > 1e-10)) {
      errors[jj] = "time matrix singular";
      return;
    }
    const Vec5 a = solve(blk.tt, rhs);
    for (std::size_t f = 0; f < kFields; ++f) r.dW[f][jj] = a[f];
  });
  for (int j = 0; j < N; ++j)
    if (!errors[static_cast<std::size_t>(j)].empty()) detail::abort_at(g, j, errors[static_cast<std::size_t>(j)]);
  return r;
}

/// W += (s / 64) delta^6 W; damps the highest grid mode by the factor (1 - s).
inline void apply_filter(FieldGrid& g, double strength) {
  if (strength <= 0.0) return;
  const int N = g.N;
  for (auto& f : g.W) {
    const std::vector<double> o = f;
    auto at = [&](int k) { return o[static_cast<std::size_t>(((k % N) + N) % N)]; };
    for (int j = 0; j < N; ++j) {
      const double d6 = at(j + 3) - 6.0 * at(j + 2) + 15.0 * at(j + 1) - 20.0 * at(j) + 15.0 * at(j - 1) -
                        6.0 * at(j - 2) + at(j - 3);
      f[static_cast<std::size_t>(j)] += strength / 64.0 * d6;
    }
  }
}

/// One RK4 step followed by the optional filter.
inline FieldGrid step(const FieldGrid& g, const SolverConfig& cfg, double dt) {
  auto axpy = [](const FieldGrid& base, const Rhs& k, double c) {
    FieldGrid out = base;
    for (std::size_t f = 0; f < kFields; ++f)
      for (std::size_t j = 0; j < static_cast<std::size_t>(base.N); ++j) {
        out.V[f][j] += c * k.dV[f][j];
        out.W[f][j] += c * k.dW[f][j];
      }
    out.t = base.t + c;
    return out;
  };
  const Rhs k1 = evaluate_rhs(g, cfg.transport, cfg.threads);
  const Rhs k2 = evaluate_rhs(axpy(g, k1, 0.5 * dt), cfg.transport, cfg.threads);
  const Rhs k3 = evaluate_rhs(axpy(g, k2, 0.5 * dt), cfg.transport, cfg.threads);
  const Rhs k4 = evaluate_rhs(axpy(g, k3, dt), cfg.transport, cfg.threads);
  FieldGrid out = g;
  for (std::size_t f = 0; f < kFields; ++f)
    for (std::size_t j = 0; j < static_cast<std::size_t>(g.N); ++j) {
      out.V[f][j] += dt / 6.0 * (k1.dV[f][j] + 2.0 * k2.dV[f][j] + 2.0 * k3.dV[f][j] + k4.dV[f][j]);
      out.W[f][j] += dt / 6.0 * (k1.dW[f][j] + 2.0 * k2.dW[f][j] + 2.0 * k3.dW[f][j] + k4.dW[f][j]);
    }
  out.t = g.t + dt;
  apply_filter(out, cfg.filter_strength);
  for (int j = 0; j < out.N; ++j) {
    for (int f = 0; f < kFields; ++f)
      if (!std::isfinite(out.v(f, j)) || !std::isfinite(out.w(f, j))) detail::abort_at(out, j, "non-finite field value");
    if (!(out.v(4, j) > 0.0)) detail::abort_at(out, j, "energy density <= 0");
  }
  return out;
}

struct Diagnostics {
  double t = 0.0;
  int step = 0;
  double constraint_drift = 0.0;  ///< max_j |u.u + 1|
  double min_eps = 0.0;
  double energy = 0.0;  ///< integral of T^{00} dx
};

inline double total_energy(const FieldGrid& g, const TransportModel& model) {
  double s = 0.0;
  const double h = g.h();
  for (int j = 0; j < g.N; ++j) {
    Vec5 v{}, w{}, vx{};
    for (int f = 0; f < kFields; ++f) {
      const std::size_t sf = static_cast<std::size_t>(f);
      v[sf] = g.v(f, j);
      w[sf] = g.w(f, j);
      vx[sf] = d1(g.V[sf], j, g.N, h);
    }
    s += stress_tensor(jet_from_field(v, w, vx), model)(0, 0);
  }
  return s * h;
}

inline Diagnostics diagnose(const FieldGrid& g, const TransportModel& model, int step_index) {
  return {g.t, step_index, g.constraint_drift(), g.min_eps(), total_energy(g, model)};
}

struct Trajectory {
  std::vector<FieldGrid> snapshots;
  std::vector<Diagnostics> diagnostics;  ///< one per snapshot
  std::vector<double> drift_per_step;    ///< max_j |u.u + 1| after every step
  double dt = 0.0;
  int steps = 0;
  double v_max = 0.0;
  double max_drift() const {
    double m = 0.0;
    for (double d : drift_per_step) m = std::max(m, d);
    return m;
  }
};

/// dt = cfl h / v_max, shrunk so that t_end is reached in a whole number of steps.
inline std::pair<double, int> time_step(double cfl, double h, double v_max, double t_end) {
  if (!(v_max > 0.0)) throw std::invalid_argument("time_step: v_max must be positive");
  if (t_end <= 0.0) return {cfl * h / v_max, 0};
  const double dt_max = cfl * h / v_max;
  const int n = std::max(1, static_cast<int>(std::ceil(t_end / dt_max - 1e-12)));
  return {t_end / n, n};
}

/// Evolves from an explicitly given grid; v_max is taken from the data at t = 0
/// unless `v_max_override` is positive.
inline Trajectory evolve_from(FieldGrid g, const SolverConfig& cfg, double v_max_override = 0.0) {
  cfg.validate();
  Trajectory tr;
  tr.v_max = v_max_override > 0.0 ? v_max_override : grid_max_speed(g, cfg.transport);
  const auto [dt, n] = time_step(cfg.cfl, g.h(), tr.v_max, cfg.t_end);
  tr.dt = dt;
  tr.steps = n;
  tr.snapshots.push_back(g);
  tr.diagnostics.push_back(diagnose(g, cfg.transport, 0));
  for (int k = 1; k <= n; ++k) {
    g = step(g, cfg, dt);
    if (k == n) g.t = cfg.t_end;
    tr.drift_per_step.push_back(g.constraint_drift());
    if (k == n || (cfg.output_every > 0 && k % cfg.output_every == 0)) {
      tr.snapshots.push_back(g);
      tr.diagnostics.push_back(diagnose(g, cfg.transport, k));
    }
  }
  return tr;
}

inline Trajectory evolve(const SolverConfig& cfg) { return evolve_from(initial_grid(cfg), cfg); }

// ---------------------------------------------------------------------------
// experiments

struct FrontSpeedResult {
  double measured_front = 0.0;  ///< speed of the half-maximum crossing ahead of the pulse
  double measured_peak = 0.0;   ///< speed of the pulse extremum
  double predicted = 0.0;
  double front_error = 0.0;     ///< relative errors against `predicted`
  double peak_error = 0.0;
  std::vector<double> times, fronts, peaks;
};

/// Outermost pulse to the right of `center`: the outermost local extremum of
/// |f - base| reaching 10% of the half-domain maximum, and the half-maximum
/// crossing ahead of it. Returns false if nothing stands above round-off.
inline bool locate_right_pulse(const FieldGrid& g, int f, double base, double center, double& peak_pos,
                               double& front_pos) {
  const double h = g.h();
  const int jc = static_cast<int>(std::lround(center / h));
  const int half = g.N / 2;
  auto dev = [&](int k) { return std::abs(g.v(f, jc + k) - base); };
  double M = 0.0;
  for (int k = 0; k < half; ++k) M = std::max(M, dev(k));
  if (M <= 1e-14) return false;
  int k = half - 1;
  while (k > 0 && dev(k) < 0.1 * M) --k;
  while (k > 0 && dev(k - 1) >= dev(k)) --k;
  // parabolic refinement of the extremum
  const double ym = dev(k - 1), y0 = dev(k), yp = dev(k + 1);
  const double den = ym - 2.0 * y0 + yp;
  const double off = den != 0.0 ? 0.5 * (ym - yp) / den : 0.0;
  peak_pos = (k + std::clamp(off, -0.5, 0.5)) * h;
  const double level = 0.5 * y0;
  for (int m = k; m < half; ++m) {
    const double a = dev(m), b = dev(m + 1);
    if (a >= level && b < level) {
      front_pos = m * h + h * (a - level) / (a - b);
      return true;
    }
  }
  return false;
}

/// Speeds of the right-moving pulse in field f (eps for the sound pulse,
/// u^2 for the shear pulse), least-squares fitted over the second half of
/// the run.
inline FrontSpeedResult front_speed(const SolverConfig& cfg, int f, double predicted) {
  SolverConfig c = cfg;
  if (c.output_every <= 0) c.output_every = 1;
  const Trajectory tr = evolve(c);
  const double base = f == 4 ? c.ic.eps0 : (f >= 1 && f <= 3 ? c.ic.v0[static_cast<std::size_t>(f - 1)] : 1.0);
  FrontSpeedResult r;
  r.predicted = predicted;
  for (const auto& s : tr.snapshots) {
    if (s.t < 0.5 * c.t_end) continue;
    double pk = 0.0, fr = 0.0;
    if (!locate_right_pulse(s, f, base, c.ic.center, pk, fr)) continue;
    r.times.push_back(s.t);
    r.peaks.push_back(pk);
    r.fronts.push_back(fr);
  }
  if (r.times.size() < 4) throw std::domain_error("front_speed: too few pulse samples");
  auto slope = [&](const std::vector<double>& y) {
    const double m = static_cast<double>(r.times.size());
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t k = 0; k < r.times.size(); ++k) {
      st += r.times[k];
      sy += y[k];
      stt += r.times[k] * r.times[k];
      sty += r.times[k] * y[k];
    }
    return (m * sty - st * sy) / (m * stt - st * st);
  };
  r.measured_front = slope(r.fronts);
  r.measured_peak = slope(r.peaks);
  r.front_error = std::abs(r.measured_front - predicted) / predicted;
  r.peak_error = std::abs(r.measured_peak - predicted) / predicted;
  return r;
}

struct Perturbation {
  double center = 0.0;
  double radius = 1.0;
  double amplitude = 0.0;  ///< added to eps0 as a smooth compact bump
};

struct DodConfig {
  SolverConfig base;  ///< N is replaced by each resolution; t_end by probe_t
  Perturbation outside;
  Perturbation inside;
  double probe_x = 0.0;
  double probe_t = 1.0;
  std::vector<int> resolutions{128, 256, 512, 1024};
};

struct DodLevel {
  int N = 0;
  double outside_diff = 0.0;
  double inside_diff = 0.0;
};

struct DodReport {
  double v_max = 0.0;
  double probe_x = 0.0;  ///< snapped to the coarsest grid
  double outside_gap = 0.0;  ///< distance from outside support to the backward cone
  std::vector<DodLevel> levels;
  std::vector<double> outside_ratios;  ///< coarse / fine per doubling
  std::vector<double> inside_changes;  ///< |d_N - d_2N| / |d_2N|
  double roundoff_floor = 1e-13;

  /// Every doubling either cuts the outside influence by at least
  /// `min_ratio` or keeps it under the floor; the inside influence settles to
  /// within `inside_tol` and stays far above the outside one.
  bool outside_converges(double min_ratio) const {
    for (std::size_t k = 0; k < outside_ratios.size(); ++k) {
      const double fine = levels[k + 1].outside_diff;
      if (fine <= roundoff_floor) continue;
      if (!(outside_ratios[k] >= min_ratio)) return false;
    }
    return !outside_ratios.empty();
  }
  bool inside_nonzero_limit(double inside_tol) const {
    if (inside_changes.empty()) return false;
    const DodLevel& f = levels.back();
    return inside_changes.back() <= inside_tol && f.inside_diff > 1e3 * std::max(f.outside_diff, roundoff_floor);
  }
};

namespace detail {

inline double probe_difference(const FieldGrid& a, const FieldGrid& b, int j) {
  double m = 0.0;
  for (int f = 0; f < kFields; ++f) m = std::max(m, std::abs(a.v(f, j) - b.v(f, j)));
  return m;
}

inline std::vector<ReducedData> perturbed(std::vector<ReducedData> rows, double L, const Perturbation& p) {
  const double h = L / static_cast<double>(rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j)
    rows[j].eps0 += bump(periodic_offset(static_cast<double>(j) * h, p.center, L), p.radius, p.amplitude);
  return rows;
}

}  // namespace detail

/// Base, outside-perturbed and inside-perturbed evolutions at every
/// resolution; the difference to the base run is read at the probe point.
inline DodReport dod_experiment(const DodConfig& dc) {
  if (dc.resolutions.size() < 2) throw std::invalid_argument("dod_experiment: need >= 2 resolutions");
  for (std::size_t k = 1; k < dc.resolutions.size(); ++k)
    if (dc.resolutions[k] != 2 * dc.resolutions[k - 1])
      throw std::invalid_argument("dod_experiment: resolutions must double");
  if (!(dc.probe_t > 0.0)) throw std::invalid_argument("dod_experiment: probe time must be positive");
  const double L = dc.base.L;
  const int n0 = dc.resolutions.front();
  const double h0 = L / n0;
  DodReport rep;
  rep.probe_x = std::round(dc.probe_x / h0) * h0;

  // v_max over base and perturbed initial data at the coarsest resolution
  SolverConfig c0 = dc.base;
  c0.N = n0;
  c0.t_end = dc.probe_t;
  const auto rows0 = reduced_initial_data(c0);
  rep.v_max = std::max({grid_max_speed(grid_from_reduced(n0, L, rows0), c0.transport),
                        grid_max_speed(grid_from_reduced(n0, L, detail::perturbed(rows0, L, dc.outside)), c0.transport),
                        grid_max_speed(grid_from_reduced(n0, L, detail::perturbed(rows0, L, dc.inside)), c0.transport)});
  const double cone = rep.v_max * dc.probe_t;
  if (2.0 * cone + 4.0 * h0 >= L) throw std::invalid_argument("dod_experiment: backward cone wraps the periodic domain");
  const double dout = std::abs(periodic_offset(dc.outside.center, rep.probe_x, L));
  rep.outside_gap = dout - dc.outside.radius - cone;
  if (rep.outside_gap < 2.0 * h0)
    throw std::invalid_argument("dod_experiment: outside perturbation within 2 cells of the backward cone");
  const double din = std::abs(periodic_offset(dc.inside.center, rep.probe_x, L));
  if (din + dc.inside.radius > cone - 2.0 * h0)
    throw std::invalid_argument("dod_experiment: inside perturbation not contained in the backward cone");

  for (int n : dc.resolutions) {
    SolverConfig c = dc.base;
    c.N = n;
    c.t_end = dc.probe_t;
    c.output_every = 0;
    const auto rows = reduced_initial_data(c);
    const int jp = static_cast<int>(std::lround(rep.probe_x / (L / n)));
    const FieldGrid base = evolve_from(grid_from_reduced(n, L, rows), c, rep.v_max).snapshots.back();
    const FieldGrid out =
        evolve_from(grid_from_reduced(n, L, detail::perturbed(rows, L, dc.outside)), c, rep.v_max).snapshots.back();
    const FieldGrid in =
        evolve_from(grid_from_reduced(n, L, detail::perturbed(rows, L, dc.inside)), c, rep.v_max).snapshots.back();
    rep.levels.push_back({n, detail::probe_difference(base, out, jp), detail::probe_difference(base, in, jp)});
  }
  for (std::size_t k = 1; k < rep.levels.size(); ++k) {
    const DodLevel &a = rep.levels[k - 1], &b = rep.levels[k];
    rep.outside_ratios.push_back(b.outside_diff > 0.0 ? a.outside_diff / b.outside_diff
                                                      : std::numeric_limits<double>::infinity());
    rep.inside_changes.push_back(std::abs(a.inside_diff - b.inside_diff) / std::max(b.inside_diff, 1e-300));
  }
  return rep;
}

struct ConvergenceReport {
  std::vector<int> resolutions;
  /// diffs[k][f] = max_j |V_f(N_k) - V_f(N_{k+1})| on the coarse points
  std::vector<std::array<double, kFields>> diffs;
  /// orders[k][f] = log2(diffs[k][f] / diffs[k+1][f])
  std::vector<std::array<double, kFields>> orders;
  std::array<bool, kFields> exact{};  ///< differences at round-off for every pair
  /// max over fields of diffs[k], and the orders of that combined norm
  std::vector<double> combined_diffs;
  std::vector<double> combined_orders;
  bool all_exact = false;
  double roundoff_floor = 1e-13;
};

/// Richardson self-convergence: each run is compared with the next finer one
/// at the shared grid points.
inline ConvergenceReport convergence_study(const SolverConfig& cfg, const std::vector<int>& resolutions) {
  if (resolutions.size() < 3) throw std::invalid_argument("convergence_study: need >= 3 resolutions");
  for (std::size_t k = 1; k < resolutions.size(); ++k)
    if (resolutions[k] != 2 * resolutions[k - 1])
      throw std::invalid_argument("convergence_study: resolutions must double");
  ConvergenceReport rep;
  rep.resolutions = resolutions;
  std::vector<FieldGrid> finals;
  double vmax = 0.0;
  {
    SolverConfig c = cfg;
    c.N = resolutions.front();
    vmax = grid_max_speed(initial_grid(c), c.transport);
  }
  for (int n : resolutions) {
    SolverConfig c = cfg;
    c.N = n;
    c.output_every = 0;
    // same dt on every level relative to h keeps the time error in step
    finals.push_back(evolve_from(initial_grid(c), c, vmax).snapshots.back());
  }
  for (std::size_t k = 0; k + 1 < finals.size(); ++k) {
    std::array<double, kFields> d{};
    const FieldGrid &a = finals[k], &b = finals[k + 1];
    for (int f = 0; f < kFields; ++f)
      for (int j = 0; j < a.N; ++j)
        d[static_cast<std::size_t>(f)] = std::max(d[static_cast<std::size_t>(f)], std::abs(a.v(f, j) - b.v(f, 2 * j)));
    rep.diffs.push_back(d);
  }
  rep.exact.fill(true);
  for (const auto& d : rep.diffs)
    for (int f = 0; f < kFields; ++f)
      if (d[static_cast<std::size_t>(f)] > rep.roundoff_floor) rep.exact[static_cast<std::size_t>(f)] = false;
  for (std::size_t k = 0; k + 1 < rep.diffs.size(); ++k) {
    std::array<double, kFields> o{};
    for (int f = 0; f < kFields; ++f)
      o[static_cast<std::size_t>(f)] = std::log2(rep.diffs[k][static_cast<std::size_t>(f)] /
                                                 rep.diffs[k + 1][static_cast<std::size_t>(f)]);
    rep.orders.push_back(o);
  }
  for (const auto& d : rep.diffs) rep.combined_diffs.push_back(*std::max_element(d.begin(), d.end()));
  rep.all_exact = std::all_of(rep.exact.begin(), rep.exact.end(), [](bool e) { return e; });
  for (std::size_t k = 0; k + 1 < rep.combined_diffs.size(); ++k)
    rep.combined_orders.push_back(std::log2(rep.combined_diffs[k] / rep.combined_diffs[k + 1]));
  return rep;
}

}  // namespace vecf
