#pragma once

// Principal symbol m(U, xi) of the fluid block: rows are the four components
// of the divergence equation followed by the normalization equation; columns
// are the unknowns (u^0, u^1, u^2, u^3, eps).

#include <cmath>
#include <stdexcept>

#include "vecf/constitutive.hpp"
#include "vecf/linalg.hpp"
#include "vecf/tensor.hpp"

namespace vecf {

/// Frozen-coefficient state at which the symbol is evaluated.
struct StatePoint {
  double eps = 1.0;
  Vec4 u{{1.0, 0.0, 0.0, 0.0}};
  Metric4 g = minkowski();
  TransportModel transport;

  void validate() const {
    if (!(eps > 0.0)) throw std::invalid_argument("StatePoint: energy density must be positive");
    if (!u.finite()) throw std::invalid_argument("StatePoint: non-finite velocity");
    transport.validate();
  }
  double norm_u() const { return inner(u, u, g); }
  bool normalized(double tol) const { return std::abs(norm_u() + 1.0) <= tol; }
};

using SymbolMatrix = SmallMatrix<5>;

inline constexpr int kEpsColumn = 4;
inline constexpr int kConstraintRow = 4;

inline SymbolMatrix fluid_symbol(const StatePoint& s, const Covec4& xi) {
  s.validate();
  const auto [eta, lambda, chi] = transport(s.eps, s.transport);
  const Vec4 xi_up = raise(xi, s.g);
  const Covec4 ul = lower(s.u, s.g);
  const Vec4& u = s.u;
  const double uxi = contract(u, xi);
  const double xixi = inner(xi, xi, s.g);
  const double third = (chi - eta) / 3.0;
  const double diag = -eta * xixi + (lambda - eta) * uxi * uxi;

  SymbolMatrix m;
  // m_00 and m_0i
  m(0, 0) = diag + (lambda + chi) * u[0] * uxi * xi[0] + third * (xi_up[0] + u[0] * uxi) * xi[0];
  for (int i = 1; i < 4; ++i)
    m(0, i) = (lambda + chi) * u[0] * uxi * xi[i] + third * (xi_up[0] + u[0] * uxi) * xi[i];
  // m_i nu (nu != i) and m_ii, no sum over i
  for (int i = 1; i < 4; ++i) {
    for (int nu = 0; nu < 4; ++nu) {
      const double off = u[i] * (lambda + chi) * uxi * xi[nu] + third * (xi_up[i] + u[i] * uxi) * xi[nu];
      m(i, nu) = nu == i ? diag + off : off;
    }
  }
  // m_nu4
  for (int nu = 0; nu < 4; ++nu) {
    m(nu, kEpsColumn) = u[nu] * (lambda * xixi + (lambda + 3.0 * chi) * uxi * uxi) / (4.0 * s.eps) +
                        (lambda + chi) * (uxi * xi_up[nu] + u[nu] * uxi * uxi) / (4.0 * s.eps);
  }
  // m_4nu
  for (int nu = 0; nu < 4; ++nu) m(kConstraintRow, nu) = ul[nu] * uxi * uxi;
  m(kConstraintRow, kEpsColumn) = 0.0;
  return m;
}

/// det m(U, xi) by partial-pivoted elimination.
inline double fluid_char_det(const StatePoint& s, const Covec4& xi) { return determinant(fluid_symbol(s, xi)); }

/// Determinant of the 15 x 15 coupled symbol. The Einstein block is
/// (xi.xi) times the 10 x 10 identity and sits below a zero block, so the
/// coupling block never enters.
inline double coupled_char_det(const StatePoint& s, const Covec4& xi) {
  const double xixi = inner(xi, xi, s.g);
  double p4 = 1.0;
  for (int k = 0; k < 10; ++k) p4 *= xixi;
  return fluid_char_det(s, xi) * p4;
}

/// Coefficients of d_0^2 (u^beta, eps) in the five fluid equations.
inline SymbolMatrix time_matrix(const StatePoint& s) { return fluid_symbol(s, Covec4{{1.0, 0.0, 0.0, 0.0}}); }

/// (eta^4 / eps)(1 + |u|^2)^2 (3 a2 + (a2 - 4)|u|^2)(a2 + (a2 - 1)|u|^2)^2,
/// valid for the Minkowski metric and normalized u.
inline double det_time_matrix_formula(const StatePoint& s) {
  s.validate();
  if (!s.g.is_minkowski()) throw std::invalid_argument("det_time_matrix_formula: metric must be Minkowski");
  if (!s.normalized(1e-10)) throw std::invalid_argument("det_time_matrix_formula: u must be normalized");
  const double eta = s.transport.eta(s.eps);
  const double a2 = s.transport.a2;
  const double q = s.u[1] * s.u[1] + s.u[2] * s.u[2] + s.u[3] * s.u[3];
  const double e2 = eta * eta;
  const double f = a2 + (a2 - 1.0) * q;
  return e2 * e2 / s.eps * (1.0 + q) * (1.0 + q) * (3.0 * a2 + (a2 - 4.0) * q) * f * f;
}

/// Second-order coefficient blocks for fields depending on (t, x) only:
/// m(xi_0, xi_1) = tt xi_0^2 + tx xi_0 xi_1 + xx xi_1^2.
struct SymbolBlocks1D {
  SymbolMatrix tt;
  SymbolMatrix tx;
  SymbolMatrix xx;
};

inline SymbolBlocks1D symbol_blocks_1d(const StatePoint& s) {
  SymbolBlocks1D b;
  b.tt = fluid_symbol(s, Covec4{{1.0, 0.0, 0.0, 0.0}});
  b.xx = fluid_symbol(s, Covec4{{0.0, 1.0, 0.0, 0.0}});
  b.tx = fluid_symbol(s, Covec4{{1.0, 1.0, 0.0, 0.0}}) - b.tt - b.xx;
  return b;
}

}  // namespace vecf
