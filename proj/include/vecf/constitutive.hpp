#pragma once

// Transport coefficients, the conformal viscous stress-energy tensor and the
// completion of reduced initial data (eps0, eps1, v0, v1) for flat space.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vecf/tensor.hpp"

namespace vecf {

enum class EtaForm { constant, power_law };

inline const char* to_string(EtaForm f) { return f == EtaForm::constant ? "constant" : "power-law"; }

inline EtaForm eta_form_from_string(const std::string& s) {
  if (s == "constant") return EtaForm::constant;
  if (s == "power-law" || s == "power_law" || s == "powerlaw") return EtaForm::power_law;
  throw std::invalid_argument("unknown eta_form '" + s + "' (expected constant or power-law)");
}

/// eta(eps) with chi = a1 * eta and lambda = a2 * eta.
struct TransportModel {
  double a1 = 4.0;
  double a2 = 4.0;
  EtaForm eta_form = EtaForm::power_law;
  double eta0 = 1.0;
  double p_exp = 0.75;

  /// eta0 = 0 is accepted as the ideal-fluid limit.
  void validate() const {
    if (!std::isfinite(a1) || !std::isfinite(a2)) throw std::invalid_argument("TransportModel: a1, a2 must be finite");
    if (!(eta0 >= 0.0) || !std::isfinite(eta0)) throw std::invalid_argument("TransportModel: eta0 must be >= 0");
    if (!std::isfinite(p_exp)) throw std::invalid_argument("TransportModel: p_exp must be finite");
  }

  double eta(double eps) const {
    return eta_form == EtaForm::constant ? eta0 : eta0 * std::pow(eps, p_exp);
  }
  double deta_deps(double eps) const {
    return eta_form == EtaForm::constant ? 0.0 : eta0 * p_exp * std::pow(eps, p_exp - 1.0);
  }
};

struct TransportCoefficients {
  double eta;
  double lambda;
  double chi;
};

inline TransportCoefficients transport(double eps, const TransportModel& m) {
  if (!(eps > 0.0)) throw std::invalid_argument("transport: energy density must be positive");
  const double eta = m.eta(eps);
  return {eta, m.a2 * eta, m.a1 * eta};
}

/// Pointwise value and first partials of (eps, u) in flat Cartesian coordinates.
/// du(a, b) holds d_a u^b.
struct StateJet1 {
  double eps = 1.0;
  Covec4 deps;
  Vec4 u;
  Mat4 du;
  Metric4 g = minkowski();
};

using SymMat4 = Mat4;

/// T_{ab} with both indices down. The metric is treated as constant, so
/// covariant derivatives reduce to partials.
inline SymMat4 stress_tensor(const StateJet1& jet, const TransportModel& model) {
  const auto [eta, lambda, chi] = transport(jet.eps, model);
  const Metric4& g = jet.g;
  const double eps = jet.eps;
  const Covec4 ul = lower(jet.u, g);

  // D(m, n) = d_m u_n
  Mat4 D;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += g(n, k) * jet.du(m, k);
      D(m, n) = s;
    }
  double div = 0.0;
  for (int l = 0; l < 4; ++l) div += jet.du(l, l);

  // proj(a, m) = pi_a^m = delta_a^m + u_a u^m
  Mat4 proj;
  for (int a = 0; a < 4; ++a)
    for (int m = 0; m < 4; ++m) proj(a, m) = (a == m ? 1.0 : 0.0) + ul[a] * jet.u[m];

  Mat4 sigma;  // d_m u_n + d_n u_m - 2/3 g_mn div
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) sigma(m, n) = D(m, n) + D(n, m) - (2.0 / 3.0) * g(m, n) * div;

  // u^m d_m u_b and pi^m_b d_m eps
  std::array<double, 4> accel{}, grad_perp{};
  double udeps = 0.0;
  for (int m = 0; m < 4; ++m) udeps += jet.u[m] * jet.deps[m];
  for (int b = 0; b < 4; ++b) {
    double s = 0.0, t = 0.0;
    for (int m = 0; m < 4; ++m) {
      s += jet.u[m] * D(m, b);
      t += proj(b, m) * jet.deps[m];
    }
    accel[static_cast<std::size_t>(b)] = s;
    grad_perp[static_cast<std::size_t>(b)] = t;
  }

  SymMat4 T;
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) {
      const double pi_ab = g(a, b) + ul[a] * ul[b];
      double shear = 0.0;
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) shear += proj(a, m) * proj(b, n) * sigma(m, n);

      double t = (4.0 / 3.0) * ul[a] * ul[b] * eps + (1.0 / 3.0) * g(a, b) * eps;
      t += -eta * shear;
      t += lambda * (ul[a] * accel[static_cast<std::size_t>(b)] + ul[b] * accel[static_cast<std::size_t>(a)]);
      t += (1.0 / 3.0) * chi * pi_ab * div;
      t += chi * ul[a] * ul[b] * div;
      t += lambda / (4.0 * eps) *
           (ul[a] * grad_perp[static_cast<std::size_t>(b)] + ul[b] * grad_perp[static_cast<std::size_t>(a)]);
      t += 3.0 * chi / (4.0 * eps) * ul[a] * ul[b] * udeps;
      t += chi / (4.0 * eps) * pi_ab * udeps;
      T(a, b) = t;
      T(b, a) = t;
    }
  }
  return T;
}

/// g^{ab} T_{ab}
inline double stress_trace(const SymMat4& T, const Metric4& g) {
  double s = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) s += g.inv(a, b) * T(a, b);
  return s;
}

struct CompletedData {
  Vec4 u;       ///< u^alpha(0)
  Vec4 du_dt;   ///< d_0 u^alpha(0)
  double eps;   ///< eps(0)
  double deps_dt;
};

/// Flat-space completion: g_ij = delta_ij, zero extrinsic curvature, d_0 g = 0.
inline CompletedData complete_initial_data(double eps0, double eps1, const std::array<double, 3>& v0,
                                           const std::array<double, 3>& v1) {
  if (!(eps0 > 0.0)) throw std::invalid_argument("complete_initial_data: eps0 must be positive");
  double v2 = 0.0, vv1 = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    v2 += v0[i] * v0[i];
    vv1 += v0[i] * v1[i];
  }
  CompletedData d{};
  const double u0 = std::sqrt(1.0 + v2);
  d.u[0] = u0;
  d.du_dt[0] = vv1 / u0;
  for (int i = 1; i < 4; ++i) {
    d.u[i] = v0[static_cast<std::size_t>(i - 1)];
    d.du_dt[i] = v1[static_cast<std::size_t>(i - 1)];
  }
  d.eps = eps0;
  d.deps_dt = eps1;
  return d;
}

}  // namespace vecf
