#pragma once

#include <array>
#include <cmath>

namespace vecf {

/// Value plus its four spacetime partials.
struct Dual {
  double v = 0.0;
  std::array<double, 4> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: constants promote implicitly
  Dual(double value, const std::array<double, 4>& partials) : v(value), d(partials) {}

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int k = 0; k < 4; ++k) d[k] += o.d[k];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int k = 0; k < 4; ++k) d[k] -= o.d[k];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int k = 0; k < 4; ++k) d[k] = d[k] * o.v + v * o.d[k];
    v *= o.v;
    return *this;
  }
  Dual& operator*=(double s) {
    v *= s;
    for (double& x : d) x *= s;
    return *this;
  }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator*(double s, Dual a) { return a *= s; }
inline Dual operator*(Dual a, double s) { return a *= s; }
inline Dual operator-(Dual a) { return a *= -1.0; }

inline Dual operator/(const Dual& a, const Dual& b) {
  Dual r;
  r.v = a.v / b.v;
  for (int k = 0; k < 4; ++k) r.d[k] = (a.d[k] - r.v * b.d[k]) / b.v;
  return r;
}

/// f(a) given f(a.v) and f'(a.v).
inline Dual chain(const Dual& a, double f, double df) {
  Dual r;
  r.v = f;
  for (int k = 0; k < 4; ++k) r.d[k] = df * a.d[k];
  return r;
}

}  // namespace vecf
