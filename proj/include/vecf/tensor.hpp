#pragma once

// Coordinate-basis tensor algebra on a 4D Lorentzian manifold, signature -+++.
// All contractions sum indices in ascending order (alpha, then beta) so that
// results are bit-reproducible.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "vecf/linalg.hpp"

namespace vecf {

using Mat4 = SmallMatrix<4>;

/// Contravariant components v^alpha.
struct Vec4 {
  std::array<double, 4> c{};

  constexpr double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  constexpr double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  bool finite() const {
    for (double x : c)
      if (!std::isfinite(x)) return false;
    return true;
  }
};

/// Covariant components xi_alpha.
struct Covec4 {
  std::array<double, 4> c{};

  constexpr double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  constexpr double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  bool finite() const {
    for (double x : c)
      if (!std::isfinite(x)) return false;
    return true;
  }
};

inline Vec4 operator*(double s, const Vec4& v) {
  Vec4 r;
  for (int i = 0; i < 4; ++i) r[i] = s * v[i];
  return r;
}
inline Covec4 operator*(double s, const Covec4& v) {
  Covec4 r;
  for (int i = 0; i < 4; ++i) r[i] = s * v[i];
  return r;
}

/// Pairing u^mu xi_mu; needs no metric.
inline double contract(const Vec4& v, const Covec4& xi) {
  double s = 0.0;
  for (int a = 0; a < 4; ++a) s += v[a] * xi[a];
  return s;
}

/// Eigenvalues of a symmetric 4x4 matrix (cyclic Jacobi), unsorted.
inline std::array<double, 4> symmetric_eigenvalues(Mat4 a) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 4; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < 4; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  return {a(0, 0), a(1, 1), a(2, 2), a(3, 3)};
}

/// Symmetric metric g_{ab} with its inverse g^{ab} computed once at construction.
class Metric4 {
 public:
  /// Throws std::invalid_argument unless `g` is symmetric, well conditioned
  /// (|det| > 1e-10) and of signature (-,+,+,+).
  explicit Metric4(const Mat4& g) : g_(g) {
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        if (!std::isfinite(g(a, b))) throw std::invalid_argument("Metric4: non-finite component");
        if (std::abs(g(a, b) - g(b, a)) > 1e-14 * (1.0 + std::abs(g(a, b))))
          throw std::invalid_argument("Metric4: components not symmetric");
      }
    const double det = determinant(g_);
    if (!(std::abs(det) > 1e-10)) throw std::invalid_argument("Metric4: |det g| <= 1e-10");
    if (!is_lorentzian(g_)) throw std::invalid_argument("Metric4: signature is not (-,+,+,+)");
    inv_ = inverse(g_);
  }

  double operator()(int a, int b) const { return g_(a, b); }
  double inv(int a, int b) const { return inv_(a, b); }
  const Mat4& components() const { return g_; }
  const Mat4& inverse_components() const { return inv_; }

  static bool is_lorentzian(const Mat4& g) {
    int neg = 0, pos = 0;
    for (double ev : symmetric_eigenvalues(g)) {
      if (ev < 0.0) ++neg;
      else if (ev > 0.0) ++pos;
    }
    return neg == 1 && pos == 3;
  }

  bool is_minkowski(double tol = 0.0) const {
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const double want = a != b ? 0.0 : (a == 0 ? -1.0 : 1.0);
        if (std::abs(g_(a, b) - want) > tol) return false;
      }
    return true;
  }

 private:
  Mat4 g_;
  Mat4 inv_;
};

inline Metric4 minkowski() {
  static const Metric4 eta = [] {
    Mat4 g;
    g(0, 0) = -1.0;
    g(1, 1) = g(2, 2) = g(3, 3) = 1.0;
    return Metric4(g);
  }();
  return eta;
}

/// Minkowski plus a seeded symmetric perturbation with max-norm <= delta.
inline Metric4 random_lorentzian_near_minkowski(double delta, std::uint64_t seed) {
  if (!(delta >= 0.0 && delta <= 0.1))
    throw std::invalid_argument("random_lorentzian_near_minkowski: delta must lie in [0, 0.1]");
  if (delta == 0.0) return minkowski();
  Mat4 g = minkowski().components();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-delta, delta);
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      const double p = dist(rng);
      g(a, b) += p;
      if (a != b) g(b, a) += p;
    }
  return Metric4(g);
}

inline Covec4 lower(const Vec4& v, const Metric4& g) {
  Covec4 r;
  for (int a = 0; a < 4; ++a) {
    double s = 0.0;
    for (int b = 0; b < 4; ++b) s += g(a, b) * v[b];
    r[a] = s;
  }
  return r;
}

inline Vec4 raise(const Covec4& xi, const Metric4& g) {
  Vec4 r;
  for (int a = 0; a < 4; ++a) {
    double s = 0.0;
    for (int b = 0; b < 4; ++b) s += g.inv(a, b) * xi[b];
    r[a] = s;
  }
  return r;
}

/// g_{ab} v^a w^b with the symmetric summation order sum_{a<=b}, so swapping
/// the arguments gives the identical floating-point result.
inline double inner(const Vec4& v, const Vec4& w, const Metric4& g) {
  double s = 0.0;
  for (int a = 0; a < 4; ++a) {
    s += g(a, a) * (v[a] * w[a]);
    for (int b = a + 1; b < 4; ++b) s += g(a, b) * (v[a] * w[b] + v[b] * w[a]);
  }
  return s;
}

/// g^{ab} xi_a zeta_b, same summation order as the vector version.
inline double inner(const Covec4& xi, const Covec4& zeta, const Metric4& g) {
  double s = 0.0;
  for (int a = 0; a < 4; ++a) {
    s += g.inv(a, a) * (xi[a] * zeta[a]);
    for (int b = a + 1; b < 4; ++b) s += g.inv(a, b) * (xi[a] * zeta[b] + xi[b] * zeta[a]);
  }
  return s;
}

/// The timelike vector with spatial part `spatial` normalized to g(u,u) = -1
/// (future-pointing root of the quadratic in u^0).
inline Vec4 normalized_velocity(const std::array<double, 3>& spatial, const Metric4& g) {
  const double a = g(0, 0);
  double b = 0.0, c = 1.0;
  for (int i = 1; i < 4; ++i) {
    b += 2.0 * g(0, i) * spatial[static_cast<std::size_t>(i - 1)];
    for (int j = 1; j < 4; ++j)
      c += g(i, j) * spatial[static_cast<std::size_t>(i - 1)] * spatial[static_cast<std::size_t>(j - 1)];
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) throw std::invalid_argument("normalized_velocity: no timelike completion");
  // a < 0 near Minkowski; pick the root with u^0 > 0.
  const double r1 = (-b - std::sqrt(disc)) / (2.0 * a);
  const double r2 = (-b + std::sqrt(disc)) / (2.0 * a);
  Vec4 u;
  u[0] = r1 > 0.0 ? r1 : r2;
  for (int i = 1; i < 4; ++i) u[i] = spatial[static_cast<std::size_t>(i - 1)];
  return u;
}

}  // namespace vecf
