#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace vecf {

/// Dense row-major N x N matrix with value semantics.
template <int N>
struct SmallMatrix {
  std::array<double, static_cast<std::size_t>(N * N)> a{};

  static constexpr int size() { return N; }

  constexpr double& operator()(int i, int j) { return a[static_cast<std::size_t>(i * N + j)]; }
  constexpr double operator()(int i, int j) const { return a[static_cast<std::size_t>(i * N + j)]; }

  static SmallMatrix identity() {
    SmallMatrix m;
    for (int i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  SmallMatrix& operator+=(const SmallMatrix& o) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += o.a[k];
    return *this;
  }
  SmallMatrix& operator-=(const SmallMatrix& o) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] -= o.a[k];
    return *this;
  }
  friend SmallMatrix operator+(SmallMatrix l, const SmallMatrix& r) { return l += r; }
  friend SmallMatrix operator-(SmallMatrix l, const SmallMatrix& r) { return l -= r; }
  friend SmallMatrix operator*(double s, SmallMatrix m) {
    for (double& x : m.a) x *= s;
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
  }
};

template <int N>
using SmallVector = std::array<double, static_cast<std::size_t>(N)>;

/// In-place LU factorization with partial pivoting. The pivot is the entry of
/// largest magnitude; ties go to the lowest row index. Returns the permutation
/// sign, or 0 when a zero pivot column is met.
template <int N>
int lu_factor(SmallMatrix<N>& m, std::array<int, static_cast<std::size_t>(N)>& perm) {
  int sign = 1;
  for (int i = 0; i < N; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (int k = 0; k < N; ++k) {
    int p = k;
    double best = std::abs(m(k, k));
    for (int i = k + 1; i < N; ++i) {
      const double v = std::abs(m(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) return 0;
    if (p != k) {
      for (int j = 0; j < N; ++j) std::swap(m(k, j), m(p, j));
      std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(p)]);
      sign = -sign;
    }
    const double inv = 1.0 / m(k, k);
    for (int i = k + 1; i < N; ++i) {
      const double f = m(i, k) * inv;
      m(i, k) = f;
      for (int j = k + 1; j < N; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return sign;
}

template <int N>
double determinant(SmallMatrix<N> m) {
  std::array<int, static_cast<std::size_t>(N)> perm{};
  const int sign = lu_factor(m, perm);
  if (sign == 0) return 0.0;
  double d = static_cast<double>(sign);
  for (int i = 0; i < N; ++i) d *= m(i, i);
  return d;
}

/// Solves m x = b; throws std::domain_error if m is singular.
template <int N>
SmallVector<N> solve(SmallMatrix<N> m, const SmallVector<N>& b) {
  std::array<int, static_cast<std::size_t>(N)> perm{};
  if (lu_factor(m, perm) == 0) throw std::domain_error("solve: singular matrix");
  SmallVector<N> x{};
  for (int i = 0; i < N; ++i) {
    double s = b[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    for (int j = 0; j < i; ++j) s -= m(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = s;
  }
  for (int i = N - 1; i >= 0; --i) {
    double s = x[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < N; ++j) s -= m(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = s / m(i, i);
  }
  return x;
}

template <int N>
SmallMatrix<N> inverse(const SmallMatrix<N>& m) {
  SmallMatrix<N> lu = m;
  std::array<int, static_cast<std::size_t>(N)> perm{};
  if (lu_factor(lu, perm) == 0) throw std::domain_error("inverse: singular matrix");
  SmallMatrix<N> out;
  for (int col = 0; col < N; ++col) {
    SmallVector<N> x{};
    for (int i = 0; i < N; ++i) {
      double s = perm[static_cast<std::size_t>(i)] == col ? 1.0 : 0.0;
      for (int j = 0; j < i; ++j) s -= lu(i, j) * x[static_cast<std::size_t>(j)];
      x[static_cast<std::size_t>(i)] = s;
    }
    for (int i = N - 1; i >= 0; --i) {
      double s = x[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < N; ++j) s -= lu(i, j) * x[static_cast<std::size_t>(j)];
      x[static_cast<std::size_t>(i)] = s / lu(i, i);
    }
    for (int i = 0; i < N; ++i) out(i, col) = x[static_cast<std::size_t>(i)];
  }
  return out;
}

template <int N>
SmallVector<N> multiply(const SmallMatrix<N>& m, const SmallVector<N>& v) {
  SmallVector<N> r{};
  for (int i = 0; i < N; ++i) {
    double s = 0.0;
    for (int j = 0; j < N; ++j) s += m(i, j) * v[static_cast<std::size_t>(j)];
    r[static_cast<std::size_t>(i)] = s;
  }
  return r;
}

}  // namespace vecf
