#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace vecf {

/// Real polynomial, coefficients in ascending powers.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> c) : c_(std::move(c)) { trim(); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<double>& coeffs() const { return c_; }
  double coeff(int k) const { return k < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(k)] : 0.0; }

  double operator()(double x) const {
    double r = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial({0.0});
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
  }

  /// All real roots lie in [-bound, bound].
  double cauchy_bound() const {
    const double lead = std::abs(c_.back());
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < c_.size(); ++k) m = std::max(m, std::abs(c_[k]) / lead);
    return 1.0 + m;
  }

 private:
  void trim() {
    if (c_.empty()) c_.push_back(0.0);
    double scale = 0.0;
    for (double x : c_) scale = std::max(scale, std::abs(x));
    while (c_.size() > 1 && std::abs(c_.back()) <= 1e-14 * scale) c_.pop_back();
  }

  std::vector<double> c_{0.0};
};

namespace detail {

inline double bisect(const Polynomial& p, double lo, double hi, double tol) {
  double flo = p(lo);
  for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, std::abs(lo) + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Real roots in ascending order. Critical points (roots of p') split the
/// Cauchy interval into monotone pieces; each sign change is refined by
/// bisection to `tol`. A double root shows up once, at the critical point,
/// when p vanishes there to within rounding.
inline std::vector<double> real_roots_bisection(const Polynomial& p, double tol = 1e-12) {
  std::vector<double> out;
  const int n = p.degree();
  if (n <= 0) return out;
  if (n == 1) {
    out.push_back(-p.coeff(0) / p.coeff(1));
    return out;
  }
  const double bound = p.cauchy_bound();
  std::vector<double> knots{-bound};
  for (double c : real_roots_bisection(p.derivative(), tol))
    if (c > -bound && c < bound) knots.push_back(c);
  knots.push_back(bound);

  double scale = 0.0;
  for (double c : p.coeffs()) scale = std::max(scale, std::abs(c));
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = knots[k], b = knots[k + 1];
    const double fa = p(a), fb = p(b);
    if (fa == 0.0) {
      if (out.empty() || out.back() != a) out.push_back(a);
      continue;
    }
    if ((fa < 0.0) != (fb < 0.0) && fb != 0.0) out.push_back(detail::bisect(p, a, b, tol));
  }
  const double last = knots.back();
  if (p(last) == 0.0 && (out.empty() || out.back() != last)) out.push_back(last);
  // touching roots at critical points
  for (std::size_t k = 1; k + 1 < knots.size(); ++k) {
    const double c = knots[k];
    if (std::abs(p(c)) <= 1e-13 * scale * std::max(1.0, std::pow(std::abs(c), n)) &&
        std::none_of(out.begin(), out.end(), [&](double r) { return std::abs(r - c) <= 1e-9; }))
      out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace vecf
