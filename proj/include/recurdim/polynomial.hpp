#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "recurdim/rational.hpp"

namespace recurdim {

inline constexpr int kDefaultDegreeCap = 8;

/// Dense univariate polynomial, coefficients in ascending degree.
///
/// Trailing zero coefficients are dropped on construction, so the zero
/// polynomial has no coefficients and degree() == 0.
template <typename Scalar>
class BasicPolynomial {
 public:
  BasicPolynomial() = default;
  explicit BasicPolynomial(std::vector<Scalar> coefficients)
      : coefficients_(std::move(coefficients)) {
    while (!coefficients_.empty() && coefficients_.back() == Scalar(0)) {
      coefficients_.pop_back();
    }
  }

  static BasicPolynomial constant(Scalar c) { return BasicPolynomial({c}); }

  int degree() const {
    return coefficients_.empty() ? 0 : static_cast<int>(coefficients_.size()) - 1;
  }
  bool is_zero() const { return coefficients_.empty(); }
  std::span<const Scalar> coefficients() const { return coefficients_; }

  Scalar operator()(Scalar x) const {
    Scalar acc(0);
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
      acc = acc * x + *it;
    }
    return acc;
  }

  BasicPolynomial derivative() const {
    if (coefficients_.size() <= 1) return {};
    std::vector<Scalar> d(coefficients_.size() - 1);
    for (std::size_t i = 1; i < coefficients_.size(); ++i) {
      d[i - 1] = coefficients_[i] * static_cast<Scalar>(i);
    }
    return BasicPolynomial(std::move(d));
  }

  friend bool operator==(const BasicPolynomial&, const BasicPolynomial&) = default;

 private:
  std::vector<Scalar> coefficients_;
};

using Polynomial = BasicPolynomial<double>;

/// Closed range [min, max] of a real function on an interval.
struct Range {
  double min;
  double max;
};

/// Range of |p| derived from the signed range of p.
inline Range abs_range(const Range& signed_range) {
  if (signed_range.min <= 0.0 && signed_range.max >= 0.0) {
    return {0.0, std::max(-signed_range.min, signed_range.max)};
  }
  const double a = std::abs(signed_range.min);
  const double b = std::abs(signed_range.max);
  return {std::min(a, b), std::max(a, b)};
}

namespace detail {

template <typename Scalar>
void check_degree(const BasicPolynomial<Scalar>& p, int cap) {
  if (p.degree() > cap) {
    throw std::invalid_argument("polynomial degree " + std::to_string(p.degree()) +
                                " exceeds cap " + std::to_string(cap));
  }
}

template <typename Scalar>
Scalar bisect_root(const BasicPolynomial<Scalar>& p, Scalar a, Scalar b) {
  Scalar fa = p(a);
  for (int it = 0; it < 200 && (b - a) > Scalar(1e-12); ++it) {
    const Scalar mid = (a + b) / 2;
    const Scalar fm = p(mid);
    if (fm == Scalar(0)) return mid;
    if ((fa < 0) == (fm < 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return (a + b) / 2;
}

}  // namespace detail

/// Real roots of p strictly inside (lo, hi), sorted ascending.
///
/// Sign changes are isolated recursively: the roots of p' split (lo, hi) into
/// pieces on which p is monotone, and each piece holds at most one root, found
/// by bisection to 1e-12. Roots of even multiplicity that do not change sign
/// are reported only when p evaluates to exactly zero at a breakpoint.
template <typename Scalar>
std::vector<Scalar> real_roots(const BasicPolynomial<Scalar>& p, Scalar lo, Scalar hi) {
  std::vector<Scalar> roots;
  if (p.is_zero() || p.degree() == 0 || !(lo < hi)) return roots;
  if (p.degree() == 1) {
    const auto c = p.coefficients();
    const Scalar root = -c[0] / c[1];
    if (lo < root && root < hi) roots.push_back(root);
    return roots;
  }
  std::vector<Scalar> breaks{lo};
  for (Scalar c : real_roots(p.derivative(), lo, hi)) breaks.push_back(c);
  breaks.push_back(hi);

  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const Scalar a = breaks[i];
    const Scalar b = breaks[i + 1];
    const Scalar fa = p(a);
    const Scalar fb = p(b);
    if (i > 0 && fa == Scalar(0)) {
      roots.push_back(a);
      continue;
    }
    if (fa != Scalar(0) && fb != Scalar(0) && ((fa < 0) != (fb < 0))) {
      roots.push_back(detail::bisect_root(p, a, b));
    }
  }
  return roots;
}

/// Points where p may attain an extremum on [lo, hi]: both endpoints and the
/// sign-changing roots of p' in between, sorted.
template <typename Scalar>
std::vector<Scalar> monotone_breakpoints(const BasicPolynomial<Scalar>& p, Scalar lo, Scalar hi) {
  std::vector<Scalar> pts{lo};
  if (lo < hi) {
    for (Scalar c : real_roots(p.derivative(), lo, hi)) pts.push_back(c);
    pts.push_back(hi);
  }
  return pts;
}

/// Signed range of p over the closed interval J.
inline Range poly_range(const Polynomial& p, const Interval& J, int degree_cap = kDefaultDegreeCap) {
  detail::check_degree(p, degree_cap);
  const double lo = to_double(J.lo);
  const double hi = to_double(J.hi);
  Range r{p(lo), p(lo)};
  for (double t : monotone_breakpoints(p, lo, hi)) {
    const double v = p(t);
    r.min = std::min(r.min, v);
    r.max = std::max(r.max, v);
  }
  return r;
}

inline Range poly_abs_range(const Polynomial& p, const Interval& J, int degree_cap = kDefaultDegreeCap) {
  return abs_range(poly_range(p, J, degree_cap));
}

/// Total variation of p over J by monotone decomposition.
inline double poly_variation(const Polynomial& p, const Interval& J, int degree_cap = kDefaultDegreeCap) {
  detail::check_degree(p, degree_cap);
  const auto pts = monotone_breakpoints(p, to_double(J.lo), to_double(J.hi));
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += std::abs(p(pts[i + 1]) - p(pts[i]));
  return total;
}

}  // namespace recurdim
