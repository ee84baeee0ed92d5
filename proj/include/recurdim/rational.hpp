#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace recurdim {

/// Exact rational number, always normalized with a positive denominator.
using Rational = boost::rational<std::int64_t>;

double to_double(const Rational& value);

/// Floor and ceiling toward the integers.
std::int64_t floor(const Rational& value);
std::int64_t ceil(const Rational& value);

/// Parses `p/q`, an integer, or a finite decimal such as `0.51` (exactly).
/// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// Formats as `p/q`; integers keep the `/1` suffix so output is uniform.
std::string to_string(const Rational& value);

/// Closed interval with exact rational endpoints, lo <= hi.
struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  bool contains(const Interval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  /// True when the interiors intersect.
  bool overlaps(const Interval& other) const {
    return lo < other.hi && other.lo < hi;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

std::string to_string(const Interval& interval);

}  // namespace recurdim
