#include "recurdim/rational.hpp"

#include <charconv>
#include <stdexcept>

namespace recurdim {

namespace {

std::int64_t parse_integer(std::string_view text) {
  std::int64_t value = 0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

double to_double(const Rational& value) {
  return static_cast<double>(value.numerator()) /
         static_cast<double>(value.denominator());
}

std::int64_t floor(const Rational& value) {
  const auto n = value.numerator();
  const auto d = value.denominator();
  auto q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

std::int64_t ceil(const Rational& value) { return -floor(-value); }

Rational parse_rational(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational literal");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = parse_integer(text.substr(0, slash));
    const auto den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    bool negative = text.front() == '-';
    auto int_part = text.substr(0, dot);
    auto frac_part = text.substr(dot + 1);
    if (frac_part.size() > 15) throw std::invalid_argument("too many decimal digits");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    std::int64_t whole = 0;
    if (!(int_part.empty() || int_part == "-" || int_part == "+")) whole = parse_integer(int_part);
    std::int64_t frac = frac_part.empty() ? 0 : parse_integer(frac_part);
    if (frac < 0 || (!frac_part.empty() && (frac_part.front() == '-' || frac_part.front() == '+'))) {
      throw std::invalid_argument("malformed decimal: '" + std::string(text) + "'");
    }
    Rational magnitude = Rational(whole < 0 ? -whole : whole) + Rational(frac, scale);
    return negative ? -magnitude : magnitude;
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& value) {
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

std::string to_string(const Interval& interval) {
  return "[" + to_string(interval.lo) + "," + to_string(interval.hi) + "]";
}

}  // namespace recurdim
