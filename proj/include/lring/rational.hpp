#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "lring/error.hpp"

namespace lring {

/// Exact rational scalar. Always normalized: positive denominator, gcd 1.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;

inline Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }
inline Rational pos(const Rational& q) { return q > 0 ? q : Rational(0); }

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

/// Smallest integer >= q.
inline Integer ceil(const Rational& q) {
  Integer n = numerator(q), d = denominator(q);
  Integer quot = n / d;  // truncates toward zero
  if (quot * d != n && n > 0) ++quot;
  return quot;
}

/// Largest integer <= q.
inline Integer floor(const Rational& q) {
  Integer n = numerator(q), d = denominator(q);
  Integer quot = n / d;
  if (quot * d != n && n < 0) --quot;
  return quot;
}

/// "p/q" or "p" when the denominator is 1.
inline std::string to_string(const Rational& q) {
  if (is_integer(q)) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

namespace detail {
inline bool parse_int(std::string_view s, Integer& out) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') i = 1;
  if (i == s.size()) return false;
  for (std::size_t j = i; j < s.size(); ++j)
    if (s[j] < '0' || s[j] > '9') return false;
  out = Integer(std::string(s.substr(s[0] == '+' ? 1 : 0)));
  return true;
}
}  // namespace detail

/// Parses "p/q", "p", or "-p/q". Decimal notation is rejected.
inline Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  Integer num, den{1};
  bool ok = detail::parse_int(text.substr(0, slash), num);
  if (ok && slash != std::string_view::npos) {
    auto rest = text.substr(slash + 1);
    ok = !rest.empty() && rest[0] != '-' && rest[0] != '+' && detail::parse_int(rest, den) && den != 0;
  }
  if (!ok) throw Error(ErrorCode::ParseError, "malformed rational literal '" + std::string(text) + "'");
  return Rational(num, den);
}

}  // namespace lring
