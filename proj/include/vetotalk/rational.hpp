#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "vetotalk/error.hpp"

namespace vetotalk {

using Integer = boost::multiprecision::mpz_int;

// GMP-backed rational; expression templates off so `auto` is always a value.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

using Vec = std::vector<Rational>;

namespace detail {

inline bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

inline Integer parse_integer(std::string_view s) {
  std::string digits(s);
  if (!digits.empty() && digits.front() == '+') digits.erase(0, 1);
  return Integer(digits);
}

}  // namespace detail

// Accepts "a", "a/b" (b > 0 after sign handling) and plain decimals "1.25".
// The result is always in lowest terms.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] {
    throw Error(ErrorCode::kParse, "not an exact rational: \"" + std::string(text) + "\"");
  };
  if (text.empty()) fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!detail::is_integer_literal(num) || !detail::is_integer_literal(den)) fail();
    Integer d = detail::parse_integer(den);
    if (d == 0) fail();
    return Rational(detail::parse_integer(num), d);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    std::string_view whole_digits = whole;
    if (!whole_digits.empty() && (whole_digits.front() == '-' || whole_digits.front() == '+')) {
      whole_digits.remove_prefix(1);
    }
    if (frac.empty() || !detail::is_integer_literal(frac) || frac.front() == '-' ||
        frac.front() == '+' || (!whole_digits.empty() && !detail::is_integer_literal(whole_digits))) {
      fail();
    }
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Integer magnitude =
        (whole_digits.empty() ? Integer(0) : detail::parse_integer(whole_digits)) * scale +
        detail::parse_integer(frac);
    return Rational(negative ? Integer(-magnitude) : magnitude, scale);
  }
  if (!detail::is_integer_literal(text)) fail();
  return Rational(detail::parse_integer(text));
}

inline std::string to_string(const Rational& r) { return r.str(); }

inline Vec parse_vec(const std::vector<std::string>& items) {
  Vec out;
  out.reserve(items.size());
  for (const auto& s : items) out.push_back(parse_rational(s));
  return out;
}

inline std::string to_string(std::span<const Rational> v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i].str();
  }
  return out + ")";
}

inline Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dot product of lengths " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()));
  }
  Rational acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline Rational sum(std::span<const Rational> v) {
  Rational acc = 0;
  for (const auto& x : v) acc += x;
  return acc;
}

inline Vec unit_vector(std::size_t n, std::size_t i) {
  Vec e(n, Rational(0));
  e.at(i) = 1;
  return e;
}

}  // namespace vetotalk
