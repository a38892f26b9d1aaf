#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "spreadkit/core/error.hpp"

namespace spreadkit {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
using Int128 = __int128;

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

template <class To>
To scalar_cast(const Rational& x) {
  if constexpr (std::is_same_v<To, Rational>) {
    return x;
  } else {
    return to_double(x);
  }
}

template <class To>
To scalar_cast(double x) {
  if constexpr (std::is_same_v<To, Rational>) {
    return Rational(x);  // exact binary expansion
  } else {
    return x;
  }
}

inline std::string to_string(const Rational& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

/// Parses "p/q", a signed integer, or a decimal literal with optional exponent.
/// Decimals are converted exactly ("0.125" -> 1/8).
inline std::optional<Rational> parse_rational(std::string_view s) {
  auto is_int = [](std::string_view t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto to_int = [](std::string_view t) {
    bool neg = t[0] == '-';
    if (t[0] == '+' || t[0] == '-') t.remove_prefix(1);
    while (t.size() > 1 && t[0] == '0') t.remove_prefix(1);  // avoid octal
    BigInt v(std::string{t});
    return neg ? BigInt(-v) : v;
  };
  if (s.empty()) return std::nullopt;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!is_int(num) || !is_int(den) || den[0] == '-' || den[0] == '+') return std::nullopt;
    BigInt d = to_int(den);
    if (d == 0) return std::nullopt;
    return Rational(to_int(num), d);
  }
  // decimal: [sign] digits [. digits] [e [sign] digits]
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  int frac_digits = 0;
  bool seen_dot = false, any_digit = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any_digit) return std::nullopt;
  long exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') return std::nullopt;
    auto rest = s.substr(i + 1);
    if (!is_int(rest) || rest.size() > 6) return std::nullopt;
    exponent = std::stol(std::string(rest));
  }
  // a leading 0 would make the BigInt constructor read octal
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  BigInt mant(digits);
  if (neg) mant = -mant;
  long shift = exponent - frac_digits;
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(shift)));
  return shift >= 0 ? Rational(mant * scale) : Rational(mant, scale);
}

/// Masses rescaled to integers over a common denominator: pi_v = weight[v] / total.
struct IntegerMasses {
  std::vector<std::int64_t> weight;
  std::int64_t total = 0;
};

/// Fails with budget_exceeded when the common denominator does not fit comfortably in
/// 64 bits (downstream code squares these values inside 128-bit accumulators).
inline IntegerMasses integer_masses(const std::vector<Rational>& pi) {
  BigInt lcm = 1;
  for (const auto& p : pi) {
    BigInt d = denominator(p);
    lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
  }
  const BigInt limit = BigInt(1) << 40;
  IntegerMasses out;
  BigInt total = 0;
  for (const auto& p : pi) {
    BigInt w = numerator(p) * (lcm / denominator(p));
    if (w > limit) fail(ErrorKind::budget_exceeded, "masses need a common denominator above 2^40");
    out.weight.push_back(w.convert_to<std::int64_t>());
    total += w;
  }
  if (total > limit) fail(ErrorKind::budget_exceeded, "masses need a common denominator above 2^40");
  out.total = total.convert_to<std::int64_t>();
  return out;
}

inline Rational make_rational(Int128 num, Int128 den) {
  auto to_big = [](Int128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    BigInt hi = static_cast<std::uint64_t>(u >> 64);
    BigInt r = (hi << 64) + BigInt(static_cast<std::uint64_t>(u));
    return neg ? BigInt(-r) : r;
  };
  return Rational(to_big(num), to_big(den));
}

}  // namespace spreadkit
