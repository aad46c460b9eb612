#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "pindist/errors.hpp"

namespace pindist {

/// Exact nonnegative rational in lowest terms. Comparisons cross-multiply in
/// 128-bit integers; nothing here ever touches floating point.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Rational of(std::uint64_t num, std::uint64_t den) {
    if (den == 0) fail(errc::division_by_zero, "rational with zero denominator");
    std::uint64_t g = std::gcd(num, den);
    if (g == 0) g = 1;
    return Rational{num / g, den / g};
  }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;  // both in lowest terms
  }

  friend bool operator<(const Rational& a, const Rational& b) {
    return (unsigned __int128)a.num * b.den < (unsigned __int128)b.num * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }

  bool leq_integer(std::uint64_t v) const {
    return (unsigned __int128)num <= (unsigned __int128)v * den;
  }
};

/// The parameter a > 1 of the pin-count bounds, as an exact rational in
/// lowest terms. Kept desk-scale so every cross-multiplied comparison fits
/// comfortably in 128 bits.
struct RationalParam {
  std::uint64_t num;
  std::uint64_t den;

  RationalParam(std::uint64_t n, std::uint64_t d) : num(n), den(d) {
    if (den == 0) fail(errc::invalid_param, "a must have a nonzero denominator");
    std::uint64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
    if (num <= den) fail(errc::invalid_param, "a must be greater than 1");
    if (num > (1ull << 20)) fail(errc::invalid_param, "a is outside the supported range");
  }

  Rational value() const { return Rational{num, den}; }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  friend bool operator==(const RationalParam&, const RationalParam&) = default;
};

/// Parses `N/D` or a bare integer `N` (meaning N/1). Decimal notation is
/// rejected: thresholds stay exact end to end.
inline RationalParam parse_rational_param(std::string_view text) {
  auto parse_u64 = [](std::string_view s) -> std::uint64_t {
    if (s.empty()) fail(errc::invalid_param, "empty number in rational");
    std::uint64_t v = 0;
    for (char c : s) {
      if (c < '0' || c > '9')
        fail(errc::invalid_param, "rational must be `num/den` with integer parts");
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
      if (v > (1ull << 40)) fail(errc::invalid_param, "rational component too large");
    }
    return v;
  };
  std::size_t slash = text.find('/');
  if (slash == std::string_view::npos) return RationalParam(parse_u64(text), 1);
  return RationalParam(parse_u64(text.substr(0, slash)), parse_u64(text.substr(slash + 1)));
}

}  // namespace pindist
