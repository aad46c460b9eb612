#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "pindist/point_set.hpp"

namespace pindist {

/// ||x|| = sum of squared coordinates, valued in F_q. Not a metric: isotropic
/// vectors can have norm 0.
inline FieldElement norm(const FieldSpec& F, const Point& x) {
  std::uint32_t acc = 0;
  for (const FieldElement& c : x) acc = F.add_raw(acc, F.mul_raw(c.code, c.code));
  return {acc};
}

inline FieldElement distance(const FieldSpec& F, const Point& x, const Point& y) {
  if (x.size() != y.size()) fail(errc::dimension_mismatch, "points live in different spaces");
  std::uint32_t acc = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    std::uint32_t diff = F.sub_raw(x[j].code, y[j].code);
    acc = F.add_raw(acc, F.mul_raw(diff, diff));
  }
  return {acc};
}

/// The sphere S_t = {v : ||v|| = t}, by full enumeration.
inline PointSet sphere(const FieldSpec& F, std::uint32_t d, FieldElement t,
                       std::uint64_t cap = kDefaultSizeCap) {
  std::uint64_t n = space_size(F, d);
  if (n > cap) fail(errc::size_cap_exceeded, "sphere enumeration needs q^d <= cap");
  std::vector<std::uint64_t> hits;
  std::vector<std::uint32_t> coords(d, 0);
  std::uint64_t index = 0;
  do {
    std::uint32_t acc = 0;
    for (std::uint32_t c : coords) acc = F.add_raw(acc, F.mul_raw(c, c));
    if (acc == t.code) hits.push_back(index);
    ++index;
  } while (next_point(F, coords));
  return PointSet::from_indices(F, d, std::move(hits));
}

/// Unit-modulus value of the additive character at a field element.
using CharacterValue = std::complex<double>;

/// chi(u) = exp(2*pi*i * Tr(u) / p), the canonical nontrivial additive
/// character of F_q, tabulated per element code.
class CharacterTable {
 public:
  explicit CharacterTable(const FieldSpec& F) : values_(F.q()) {
    std::vector<CharacterValue> roots(F.p());
    for (std::uint32_t r = 0; r < F.p(); ++r) {
      double angle = 2.0 * std::numbers::pi * r / F.p();
      roots[r] = {std::cos(angle), std::sin(angle)};
      if (std::abs(std::norm(roots[r]) - 1.0) > 1e-12)
        throw std::logic_error("character value off the unit circle");
    }
    for (std::uint64_t u = 0; u < F.q(); ++u)
      values_[u] = roots[F.trace({static_cast<std::uint32_t>(u)}).code];
  }

  CharacterValue value(FieldElement u) const { return values_[u.code]; }

 private:
  std::vector<CharacterValue> values_;
};

/// Number of pins equidistant from x and z, by exhaustive enumeration.
/// Equals q^{d-1} for x != z and q^d for x = z.
inline std::uint64_t bisector_count_enum(const FieldSpec& F, const Point& x, const Point& z,
                                         std::uint64_t cap = kDefaultSizeCap) {
  if (x.size() != z.size()) fail(errc::dimension_mismatch, "points live in different spaces");
  std::uint32_t d = static_cast<std::uint32_t>(x.size());
  std::uint64_t n = space_size(F, d);
  if (n > cap) fail(errc::size_cap_exceeded, "bisector enumeration needs q^d <= cap");
  std::uint64_t count = 0;
  std::vector<std::uint32_t> coords(d, 0);
  Point y(d);
  do {
    for (std::uint32_t j = 0; j < d; ++j) y[j].code = coords[j];
    if (distance(F, x, y) == distance(F, z, y)) ++count;
  } while (next_point(F, coords));
  return count;
}

/// Same count via the linear equation 2(z-x).y = ||z|| - ||x||; no
/// enumeration, usable beyond the cap.
inline std::uint64_t bisector_count_closed(const FieldSpec& F, const Point& x, const Point& z) {
  if (x.size() != z.size()) fail(errc::dimension_mismatch, "points live in different spaces");
  std::uint32_t d = static_cast<std::uint32_t>(x.size());
  std::uint64_t n = space_size(F, d);
  bool zero_coeff = true;
  for (std::uint32_t j = 0; j < d; ++j) {
    std::uint32_t w = F.add_raw(F.sub_raw(z[j].code, x[j].code), F.sub_raw(z[j].code, x[j].code));
    if (w != 0) zero_coeff = false;
  }
  if (!zero_coeff) return n / F.q();  // q^{d-1} solutions of a nontrivial linear equation
  std::uint32_t rhs = F.sub_raw(norm(F, z).code, norm(F, x).code);
  return rhs == 0 ? n : 0;
}

/// Enumerates when q^d fits under the cap, otherwise falls back to the
/// closed form. Both routes agree wherever both run.
inline std::uint64_t bisector_count(const FieldSpec& F, const Point& x, const Point& z,
                                    std::uint64_t cap = kDefaultSizeCap) {
  std::uint64_t n = space_size(F, static_cast<std::uint32_t>(x.size()));
  if (n <= cap) return bisector_count_enum(F, x, z, cap);
  return bisector_count_closed(F, x, z);
}

namespace detail {

/// Rounds a correlation entry that must be a nonnegative integer. A residual
/// of 0.25 or more (real or imaginary) signals a broken character table or
/// transform, not ordinary floating-point noise.
inline std::int64_t round_correlation(double re, double im) {
  double nearest = std::nearbyint(re);
  if (std::abs(re - nearest) >= 0.25 || std::abs(im) >= 0.25)
    fail(errc::residual_too_large, "correlation entry is not near an integer");
  return static_cast<std::int64_t>(nearest);
}

}  // namespace detail

/// Evaluates q^{-1} * sum over pins y and s in F_q of chi(s(||x-y||-||z-y||))
/// in double precision and returns the real part. The accumulated imaginary
/// part must stay below 1e-6 * q^d and the real part within 0.25 of an
/// integer, else ResidualTooLarge.
inline double bisector_count_charsum(const FieldSpec& F, const Point& x, const Point& z,
                                     const CharacterTable& chi,
                                     std::uint64_t cap = kDefaultSizeCap) {
  if (x.size() != z.size()) fail(errc::dimension_mismatch, "points live in different spaces");
  std::uint32_t d = static_cast<std::uint32_t>(x.size());
  std::uint64_t n = space_size(F, d);
  if (n > cap) fail(errc::size_cap_exceeded, "character sum needs q^d <= cap");

  // Group the pin sum by the value of ||x-y|| - ||z-y||; the character double
  // sum then runs over q^2 terms instead of q^d * q.
  std::vector<std::uint64_t> diff_hist(F.q(), 0);
  std::vector<std::uint32_t> coords(d, 0);
  Point y(d);
  do {
    for (std::uint32_t j = 0; j < d; ++j) y[j].code = coords[j];
    std::uint32_t u = F.sub_raw(distance(F, x, y).code, distance(F, z, y).code);
    ++diff_hist[u];
  } while (next_point(F, coords));

  std::complex<double> sum{0.0, 0.0};
  for (std::uint32_t s = 0; s < F.q(); ++s) {
    for (std::uint32_t u = 0; u < F.q(); ++u) {
      if (diff_hist[u] == 0) continue;
      sum += static_cast<double>(diff_hist[u]) * chi.value({F.mul_raw(s, u)});
    }
  }
  sum /= static_cast<double>(F.q());

  if (std::abs(sum.imag()) > 1e-6 * static_cast<double>(n))
    fail(errc::residual_too_large, "imaginary part of character sum too large");
  (void)detail::round_correlation(sum.real(), sum.imag());
  return sum.real();
}

inline double bisector_count_charsum(const FieldSpec& F, const Point& x, const Point& z,
                                     std::uint64_t cap = kDefaultSizeCap) {
  return bisector_count_charsum(F, x, z, CharacterTable(F), cap);
}

}  // namespace pindist
