#pragma once

#include <cstdint>
#include <vector>

#include "pindist/field.hpp"

namespace pindist {

/// A point of F_q^d. Enumeration and storage elsewhere use flat indices in
/// 0..q^d-1 (mixed radix over element codes, coordinate 0 least significant);
/// the tuple view is derived on demand.
using Point = std::vector<FieldElement>;

/// q^d, guarded against 64-bit overflow.
inline std::uint64_t space_size(const FieldSpec& F, std::uint32_t d) {
  if (d < 1) fail(errc::invalid_param, "dimension must be at least 1");
  std::uint64_t n = 1;
  for (std::uint32_t i = 0; i < d; ++i) {
    if (n > (1ull << 62) / F.q()) fail(errc::integer_overflow, "q^d exceeds 2^62");
    n *= F.q();
  }
  return n;
}

inline Point point_at(const FieldSpec& F, std::uint32_t d, std::uint64_t index) {
  Point x(d);
  for (std::uint32_t j = 0; j < d; ++j) {
    x[j] = FieldElement{static_cast<std::uint32_t>(index % F.q())};
    index /= F.q();
  }
  return x;
}

inline std::uint64_t index_of(const FieldSpec& F, const Point& x) {
  std::uint64_t index = 0;
  for (std::size_t j = x.size(); j-- > 0;) index = index * F.q() + x[j].code;
  return index;
}

/// Steps flat-index coordinates to the next point; coords must have d entries
/// of codes < q. Returns false after wrapping past the last point.
inline bool next_point(const FieldSpec& F, std::vector<std::uint32_t>& coords) {
  for (auto& c : coords) {
    if (++c < F.q()) return true;
    c = 0;
  }
  return false;
}

}  // namespace pindist
