#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "pindist/space.hpp"

namespace pindist {

/// A subset E of F_q^d: a membership bitmap over flat indices plus the sorted
/// list of member indices. Immutable once built; copying shares nothing heavy
/// beyond the field tables.
class PointSet {
 public:
  PointSet(FieldSpec field, std::uint32_t d)
      : field_(std::move(field)), d_(d), space_(space_size(field_, d)), mask_(space_, false) {}

  /// Builds from flat indices; duplicates collapse, order is normalized.
  static PointSet from_indices(FieldSpec field, std::uint32_t d, std::vector<std::uint64_t> indices) {
    PointSet E(std::move(field), d);
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    for (std::uint64_t idx : indices) {
      if (idx >= E.space_) fail(errc::invalid_param, "point index outside the space");
      E.mask_[idx] = true;
    }
    E.members_ = std::move(indices);
    return E;
  }

  static PointSet from_points(FieldSpec field, std::uint32_t d, const std::vector<Point>& points) {
    std::vector<std::uint64_t> indices;
    indices.reserve(points.size());
    for (const Point& x : points) {
      if (x.size() != d) fail(errc::dimension_mismatch, "point arity differs from d");
      indices.push_back(index_of(field, x));
    }
    return from_indices(std::move(field), d, std::move(indices));
  }

  static PointSet full_space(FieldSpec field, std::uint32_t d) {
    PointSet E(std::move(field), d);
    E.members_.resize(E.space_);
    for (std::uint64_t i = 0; i < E.space_; ++i) E.members_[i] = i;
    E.mask_.assign(E.space_, true);
    return E;
  }

  const FieldSpec& field() const noexcept { return field_; }
  std::uint32_t dim() const noexcept { return d_; }
  std::uint64_t space() const noexcept { return space_; }
  std::uint64_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }

  bool contains(std::uint64_t index) const { return index < space_ && mask_[index]; }
  bool contains(const Point& x) const { return contains(index_of(field_, x)); }

  /// Member flat indices, ascending.
  const std::vector<std::uint64_t>& members() const noexcept { return members_; }

  Point member_point(std::size_t i) const { return point_at(field_, d_, members_[i]); }

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.field_.p() == b.field_.p() && a.field_.k() == b.field_.k() && a.d_ == b.d_ &&
           a.members_ == b.members_;
  }

 private:
  FieldSpec field_;
  std::uint32_t d_;
  std::uint64_t space_;
  std::vector<bool> mask_;
  std::vector<std::uint64_t> members_;
};

}  // namespace pindist
