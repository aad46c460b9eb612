#include "pindist/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <random>

namespace {

using pindist::bisector_count;
using pindist::bisector_count_charsum;
using pindist::bisector_count_closed;
using pindist::bisector_count_enum;
using pindist::CharacterTable;
using pindist::distance;
using pindist::Error;
using pindist::errc;
using pindist::FieldElement;
using pindist::FieldSpec;
using pindist::index_of;
using pindist::make_field;
using pindist::norm;
using pindist::Point;
using pindist::point_at;
using pindist::PointSet;
using pindist::space_size;
using pindist::sphere;

Point pt(std::initializer_list<std::uint32_t> codes) {
  Point x;
  for (std::uint32_t c : codes) x.push_back({c});
  return x;
}

// Independent oracle for F_3^2: all nine points with integer arithmetic.
TEST(Norm, MatchesNinePointEnumeration) {
  FieldSpec F3 = make_field(3, 1);
  int sphere_sizes[3] = {0, 0, 0};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      int want = (a * a + b * b) % 3;
      EXPECT_EQ(static_cast<int>(norm(F3, pt({(std::uint32_t)a, (std::uint32_t)b})).code), want);
      ++sphere_sizes[want];
    }
  EXPECT_EQ(sphere_sizes[0], 1);
  EXPECT_EQ(sphere_sizes[1], 4);
  EXPECT_EQ(sphere_sizes[2], 4);
}

TEST(Norm, Examples) {
  FieldSpec F3 = make_field(3, 1);
  EXPECT_EQ(norm(F3, pt({0, 0})).code, 0u);
  EXPECT_EQ(norm(F3, pt({1, 2})).code, 2u);  // 1 + 4 = 5 = 2 mod 3
}

TEST(Norm, NegationInvariant) {
  std::mt19937_64 rng(7);
  for (auto [p, k] : {std::pair<int, int>{3, 1}, {3, 2}, {5, 1}, {5, 2}}) {
    FieldSpec F = make_field(p, k);
    for (int rep = 0; rep < 10000; ++rep) {
      Point v(3);
      for (auto& c : v) c.code = static_cast<std::uint32_t>(rng() % F.q());
      Point nv(3);
      for (std::size_t j = 0; j < 3; ++j) nv[j] = F.neg(v[j]);
      EXPECT_EQ(norm(F, v), norm(F, nv));
    }
  }
}

TEST(Distance, ExamplesAndSymmetry) {
  FieldSpec F3 = make_field(3, 1);
  EXPECT_EQ(distance(F3, pt({0, 0}), pt({1, 0})).code, 1u);
  EXPECT_EQ(distance(F3, pt({1, 2}), pt({2, 1})).code, 2u);  // 1 + 1
  EXPECT_EQ(distance(F3, pt({1, 2}), pt({1, 2})).code, 0u);

  std::mt19937_64 rng(11);
  for (auto [p, k] : {std::pair<int, int>{3, 1}, {3, 2}, {5, 1}, {7, 1}}) {
    FieldSpec F = make_field(p, k);
    for (int rep = 0; rep < 10000; ++rep) {
      Point x(2), y(2), c(2);
      for (std::size_t j = 0; j < 2; ++j) {
        x[j].code = static_cast<std::uint32_t>(rng() % F.q());
        y[j].code = static_cast<std::uint32_t>(rng() % F.q());
        c[j].code = static_cast<std::uint32_t>(rng() % F.q());
      }
      ASSERT_EQ(distance(F, x, y), distance(F, y, x));
      // translation invariance
      Point xc(2), yc(2);
      for (std::size_t j = 0; j < 2; ++j) {
        xc[j] = F.add(x[j], c[j]);
        yc[j] = F.add(y[j], c[j]);
      }
      ASSERT_EQ(distance(F, xc, yc), distance(F, x, y));
    }
  }
}

TEST(Distance, DimensionMismatch) {
  FieldSpec F3 = make_field(3, 1);
  try {
    distance(F3, pt({0, 0}), pt({0, 0, 0}));
    FAIL() << "expected DimensionMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::dimension_mismatch);
  }
}

TEST(Sphere, SizesPartitionTheSpace) {
  for (auto [p, k, d] : {std::tuple<int, int, int>{3, 1, 2}, {3, 1, 3}, {3, 2, 2},
                         {5, 1, 2}, {5, 1, 3}, {7, 1, 2}, {5, 2, 2}}) {
    FieldSpec F = make_field(p, k);
    std::uint64_t total = 0;
    for (std::uint32_t t = 0; t < F.q(); ++t)
      total += sphere(F, d, {t}).size();
    EXPECT_EQ(total, space_size(F, d)) << "q=" << F.q() << " d=" << d;
  }
}

TEST(Sphere, F3dTwoSizes) {
  FieldSpec F3 = make_field(3, 1);
  EXPECT_EQ(sphere(F3, 2, {0}).size(), 1u);  // only the origin
  EXPECT_EQ(sphere(F3, 2, {1}).size(), 4u);
  EXPECT_EQ(sphere(F3, 2, {2}).size(), 4u);
}

TEST(Sphere, CapRespected) {
  FieldSpec F3 = make_field(3, 1);
  try {
    sphere(F3, 3, {0}, /*cap=*/10);  // 27 > 10
    FAIL() << "expected SizeCapExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::size_cap_exceeded);
  }
}

TEST(Bisector, F3dTwoWorkedExample) {
  FieldSpec F3 = make_field(3, 1);
  // Solving -2 y1 + 1 = 0 gives y1 = 2 with y2 free: three pins.
  EXPECT_EQ(bisector_count_enum(F3, pt({0, 0}), pt({1, 0})), 3u);
  EXPECT_EQ(bisector_count_closed(F3, pt({0, 0}), pt({1, 0})), 3u);
}

TEST(Bisector, EqualPointsCountWholeSpace) {
  FieldSpec F5 = make_field(5, 1);
  EXPECT_EQ(bisector_count_enum(F5, pt({1, 2, 3}), pt({1, 2, 3})), 125u);
  EXPECT_EQ(bisector_count_closed(F5, pt({1, 2, 3}), pt({1, 2, 3})), 125u);
}

TEST(Bisector, F5dThreeHyperplane) {
  FieldSpec F5 = make_field(5, 1);
  EXPECT_EQ(bisector_count_enum(F5, pt({0, 0, 0}), pt({2, 4, 1})), 25u);
}

TEST(Bisector, EnumMatchesClosedFormEverywhereSmall) {
  for (auto [p, k, d] : {std::tuple<int, int, int>{3, 1, 1}, {5, 1, 1}, {3, 2, 1},
                         {3, 1, 2}, {5, 1, 2}, {3, 2, 2}, {3, 1, 3}}) {
    FieldSpec F = make_field(p, k);
    std::uint64_t n = space_size(F, d);
    for (std::uint64_t xi = 0; xi < n; ++xi)
      for (std::uint64_t zi = 0; zi < n; ++zi) {
        Point x = point_at(F, d, xi);
        Point z = point_at(F, d, zi);
        std::uint64_t want = xi == zi ? n : n / F.q();
        ASSERT_EQ(bisector_count_enum(F, x, z), want);
        ASSERT_EQ(bisector_count_closed(F, x, z), want);
      }
  }
}

TEST(Bisector, DispatchFallsBackToClosedFormBeyondCap) {
  FieldSpec F5 = make_field(5, 1);
  // cap 10 < 25 forces the closed form
  EXPECT_EQ(bisector_count(F5, pt({0, 0}), pt({1, 3}), /*cap=*/10), 5u);
}

TEST(CharacterSum, MatchesEnumeration) {
  FieldSpec F3 = make_field(3, 1);
  EXPECT_NEAR(bisector_count_charsum(F3, pt({0, 0}), pt({1, 0})), 3.0, 1e-9);
  EXPECT_NEAR(bisector_count_charsum(F3, pt({1, 2}), pt({1, 2})), 9.0, 1e-9);

  // extension field: exercises the trace-based character
  FieldSpec F9 = make_field(3, 2);
  CharacterTable chi(F9);
  for (std::uint64_t xi = 0; xi < 81; ++xi) {
    Point x = point_at(F9, 2, xi);
    Point z = point_at(F9, 2, (xi + 1) % 81);
    double cs = bisector_count_charsum(F9, x, z, chi);
    ASSERT_NEAR(cs, static_cast<double>(bisector_count_enum(F9, x, z)), 1e-9);
  }
}

TEST(CharacterTable, UnitModulusAndOrthogonality) {
  for (auto [p, k] : {std::pair<int, int>{3, 1}, {3, 2}, {5, 2}, {7, 1}}) {
    FieldSpec F = make_field(p, k);
    CharacterTable chi(F);
    std::complex<double> total{0.0, 0.0};
    for (std::uint32_t u = 0; u < F.q(); ++u) {
      ASSERT_NEAR(std::abs(chi.value({u})), 1.0, 1e-12);
      total += chi.value({u});
    }
    // sum over the whole group of a nontrivial character vanishes
    EXPECT_NEAR(std::abs(total), 0.0, 1e-9);
  }
}

TEST(CharacterSum, ResidualGuardTrips) {
  try {
    pindist::detail::round_correlation(1.4, 0.0);
    FAIL() << "expected ResidualTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::residual_too_large);
  }
  try {
    pindist::detail::round_correlation(2.0, 0.3);
    FAIL() << "expected ResidualTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::residual_too_large);
  }
  EXPECT_EQ(pindist::detail::round_correlation(2.1, -0.05), 2);
}

TEST(PointIndex, RoundTrip) {
  FieldSpec F5 = make_field(5, 1);
  for (std::uint64_t i = 0; i < space_size(F5, 3); ++i)
    EXPECT_EQ(index_of(F5, point_at(F5, 3, i)), i);
}

}  // namespace
