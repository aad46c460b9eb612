#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pindist/pinned.hpp"
#include "pindist/rational.hpp"
#include "pindist/report.hpp"

namespace pindist {

/// |E|^2 / sum_t nu_y(t)^2 as an exact rational. By Cauchy-Schwarz this never
/// exceeds |Delta_y(E)|, and that is asserted before returning.
inline Rational cs_lower_bound(const PointSet& E, const Point& y) {
  if (E.empty()) fail(errc::empty_set, "lower bound needs a nonempty set");
  PinProfile prof = pin_profile(E, y);
  std::uint64_t sq = E.size() * E.size();
  Rational bound = Rational::of(sq, prof.second_moment);
  if (Uint128(sq) > Uint128(prof.support_size) * prof.second_moment)
    throw std::logic_error("Cauchy-Schwarz bound exceeded the pinned count");
  return bound;
}

namespace detail {

/// num * (|E|^2 + (q-1)|E|): the right side of the good-pin comparison.
inline Uint128 good_pin_rhs(const PointSet& E, const RationalParam& a) {
  std::uint64_t s = E.size();
  std::uint64_t q = E.field().q();
  return Uint128(a.num) * (Uint128(s) * s + Uint128(q - 1) * s);
}

inline bool is_good_pin(std::uint64_t q, const RationalParam& a, std::uint64_t second_moment,
                        Uint128 rhs) {
  return Uint128(a.den) * q * second_moment <= rhs;
}

inline const std::vector<PinStats>& ensure_stats(const PointSet& E,
                                                 const std::vector<PinStats>* provided,
                                                 std::vector<PinStats>& storage,
                                                 SweepBackend backend, unsigned threads,
                                                 std::uint64_t cap) {
  if (provided) {
    if (provided->size() != E.space()) fail(errc::invalid_param, "stats size != q^d");
    return *provided;
  }
  storage = sweep_pin_stats(E, backend, threads, cap);
  return storage;
}

inline Rational rational_u128(Uint128 num, Uint128 den) {
  Uint128 x = num, y = den;
  while (y != 0) {
    Uint128 t = x % y;
    x = y;
    y = t;
  }
  if (x == 0) x = 1;
  num /= x;
  den /= x;
  if (num > std::numeric_limits<std::uint64_t>::max() ||
      den > std::numeric_limits<std::uint64_t>::max())
    fail(errc::integer_overflow, "rational does not fit 64 bits after reduction");
  return Rational{static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den)};
}

}  // namespace detail

/// The pins whose second moment stays within a times the space average,
/// selected by the exact comparison den*q*sm(y) <= num*(|E|^2 + (q-1)|E|).
/// The pigeonhole guarantee num*|Y| >= (num-den)*q^d is asserted.
inline PointSet good_pin_set(const PointSet& E, const RationalParam& a,
                             const std::vector<PinStats>* stats = nullptr,
                             SweepBackend backend = SweepBackend::naive, unsigned threads = 0,
                             std::uint64_t cap = kDefaultSizeCap) {
  std::uint64_t n = E.space();
  if (n > cap) fail(errc::size_cap_exceeded, "good-pin selection needs q^d <= cap");
  std::vector<PinStats> storage;
  const std::vector<PinStats>& st = detail::ensure_stats(E, stats, storage, backend, threads, cap);
  Uint128 rhs = detail::good_pin_rhs(E, a);
  std::vector<std::uint64_t> good;
  for (std::uint64_t y = 0; y < n; ++y)
    if (detail::is_good_pin(E.field().q(), a, st[y].second_moment, rhs)) good.push_back(y);
  if (Uint128(a.num) * good.size() < Uint128(a.num - a.den) * n)
    throw std::logic_error("good-pin set smaller than the pigeonhole guarantee");
  return PointSet::from_indices(E.field(), E.dim(), std::move(good));
}

/// Verifies, pin by pin in exact integers, that every good pin y satisfies
/// 2*num*|Delta_y(E)| >= den*min(q, |E|), and that the good-pin set itself
/// meets its size guarantee.
inline VerificationReport check_pinned_count_bound(const PointSet& E, const RationalParam& a,
                                                   const std::string& set_spec = "(unspecified)",
                                                   const std::vector<PinStats>* stats = nullptr,
                                                   SweepBackend backend = SweepBackend::naive,
                                                   unsigned threads = 0,
                                                   std::uint64_t cap = kDefaultSizeCap) {
  const FieldSpec& F = E.field();
  std::uint64_t q = F.q();
  std::uint64_t n = E.space();
  if (n > cap) fail(errc::size_cap_exceeded, "verification needs q^d <= cap");

  VerificationReport rep;
  rep.check = "pinned-count-bound";
  rep.set_field(F, E.dim());
  rep.set_spec = set_spec;
  rep.a = a;

  std::vector<PinStats> storage;
  const std::vector<PinStats>& st = detail::ensure_stats(E, stats, storage, backend, threads, cap);
  Uint128 rhs = detail::good_pin_rhs(E, a);

  std::uint64_t good_count = 0;
  std::uint64_t min_pinned = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t bound_rhs = a.den * std::min<std::uint64_t>(q, E.size());
  bool all_hold = true;
  for (std::uint64_t y = 0; y < n; ++y) {
    if (!detail::is_good_pin(q, a, st[y].second_moment, rhs)) continue;
    ++good_count;
    min_pinned = std::min<std::uint64_t>(min_pinned, st[y].pinned_count);
    if (Uint128(2) * a.num * st[y].pinned_count < Uint128(bound_rhs)) {
      all_hold = false;
      if (!rep.counterexample_pin) rep.counterexample_pin = y;
    }
  }
  bool size_ok = Uint128(a.num) * good_count >= Uint128(a.num - a.den) * n;

  rep.add_witness("set_size", E.size());
  rep.add_witness("space_size", n);
  rep.add_witness("good_pin_count", good_count);
  rep.add_witness("good_size_lhs", Uint128(a.num) * good_count);
  rep.add_witness("good_size_rhs", Uint128(a.num - a.den) * n);
  rep.add_witness("pinned_bound_rhs_scaled", bound_rhs);
  if (good_count > 0) rep.add_witness("min_pinned_count_over_good", min_pinned);
  // Informational: the sharper intermediate value min{q/2a, q|E|/(2a(q-1))}
  // before it is weakened to min{q, |E|}/2a.
  {
    Rational first = detail::rational_u128(Uint128(q) * a.den, Uint128(2) * a.num);
    Rational second = detail::rational_u128(Uint128(q) * E.size() * a.den,
                                            Uint128(2) * a.num * (q - 1));
    rep.add_witness("pinned_bound_intermediate", second < first ? second : first);
  }

  rep.passed = all_hold && size_ok;
  if (!size_ok) rep.add_witness("failure", std::string("good-pin size guarantee violated"));
  if (E.size() <= 1)
    rep.warning = E.empty() ? "empty set: bound is vacuous" : "singleton set: bound is trivial";
  return rep;
}

/// Verifies 2*num*|Delta(E u {y})| >= den*q for every good pin, together with
/// the containment |Delta(E u {y})| >= |Delta_y(E)|. Requires |E| >= q.
inline VerificationReport check_augmented_distance_bound(
    const PointSet& E, const RationalParam& a, const std::string& set_spec = "(unspecified)",
    const std::vector<PinStats>* stats = nullptr, SweepBackend backend = SweepBackend::naive,
    unsigned threads = 0, std::uint64_t cap = kDefaultSizeCap) {
  const FieldSpec& F = E.field();
  std::uint64_t q = F.q();
  if (E.size() < q) fail(errc::hypothesis_not_met, "corollary needs |E| >= q");
  std::uint64_t n = E.space();
  if (n > cap) fail(errc::size_cap_exceeded, "verification needs q^d <= cap");

  VerificationReport rep;
  rep.check = "augmented-distance-bound";
  rep.set_field(F, E.dim());
  rep.set_spec = set_spec;
  rep.a = a;

  std::vector<PinStats> storage;
  const std::vector<PinStats>& st = detail::ensure_stats(E, stats, storage, backend, threads, cap);
  Uint128 rhs = detail::good_pin_rhs(E, a);

  // Distances within E are shared by every augmented set; per pin only the
  // pin-to-member distances can add new values (plus 0, already present since
  // E is nonempty).
  std::vector<bool> base_mask = distance_set_mask(E);
  std::uint64_t base_count = 0;
  for (bool b : base_mask) base_count += b ? 1 : 0;

  std::vector<std::uint32_t> mc = detail::flatten_member_coords(E);
  const std::uint32_t d = E.dim();

  std::uint64_t good_count = 0;
  std::uint64_t min_augmented = std::numeric_limits<std::uint64_t>::max();
  bool all_hold = true;
  bool containment_ok = true;
  std::vector<bool> seen(q, false);
  std::vector<std::uint32_t> touched;
  Point y(d);
  for (std::uint64_t yidx = 0; yidx < n; ++yidx) {
    if (!detail::is_good_pin(q, a, st[yidx].second_moment, rhs)) continue;
    ++good_count;
    std::uint64_t rem = yidx;
    for (std::uint32_t j = 0; j < d; ++j) {
      y[j].code = static_cast<std::uint32_t>(rem % q);
      rem /= q;
    }
    std::uint64_t pinned = 0;
    std::uint64_t fresh = 0;
    const std::uint32_t* m = mc.data();
    for (std::size_t i = 0; i < E.size(); ++i, m += d) {
      std::uint32_t acc = 0;
      for (std::uint32_t j = 0; j < d; ++j) {
        std::uint32_t diff = F.sub_raw(m[j], y[j].code);
        acc = F.add_raw(acc, F.mul_raw(diff, diff));
      }
      if (!seen[acc]) {
        seen[acc] = true;
        touched.push_back(acc);
        ++pinned;
        if (!base_mask[acc]) ++fresh;
      }
    }
    std::uint64_t augmented = base_count + fresh;
    for (std::uint32_t t : touched) seen[t] = false;
    touched.clear();

    if (augmented < pinned) containment_ok = false;  // cannot happen; checked anyway
    min_augmented = std::min(min_augmented, augmented);
    if (Uint128(2) * a.num * augmented < Uint128(a.den) * q) {
      all_hold = false;
      if (!rep.counterexample_pin) rep.counterexample_pin = yidx;
    }
  }

  rep.add_witness("set_size", E.size());
  rep.add_witness("good_pin_count", good_count);
  rep.add_witness("base_distance_count", base_count);
  if (good_count > 0) rep.add_witness("min_augmented_distance_count", min_augmented);
  rep.add_witness("corollary_rhs_scaled", Uint128(a.den) * q);
  rep.passed = all_hold && containment_ok;
  if (!containment_ok) rep.add_witness("failure", std::string("containment check violated"));
  return rep;
}

/// Recomputes both sides of the averaged second-moment identity in
/// q^{d+1}-scaled integers, confirms the good/exceeder partition of the pin
/// space, and confirms the per-pin floor sm(y) >= |E|.
inline VerificationReport audit_second_moment_pigeonhole(
    const PointSet& E, const RationalParam& a, const std::string& set_spec = "(unspecified)",
    const std::vector<PinStats>* stats = nullptr, SweepBackend backend = SweepBackend::naive,
    unsigned threads = 0, std::uint64_t cap = kDefaultSizeCap) {
  const FieldSpec& F = E.field();
  std::uint64_t q = F.q();
  std::uint64_t n = E.space();
  if (n > cap) fail(errc::size_cap_exceeded, "audit needs q^d <= cap");
  detail::guard_total_width(n, E.size());

  VerificationReport rep;
  rep.check = "second-moment-pigeonhole";
  rep.set_field(F, E.dim());
  rep.set_spec = set_spec;
  rep.a = a;

  std::vector<PinStats> storage;
  const std::vector<PinStats>& st = detail::ensure_stats(E, stats, storage, backend, threads, cap);

  Uint128 total = 0;
  for (const PinStats& s : st) total += s.second_moment;
  Uint128 scaled_lhs = Uint128(q) * total;
  Uint128 scaled_rhs =
      Uint128(n) * (Uint128(E.size()) * E.size() + Uint128(q - 1) * E.size());
  bool identity_ok = scaled_lhs == scaled_rhs;

  Uint128 rhs = detail::good_pin_rhs(E, a);
  std::uint64_t good = 0;
  std::uint64_t exceeders = 0;
  bool partition_ok = true;
  bool floor_ok = true;
  std::uint64_t min_sm = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t y = 0; y < n; ++y) {
    Uint128 lhs = Uint128(a.den) * q * st[y].second_moment;
    bool in_good = lhs <= rhs;
    bool in_exceed = lhs > rhs;
    if (in_good == in_exceed) partition_ok = false;
    good += in_good ? 1 : 0;
    exceeders += in_exceed ? 1 : 0;
    min_sm = std::min(min_sm, st[y].second_moment);
    if (st[y].second_moment < E.size()) {
      floor_ok = false;
      if (!rep.counterexample_pin) rep.counterexample_pin = y;
    }
  }
  partition_ok = partition_ok && (good + exceeders == n);

  rep.add_witness("scaled_average_lhs", scaled_lhs);
  rep.add_witness("scaled_average_rhs", scaled_rhs);
  rep.add_witness("space_size", n);
  rep.add_witness("set_size", E.size());
  rep.add_witness("good_pin_count", good);
  rep.add_witness("exceeder_count", exceeders);
  rep.add_witness("min_second_moment", min_sm);
  rep.passed = identity_ok && partition_ok && floor_ok;
  if (!identity_ok) rep.add_witness("failure", std::string("scaled averages differ"));
  if (!partition_ok) rep.add_witness("failure", std::string("good/exceeder partition broken"));
  return rep;
}

/// Field sanity for the verify pipeline: commutativity, associativity,
/// distributivity, identities, inverses and the multiplicative group order.
/// Exhaustive through q <= exhaustive_limit, seeded sampling beyond.
inline VerificationReport check_field_axioms(const FieldSpec& F, std::uint64_t exhaustive_limit = 128,
                                             std::uint64_t samples = 20000,
                                             std::uint64_t seed = 1) {
  VerificationReport rep;
  rep.check = "field-axioms";
  rep.set_field(F, 1);
  rep.set_spec = "n/a";

  std::uint64_t q = F.q();
  bool ok = true;
  std::string first_failure;
  auto record = [&](const std::string& what) {
    if (ok) first_failure = what;
    ok = false;
  };

  auto check_triple = [&](std::uint32_t x, std::uint32_t y, std::uint32_t z) {
    if (F.add_raw(x, y) != F.add_raw(y, x)) record("add commutativity");
    if (F.mul_raw(x, y) != F.mul_raw(y, x)) record("mul commutativity");
    if (F.add_raw(F.add_raw(x, y), z) != F.add_raw(x, F.add_raw(y, z)))
      record("add associativity");
    if (F.mul_raw(F.mul_raw(x, y), z) != F.mul_raw(x, F.mul_raw(y, z)))
      record("mul associativity");
    if (F.mul_raw(x, F.add_raw(y, z)) != F.add_raw(F.mul_raw(x, y), F.mul_raw(x, z)))
      record("distributivity");
  };
  auto check_single = [&](std::uint32_t x) {
    if (F.add_raw(x, 0) != x) record("additive identity");
    if (F.mul_raw(x, 1) != x) record("multiplicative identity");
    if (F.add_raw(x, F.neg_raw(x)) != 0) record("additive inverse");
    if (x != 0) {
      if (F.mul_raw(x, F.inv_raw(x)) != 1) record("multiplicative inverse");
      if (F.pow_raw(x, q - 1) != 1) record("multiplicative group order");
    }
  };

  std::uint64_t triples_checked = 0;
  if (q <= exhaustive_limit) {
    for (std::uint32_t x = 0; x < q; ++x) {
      check_single(x);
      for (std::uint32_t y = 0; y < q; ++y)
        for (std::uint32_t z = 0; z < q; ++z) {
          check_triple(x, y, z);
          ++triples_checked;
        }
    }
  } else {
    std::uint64_t state = seed;
    auto next = [&state, q]() {
      state += 0x9e3779b97f4a7c15ull;
      std::uint64_t z = state;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      return static_cast<std::uint32_t>((z ^ (z >> 31)) % q);
    };
    for (std::uint64_t i = 0; i < samples; ++i) {
      std::uint32_t x = next(), y = next(), z = next();
      check_single(x);
      check_triple(x, y, z);
      ++triples_checked;
    }
  }

  rep.add_witness("q", q);
  rep.add_witness("triples_checked", triples_checked);
  rep.passed = ok;
  if (!ok) rep.add_witness("failure", first_failure);
  return rep;
}

/// Equidistant-pin counts: enumeration, the linear closed form, and the
/// character-sum evaluation must all land on q^{d-1} for x != z. Exhaustive
/// over pairs when that is affordable, otherwise seeded sampling.
inline VerificationReport check_bisector_hyperplane(const FieldSpec& F, std::uint32_t d,
                                                    std::uint64_t cap = kDefaultSizeCap,
                                                    std::uint64_t sample_pairs = 200,
                                                    std::uint64_t seed = 1) {
  VerificationReport rep;
  rep.check = "bisector-hyperplane";
  rep.set_field(F, d);
  rep.set_spec = "n/a";

  std::uint64_t n = space_size(F, d);
  if (n > cap) fail(errc::size_cap_exceeded, "bisector checks need q^d <= cap");
  std::uint64_t expected = n / F.q();
  CharacterTable chi(F);

  bool ok = true;
  std::uint64_t pairs_checked = 0;
  auto check_pair = [&](std::uint64_t xi, std::uint64_t zi) {
    Point x = point_at(F, d, xi);
    Point z = point_at(F, d, zi);
    std::uint64_t cnt = bisector_count_enum(F, x, z, cap);
    std::uint64_t want = xi == zi ? n : expected;
    if (cnt != want) ok = false;
    if (bisector_count_closed(F, x, z) != want) ok = false;
    double cs = bisector_count_charsum(F, x, z, chi, cap);
    if (std::abs(cs - static_cast<double>(want)) > 1e-6) ok = false;
    ++pairs_checked;
  };

  // Each pair costs one pin scan plus a q^2 character sum.
  bool exhaustive = n <= 1024 && n * n * (2 * n + F.q() * F.q()) <= 200'000'000ull;
  if (exhaustive) {
    for (std::uint64_t xi = 0; xi < n && ok; ++xi)
      for (std::uint64_t zi = 0; zi < n && ok; ++zi) check_pair(xi, zi);
  } else {
    std::uint64_t state = seed;
    auto next = [&state, n]() {
      state += 0x9e3779b97f4a7c15ull;
      std::uint64_t z = state;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      return (z ^ (z >> 31)) % n;
    };
    check_pair(0, 0);
    for (std::uint64_t i = 0; i < sample_pairs && ok; ++i) check_pair(next(), next());
  }

  rep.add_witness("pairs_checked", pairs_checked);
  rep.add_witness("expected_hyperplane_size", expected);
  rep.add_witness("mode", std::string(exhaustive ? "exhaustive" : "sampled"));
  rep.passed = ok;
  if (!ok) rep.add_witness("failure", std::string("a bisector count disagreed"));
  return rep;
}

}  // namespace pindist
