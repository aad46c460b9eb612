#pragma once

#include <complex>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pindist/geometry.hpp"
#include "pindist/parallel.hpp"

namespace pindist {

using Uint128 = unsigned __int128;

inline std::string u128_to_string(Uint128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.insert(out.begin(), static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  return out;
}

/// The counting profile of one pin y: counts[t] = #{x in E : ||x-y|| = t},
/// its support size |Delta_y(E)| and second moment sum_t counts[t]^2.
struct PinProfile {
  Point pin;
  std::vector<std::uint32_t> counts;
  std::uint64_t support_size = 0;
  std::uint64_t second_moment = 0;
};

inline PinProfile pin_profile(const PointSet& E, const Point& y) {
  const FieldSpec& F = E.field();
  if (y.size() != E.dim()) fail(errc::dimension_mismatch, "pin arity differs from d");
  PinProfile prof;
  prof.pin = y;
  prof.counts.assign(F.q(), 0);
  for (std::size_t i = 0; i < E.size(); ++i) {
    FieldElement t = distance(F, E.member_point(i), y);
    ++prof.counts[t.code];
  }
  std::uint64_t mass = 0;
  for (std::uint32_t c : prof.counts) {
    mass += c;
    if (c > 0) ++prof.support_size;
    prof.second_moment += static_cast<std::uint64_t>(c) * c;
  }
  if (mass != E.size()) throw std::logic_error("pin profile lost mass");
  return prof;
}

/// Delta_y(E) = {||x-y|| : x in E}, ascending by code.
inline std::vector<FieldElement> pinned_distance_set(const PointSet& E, const Point& y) {
  PinProfile prof = pin_profile(E, y);
  std::vector<FieldElement> out;
  for (std::uint32_t t = 0; t < prof.counts.size(); ++t)
    if (prof.counts[t] > 0) out.push_back({t});
  return out;
}

/// Presence mask of Delta(E) over t-codes; contains 0 whenever E is nonempty.
inline std::vector<bool> distance_set_mask(const PointSet& E) {
  const FieldSpec& F = E.field();
  std::vector<bool> seen(F.q(), false);
  std::uint64_t found = 0;
  const auto& members = E.members();
  std::vector<Point> pts;
  pts.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) pts.push_back(E.member_point(i));
  for (std::size_t i = 0; i < pts.size() && found < F.q(); ++i) {
    for (std::size_t j = i; j < pts.size(); ++j) {
      std::uint32_t t = distance(F, pts[i], pts[j]).code;
      if (!seen[t]) {
        seen[t] = true;
        if (++found == F.q()) break;
      }
    }
  }
  return seen;
}

inline std::vector<FieldElement> distance_set(const PointSet& E) {
  std::vector<bool> seen = distance_set_mask(E);
  std::vector<FieldElement> out;
  for (std::uint32_t t = 0; t < seen.size(); ++t)
    if (seen[t]) out.push_back({t});
  return out;
}

enum class SweepBackend { naive, dft };

inline const char* backend_name(SweepBackend b) {
  return b == SweepBackend::naive ? "naive" : "dft";
}

/// Per-pin sweep result: second moment and |Delta_y(E)|.
struct PinStats {
  std::uint64_t second_moment = 0;
  std::uint32_t pinned_count = 0;
};

namespace detail {

inline std::vector<std::uint32_t> flatten_member_coords(const PointSet& E) {
  const FieldSpec& F = E.field();
  std::uint32_t d = E.dim();
  std::vector<std::uint32_t> mc(E.size() * d);
  for (std::size_t i = 0; i < E.size(); ++i) {
    std::uint64_t idx = E.members()[i];
    for (std::uint32_t j = 0; j < d; ++j) {
      mc[i * d + j] = static_cast<std::uint32_t>(idx % F.q());
      idx /= F.q();
    }
  }
  return mc;
}

/// Visits pins [lo, hi) in flat-index order and calls fn(pin_index,
/// second_moment, support). `counts` is caller-owned scratch of q zeros and
/// is returned zeroed.
template <typename Fn>
void pin_stats_range(const PointSet& E, const std::vector<std::uint32_t>& member_coords,
                     std::uint64_t lo, std::uint64_t hi, std::vector<std::uint32_t>& counts,
                     Fn&& fn) {
  const FieldSpec& F = E.field();
  const std::uint32_t d = E.dim();
  const std::uint32_t q32 = static_cast<std::uint32_t>(F.q());
  const std::size_t count = E.size();
  std::vector<std::uint32_t> pin(d);
  {
    std::uint64_t idx = lo;
    for (std::uint32_t j = 0; j < d; ++j) {
      pin[j] = static_cast<std::uint32_t>(idx % q32);
      idx /= q32;
    }
  }
  std::vector<std::uint32_t> touched;
  touched.reserve(F.q());
  const std::uint32_t* mc = member_coords.data();
  const bool prime = F.k() == 1;
  for (std::uint64_t y = lo; y < hi; ++y) {
    std::uint64_t sm = 0;
    std::uint32_t support = 0;
    const std::uint32_t* m = mc;
    for (std::size_t i = 0; i < count; ++i, m += d) {
      std::uint32_t acc = 0;
      if (prime) {
        for (std::uint32_t j = 0; j < d; ++j) {
          std::uint32_t diff = m[j] >= pin[j] ? m[j] - pin[j] : m[j] + q32 - pin[j];
          acc += static_cast<std::uint32_t>((std::uint64_t)diff * diff % q32);
          if (acc >= q32) acc -= q32;
        }
      } else {
        for (std::uint32_t j = 0; j < d; ++j) {
          std::uint32_t diff = F.sub_raw(m[j], pin[j]);
          acc = F.add_raw(acc, F.mul_raw(diff, diff));
        }
      }
      std::uint32_t c = counts[acc]++;
      sm += 2ull * c + 1;  // (c+1)^2 - c^2
      if (c == 0) {
        ++support;
        touched.push_back(acc);
      }
    }
    fn(y, sm, support);
    for (std::uint32_t t : touched) counts[t] = 0;
    touched.clear();
    for (std::uint32_t j = 0; j < d; ++j) {
      if (++pin[j] < q32) break;
      pin[j] = 0;
    }
  }
}

/// Dense length-q Fourier transform over (Z/q)^d, one axis at a time.
/// Twiddles are tabulated from the exact residue j*m mod q.
class Dft {
 public:
  explicit Dft(std::uint32_t q) : q_(q), fwd_(std::size_t(q) * q), inv_(std::size_t(q) * q) {
    std::vector<std::complex<double>> root(q);
    for (std::uint32_t r = 0; r < q; ++r) {
      double angle = -2.0 * std::numbers::pi * r / q;
      root[r] = {std::cos(angle), std::sin(angle)};
    }
    for (std::uint32_t j = 0; j < q; ++j)
      for (std::uint32_t m = 0; m < q; ++m) {
        fwd_[std::size_t(j) * q + m] = root[std::uint64_t(j) * m % q];
        inv_[std::size_t(j) * q + m] = std::conj(root[std::uint64_t(j) * m % q]);
      }
  }

  void forward(std::complex<double>* a, std::uint64_t n, std::uint32_t d) const {
    std::uint64_t stride = 1;
    for (std::uint32_t ax = 0; ax < d; ++ax, stride *= q_) axis(a, n, stride, fwd_.data());
  }

  /// Inverse transform including the 1/n normalization.
  void inverse(std::complex<double>* a, std::uint64_t n, std::uint32_t d) const {
    std::uint64_t stride = 1;
    for (std::uint32_t ax = 0; ax < d; ++ax, stride *= q_) axis(a, n, stride, inv_.data());
    double scale = 1.0 / static_cast<double>(n);
    for (std::uint64_t i = 0; i < n; ++i) a[i] *= scale;
  }

 private:
  void axis(std::complex<double>* a, std::uint64_t n, std::uint64_t stride,
            const std::complex<double>* W) const {
    std::vector<std::complex<double>> line(q_), out(q_);
    for (std::uint64_t base = 0; base < n; base += stride * q_) {
      for (std::uint64_t off = 0; off < stride; ++off) {
        std::complex<double>* cell = a + base + off;
        for (std::uint32_t m = 0; m < q_; ++m) line[m] = cell[m * stride];
        for (std::uint32_t j = 0; j < q_; ++j) {
          std::complex<double> s{0.0, 0.0};
          const std::complex<double>* row = W + std::size_t(j) * q_;
          for (std::uint32_t m = 0; m < q_; ++m) s += row[m] * line[m];
          out[j] = s;
        }
        for (std::uint32_t j = 0; j < q_; ++j) cell[j * stride] = out[j];
      }
    }
  }

  std::uint32_t q_;
  std::vector<std::complex<double>> fwd_;
  std::vector<std::complex<double>> inv_;
};

}  // namespace detail

/// Per-pin second moments and pinned counts over every pin of F_q^d, by
/// direct counting. O(q^d * |E| * d).
inline std::vector<PinStats> sweep_pin_stats_naive(const PointSet& E, unsigned threads = 0,
                                                   std::uint64_t cap = kDefaultSizeCap) {
  std::uint64_t n = E.space();
  if (n > cap) fail(errc::size_cap_exceeded, "sweep needs q^d <= cap");
  std::vector<std::uint32_t> mc = detail::flatten_member_coords(E);
  std::vector<PinStats> stats(n);
  parallel_chunks(0, n, threads, [&](std::uint64_t lo, std::uint64_t hi, unsigned) {
    std::vector<std::uint32_t> counts(E.field().q(), 0);
    detail::pin_stats_range(E, mc, lo, hi, counts,
                            [&](std::uint64_t y, std::uint64_t sm, std::uint32_t sup) {
                              stats[y] = {sm, sup};
                            });
  });
  return stats;
}

/// Same sweep through cross-correlations over (Z/q)^d: for each t, the t-count
/// of every pin is the correlation of the E indicator with the sphere S_t
/// indicator, computed with d length-q transforms, rounded to exact integers
/// (residual < 0.25 required), then squared and accumulated. Prime q only.
inline std::vector<PinStats> sweep_pin_stats_dft(const PointSet& E, unsigned threads = 0,
                                                 std::uint64_t cap = kDefaultSizeCap) {
  const FieldSpec& F = E.field();
  if (F.k() != 1)
    fail(errc::backend_unsupported, "dft backend requires a prime field (k = 1)");
  std::uint64_t n = E.space();
  if (n > cap) fail(errc::size_cap_exceeded, "sweep needs q^d <= cap");
  const std::uint32_t q = static_cast<std::uint32_t>(F.q());
  const std::uint32_t d = E.dim();

  detail::Dft plan(q);

  std::vector<std::uint32_t> norm_code(n);
  {
    std::vector<std::uint32_t> coords(d, 0);
    std::uint64_t idx = 0;
    do {
      std::uint64_t acc = 0;
      for (std::uint32_t c : coords) acc += (std::uint64_t)c * c % q;
      norm_code[idx++] = static_cast<std::uint32_t>(acc % q);
    } while (next_point(F, coords));
  }

  std::vector<std::complex<double>> ehat(n, {0.0, 0.0});
  for (std::uint64_t idx : E.members()) ehat[idx] = {1.0, 0.0};
  plan.forward(ehat.data(), n, d);

  unsigned workers = resolve_threads(threads);
  std::vector<std::vector<std::uint64_t>> part_sm(workers);
  std::vector<std::vector<std::uint32_t>> part_sup(workers);

  parallel_chunks(0, q, threads, [&](std::uint64_t t_lo, std::uint64_t t_hi, unsigned w) {
    auto& sm = part_sm[w];
    auto& sup = part_sup[w];
    sm.assign(n, 0);
    sup.assign(n, 0);
    std::vector<std::complex<double>> work(n);
    for (std::uint64_t t = t_lo; t < t_hi; ++t) {
      for (std::uint64_t i = 0; i < n; ++i)
        work[i] = norm_code[i] == t ? std::complex<double>{1.0, 0.0}
                                    : std::complex<double>{0.0, 0.0};
      plan.forward(work.data(), n, d);
      for (std::uint64_t i = 0; i < n; ++i) work[i] = ehat[i] * std::conj(work[i]);
      plan.inverse(work.data(), n, d);
      for (std::uint64_t y = 0; y < n; ++y) {
        std::int64_t r = detail::round_correlation(work[y].real(), work[y].imag());
        sm[y] += static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(r);
        if (r > 0) ++sup[y];
      }
    }
  });

  std::vector<PinStats> stats(n);
  for (unsigned w = 0; w < workers; ++w) {
    if (part_sm[w].empty()) continue;
    for (std::uint64_t y = 0; y < n; ++y) {
      stats[y].second_moment += part_sm[w][y];
      stats[y].pinned_count += part_sup[w][y];
    }
  }
  return stats;
}

inline std::vector<PinStats> sweep_pin_stats(const PointSet& E, SweepBackend backend,
                                             unsigned threads = 0,
                                             std::uint64_t cap = kDefaultSizeCap) {
  return backend == SweepBackend::dft ? sweep_pin_stats_dft(E, threads, cap)
                                      : sweep_pin_stats_naive(E, threads, cap);
}

/// Entry y is sum_t nu_y(t)^2, indexed by pin flat index.
inline std::vector<std::uint64_t> sweep_second_moments(const PointSet& E, SweepBackend backend,
                                                       unsigned threads = 0,
                                                       std::uint64_t cap = kDefaultSizeCap) {
  std::vector<PinStats> stats = sweep_pin_stats(E, backend, threads, cap);
  std::vector<std::uint64_t> out(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i) out[i] = stats[i].second_moment;
  return out;
}

namespace detail {

inline void guard_total_width(std::uint64_t n, std::uint64_t set_size) {
  auto bits = [](std::uint64_t v) {
    unsigned b = 0;
    while (v > 0) {
      ++b;
      v >>= 1;
    }
    return b;
  };
  if (bits(n) + 2 * bits(set_size) > 126)
    fail(errc::integer_overflow, "q^d * |E|^2 exceeds the 128-bit accumulator");
}

}  // namespace detail

/// Sum over all pins of the per-pin second moment, exactly. This is the
/// space-average scaled by q^d, kept integral on purpose.
inline Uint128 total_second_moment(const PointSet& E, unsigned threads = 0,
                                   std::uint64_t cap = kDefaultSizeCap) {
  std::uint64_t n = E.space();
  if (n > cap) fail(errc::size_cap_exceeded, "sweep needs q^d <= cap");
  detail::guard_total_width(n, E.size());
  std::vector<std::uint32_t> mc = detail::flatten_member_coords(E);
  unsigned workers = resolve_threads(threads);
  std::vector<Uint128> partial(workers, 0);
  parallel_chunks(0, n, threads, [&](std::uint64_t lo, std::uint64_t hi, unsigned w) {
    std::vector<std::uint32_t> counts(E.field().q(), 0);
    Uint128 acc = 0;
    detail::pin_stats_range(E, mc, lo, hi, counts,
                            [&](std::uint64_t, std::uint64_t sm, std::uint32_t) { acc += sm; });
    partial[w] = acc;
  });
  Uint128 total = 0;
  for (Uint128 part : partial) total += part;
  return total;
}

/// q^{d-1} * (|E|^2 + (q-1)|E|): the exact value the total must equal for
/// every set E, structured or random.
inline Uint128 expected_total_second_moment(std::uint64_t q, std::uint64_t n,
                                            std::uint64_t set_size) {
  Uint128 per_space = Uint128(set_size) * set_size + Uint128(q - 1) * set_size;
  return Uint128(n / q) * per_space;
}

// --- Point-set file format -------------------------------------------------
//
// Plain text. First non-comment line: `p k d`. Then one point per line as d
// whitespace-separated element codes. Lines starting with `#` are ignored.

inline PointSet load_point_set(std::istream& in, const FieldOptions& opt = FieldOptions{}) {
  std::string line;
  std::uint64_t lineno = 0;
  auto next_data_line = [&](std::string& out) {
    while (std::getline(in, line)) {
      ++lineno;
      std::size_t start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos || line[start] == '#') continue;
      out = line;
      return true;
    }
    return false;
  };

  std::string header;
  if (!next_data_line(header)) fail(errc::file_format, "missing `p k d` header");
  std::uint64_t p = 0, k = 0, d = 0;
  {
    std::istringstream hs(header);
    std::string extra;
    if (!(hs >> p >> k >> d) || (hs >> extra))
      fail(errc::file_format, "header must be exactly `p k d` (line " + std::to_string(lineno) + ")");
  }
  if (p == 0 || k == 0 || d == 0) fail(errc::file_format, "header values must be positive");
  FieldSpec F = make_field(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(k), opt);

  std::vector<std::uint64_t> indices;
  std::string data;
  while (next_data_line(data)) {
    std::istringstream ls(data);
    Point x;
    std::uint64_t code;
    while (ls >> code) {
      if (code >= F.q())
        fail(errc::file_format, "element code out of range (line " + std::to_string(lineno) + ")");
      x.push_back({static_cast<std::uint32_t>(code)});
    }
    if (!ls.eof())
      fail(errc::file_format, "malformed coordinate (line " + std::to_string(lineno) + ")");
    if (x.size() != d)
      fail(errc::file_format, "expected " + std::to_string(d) + " coordinates (line " +
                                  std::to_string(lineno) + ")");
    indices.push_back(index_of(F, x));
  }
  return PointSet::from_indices(std::move(F), static_cast<std::uint32_t>(d), std::move(indices));
}

inline PointSet load_point_set_file(const std::string& path,
                                    const FieldOptions& opt = FieldOptions{}) {
  std::ifstream in(path);
  if (!in) fail(errc::file_format, "cannot open " + path);
  return load_point_set(in, opt);
}

inline void save_point_set(std::ostream& out, const PointSet& E) {
  out << E.field().p() << ' ' << E.field().k() << ' ' << E.dim() << '\n';
  for (std::size_t i = 0; i < E.size(); ++i) {
    Point x = E.member_point(i);
    for (std::size_t j = 0; j < x.size(); ++j) out << (j ? " " : "") << x[j].code;
    out << '\n';
  }
}

}  // namespace pindist
