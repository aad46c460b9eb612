#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pindist/pinned.hpp"

namespace pindist {

/// Identity of the pseudorandom index generator, embedded in report metadata
/// so runs can be replayed across implementations.
inline constexpr const char* kGeneratorId = "prp-feistel4-splitmix64/1";

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Counter-based pseudorandom permutation of [0, n): a 4-round balanced
/// Feistel network over the smallest power-of-4 domain covering n, restricted
/// to [0, n) by cycle walking. Bijective by construction, so the images of
/// 0..size-1 are `size` distinct indices.
class FeistelPermutation {
 public:
  FeistelPermutation(std::uint64_t n, std::uint64_t seed) : n_(n) {
    std::uint32_t bits = 0;
    while ((1ull << (2 * bits)) < n_) ++bits;
    if (bits == 0) bits = 1;
    half_bits_ = bits;
    mask_ = (1ull << half_bits_) - 1;
    for (std::uint32_t r = 0; r < kRounds; ++r)
      keys_[r] = splitmix64(seed ^ (0xa5a5a5a5a5a5a5a5ull + r));
  }

  std::uint64_t operator()(std::uint64_t counter) const {
    std::uint64_t x = counter;
    do {
      x = round_trip(x);
    } while (x >= n_);
    return x;
  }

 private:
  static constexpr std::uint32_t kRounds = 4;

  std::uint64_t round_trip(std::uint64_t x) const {
    std::uint64_t left = x >> half_bits_;
    std::uint64_t right = x & mask_;
    for (std::uint32_t r = 0; r < kRounds; ++r) {
      std::uint64_t f = splitmix64(right ^ keys_[r]) & mask_;
      std::uint64_t next_right = left ^ f;
      left = right;
      right = next_right;
    }
    return (left << half_bits_) | right;
  }

  std::uint64_t n_;
  std::uint32_t half_bits_ = 1;
  std::uint64_t mask_ = 0;
  std::uint64_t keys_[kRounds] = {};
};

}  // namespace detail

/// Textual description of a test point set. Grammar (canonical forms):
///
///   full
///   sphere:<t>
///   line:<c,...,c>:<c,...,c>          base point, then direction
///   subspace:<c,..>;<c,..>;...        basis vectors
///   random:<n>:seed=<s>               seed is mandatory
///   file:<path>
///   union:(<spec>),(<spec>),...
///   product:(<d>:<spec>),(<d>:<spec>),...
///
/// Coordinates are element codes. parse(render(spec)) == spec.
struct SetSpec {
  enum class Kind { full, sphere, line, subspace, random, file, union_, product };

  Kind kind = Kind::full;
  std::uint64_t size = 0;                            // random
  std::uint64_t seed = 0;                            // random
  std::uint32_t t_code = 0;                          // sphere
  std::vector<std::uint32_t> base;                   // line
  std::vector<std::uint32_t> dir;                    // line
  std::vector<std::vector<std::uint32_t>> basis;     // subspace
  std::string path;                                  // file
  std::vector<SetSpec> children;                     // union
  std::vector<std::pair<std::uint32_t, SetSpec>> factors;  // product (dim, child)

  friend bool operator==(const SetSpec&, const SetSpec&) = default;
};

namespace detail {

struct SpecParser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void error(const std::string& what) const {
    fail(errc::spec_parse, what + " at position " + std::to_string(pos));
  }

  bool eof() const { return pos >= text.size(); }
  char peek() const { return eof() ? '\0' : text[pos]; }

  bool consume(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }

  void expect(char c) {
    if (!consume(c)) error(std::string("expected '") + c + "'");
  }

  bool consume_word(std::string_view w) {
    if (text.substr(pos, w.size()) != w) return false;
    pos += w.size();
    return true;
  }

  std::uint64_t number() {
    if (eof() || peek() < '0' || peek() > '9') error("expected a number");
    std::uint64_t v = 0;
    while (!eof() && peek() >= '0' && peek() <= '9') {
      v = v * 10 + static_cast<std::uint64_t>(text[pos] - '0');
      if (v > (1ull << 62)) error("number too large");
      ++pos;
    }
    return v;
  }

  std::vector<std::uint32_t> vector_codes() {
    std::vector<std::uint32_t> v;
    v.push_back(static_cast<std::uint32_t>(number()));
    while (consume(',')) v.push_back(static_cast<std::uint32_t>(number()));
    return v;
  }

  SetSpec spec() {
    SetSpec s;
    if (consume_word("full")) {
      s.kind = SetSpec::Kind::full;
    } else if (consume_word("sphere")) {
      expect(':');
      s.kind = SetSpec::Kind::sphere;
      s.t_code = static_cast<std::uint32_t>(number());
    } else if (consume_word("line")) {
      expect(':');
      s.kind = SetSpec::Kind::line;
      s.base = vector_codes();
      expect(':');
      s.dir = vector_codes();
    } else if (consume_word("subspace")) {
      expect(':');
      s.kind = SetSpec::Kind::subspace;
      s.basis.push_back(vector_codes());
      while (consume(';')) s.basis.push_back(vector_codes());
    } else if (consume_word("random")) {
      expect(':');
      s.kind = SetSpec::Kind::random;
      s.size = number();
      if (!consume(':')) error("random spec requires a seed (`random:<n>:seed=<s>`)");
      if (!consume_word("seed=")) error("random spec requires `seed=`");
      s.seed = number();
    } else if (consume_word("file")) {
      expect(':');
      s.kind = SetSpec::Kind::file;
      std::size_t start = pos;
      while (!eof() && peek() != ')' && peek() != ',') ++pos;
      s.path = std::string(text.substr(start, pos - start));
      if (s.path.empty()) error("file spec requires a path");
    } else if (consume_word("union")) {
      expect(':');
      s.kind = SetSpec::Kind::union_;
      do {
        expect('(');
        s.children.push_back(spec());
        expect(')');
      } while (consume(','));
      if (s.children.size() < 2) error("union requires at least two children");
    } else if (consume_word("product")) {
      expect(':');
      s.kind = SetSpec::Kind::product;
      do {
        expect('(');
        std::uint32_t dim = static_cast<std::uint32_t>(number());
        expect(':');
        SetSpec child = spec();
        expect(')');
        s.factors.emplace_back(dim, std::move(child));
      } while (consume(','));
      if (s.factors.size() < 2) error("product requires at least two factors");
    } else {
      error("unknown set kind");
    }
    return s;
  }
};

inline void render_codes(std::string& out, const std::vector<std::uint32_t>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
}

}  // namespace detail

inline std::string render_set_spec(const SetSpec& s) {
  std::string out;
  switch (s.kind) {
    case SetSpec::Kind::full:
      out = "full";
      break;
    case SetSpec::Kind::sphere:
      out = "sphere:" + std::to_string(s.t_code);
      break;
    case SetSpec::Kind::line:
      out = "line:";
      detail::render_codes(out, s.base);
      out += ':';
      detail::render_codes(out, s.dir);
      break;
    case SetSpec::Kind::subspace:
      out = "subspace:";
      for (std::size_t i = 0; i < s.basis.size(); ++i) {
        if (i) out += ';';
        detail::render_codes(out, s.basis[i]);
      }
      break;
    case SetSpec::Kind::random:
      out = "random:" + std::to_string(s.size) + ":seed=" + std::to_string(s.seed);
      break;
    case SetSpec::Kind::file:
      out = "file:" + s.path;
      break;
    case SetSpec::Kind::union_:
      out = "union:";
      for (std::size_t i = 0; i < s.children.size(); ++i) {
        if (i) out += ',';
        out += '(' + render_set_spec(s.children[i]) + ')';
      }
      break;
    case SetSpec::Kind::product:
      out = "product:";
      for (std::size_t i = 0; i < s.factors.size(); ++i) {
        if (i) out += ',';
        out += '(' + std::to_string(s.factors[i].first) + ':' +
               render_set_spec(s.factors[i].second) + ')';
      }
      break;
  }
  return out;
}

inline SetSpec parse_set_spec(std::string_view text) {
  detail::SpecParser p{text};
  SetSpec s = p.spec();
  if (!p.eof()) p.error("trailing characters");
  return s;
}

/// Deterministic construction of the point set a spec describes, in F_q^d.
/// Identical (p, k, d, spec) always yields an identical member list.
inline PointSet generate(const FieldSpec& F, std::uint32_t d, const SetSpec& spec,
                         std::uint64_t cap = kDefaultSizeCap) {
  std::uint64_t n = space_size(F, d);
  if (n > cap) fail(errc::size_cap_exceeded, "generation needs q^d <= cap");
  std::uint64_t q = F.q();

  auto check_vector = [&](const std::vector<std::uint32_t>& v, const char* what) {
    if (v.size() != d) fail(errc::dimension_mismatch, std::string(what) + " arity differs from d");
    for (std::uint32_t c : v)
      if (c >= q) fail(errc::invalid_param, std::string(what) + " coordinate out of range");
  };

  switch (spec.kind) {
    case SetSpec::Kind::full:
      return PointSet::full_space(F, d);

    case SetSpec::Kind::sphere: {
      if (spec.t_code >= q) fail(errc::invalid_param, "sphere level out of range");
      return sphere(F, d, {spec.t_code}, cap);
    }

    case SetSpec::Kind::line: {
      check_vector(spec.base, "line base");
      check_vector(spec.dir, "line direction");
      bool nonzero = false;
      for (std::uint32_t c : spec.dir) nonzero = nonzero || c != 0;
      if (!nonzero) fail(errc::invalid_param, "line direction must be nonzero");
      std::vector<std::uint64_t> idx;
      idx.reserve(q);
      for (std::uint64_t t = 0; t < q; ++t) {
        std::uint64_t flat = 0;
        for (std::uint32_t j = d; j-- > 0;) {
          std::uint32_t c = F.add_raw(spec.base[j],
                                      F.mul_raw(static_cast<std::uint32_t>(t), spec.dir[j]));
          flat = flat * q + c;
        }
        idx.push_back(flat);
      }
      return PointSet::from_indices(F, d, std::move(idx));
    }

    case SetSpec::Kind::subspace: {
      // Incremental span: each new basis vector multiplies the span by its
      // q cosets; dependent vectors change nothing.
      std::vector<std::vector<std::uint32_t>> span_coords{std::vector<std::uint32_t>(d, 0)};
      std::vector<bool> seen(n, false);
      seen[0] = true;
      for (const auto& v : spec.basis) {
        check_vector(v, "basis vector");
        std::vector<std::vector<std::uint32_t>> grown = span_coords;
        for (std::uint64_t c = 1; c < q; ++c) {
          std::vector<std::uint32_t> scaled(d);
          for (std::uint32_t j = 0; j < d; ++j)
            scaled[j] = F.mul_raw(static_cast<std::uint32_t>(c), v[j]);
          for (const auto& u : span_coords) {
            std::vector<std::uint32_t> w(d);
            std::uint64_t flat = 0;
            for (std::uint32_t j = d; j-- > 0;) {
              w[j] = F.add_raw(u[j], scaled[j]);
              flat = flat * q + w[j];
            }
            if (!seen[flat]) {
              seen[flat] = true;
              grown.push_back(std::move(w));
            }
          }
        }
        span_coords = std::move(grown);
      }
      std::vector<std::uint64_t> idx;
      idx.reserve(span_coords.size());
      for (const auto& u : span_coords) {
        std::uint64_t flat = 0;
        for (std::uint32_t j = d; j-- > 0;) flat = flat * q + u[j];
        idx.push_back(flat);
      }
      return PointSet::from_indices(F, d, std::move(idx));
    }

    case SetSpec::Kind::random: {
      if (spec.size > n) fail(errc::size_exceeds_space, "requested size exceeds q^d");
      detail::FeistelPermutation prp(n, spec.seed);
      std::vector<std::uint64_t> idx;
      idx.reserve(spec.size);
      for (std::uint64_t i = 0; i < spec.size; ++i) idx.push_back(prp(i));
      return PointSet::from_indices(F, d, std::move(idx));
    }

    case SetSpec::Kind::file: {
      PointSet loaded = load_point_set_file(spec.path);
      if (loaded.field().p() != F.p() || loaded.field().k() != F.k() || loaded.dim() != d)
        fail(errc::file_format, "file field/dimension differ from the requested space");
      return loaded;
    }

    case SetSpec::Kind::union_: {
      std::vector<std::uint64_t> idx;
      for (const SetSpec& child : spec.children) {
        PointSet part = generate(F, d, child, cap);
        idx.insert(idx.end(), part.members().begin(), part.members().end());
      }
      return PointSet::from_indices(F, d, std::move(idx));
    }

    case SetSpec::Kind::product: {
      std::uint32_t dims = 0;
      for (const auto& [dim, _] : spec.factors) dims += dim;
      if (dims != d) fail(errc::dimension_mismatch, "product factor dimensions must sum to d");
      std::vector<std::uint64_t> idx{0};
      std::uint64_t stride = 1;
      for (const auto& [dim, child] : spec.factors) {
        PointSet part = generate(F, dim, child, cap);
        if (part.empty()) return PointSet(F, d);
        std::vector<std::uint64_t> grown;
        grown.reserve(idx.size() * part.size());
        for (std::uint64_t member : part.members())
          for (std::uint64_t prefix : idx) grown.push_back(prefix + member * stride);
        idx = std::move(grown);
        for (std::uint32_t j = 0; j < dim; ++j) stride *= q;
      }
      return PointSet::from_indices(F, d, std::move(idx));
    }
  }
  fail(errc::spec_parse, "unhandled set kind");
}

}  // namespace pindist
