#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "pindist/errors.hpp"

namespace pindist {

/// Default cap on enumerated spaces (q, and q^d elsewhere). Keeps a
/// full-space membership bitmap at or below 8 MiB.
inline constexpr std::uint64_t kDefaultSizeCap = 1ull << 26;

/// An element of F_q, identified by its code in 0..q-1. Codes are the base-p
/// digit encoding of the polynomial coefficients, constant term first, so
/// code 0 is the additive identity and code 1 the multiplicative identity.
struct FieldElement {
  std::uint32_t code = 0;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;
  friend auto operator<=>(const FieldElement&, const FieldElement&) = default;
};

struct FieldOptions {
  std::uint64_t size_cap = kDefaultSizeCap;
  /// Multiplication/inverse tables are precomputed for q at or below this.
  std::uint32_t table_threshold = 1u << 12;
};

/// F_q = F_p[x]/(m(x)) for an odd prime p and q = p^k. The modulus m is the
/// lexicographically smallest monic irreducible polynomial of degree k over
/// F_p, coefficients compared from the constant term upward; for k = 1 the
/// modulus is x and arithmetic is plain mod p. Instances are immutable and
/// cheap to copy (tables are shared).
class FieldSpec {
 public:
  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t k() const noexcept { return k_; }
  std::uint64_t q() const noexcept { return q_; }

  /// Modulus coefficients, constant term first; size k+1, leading coeff 1.
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

  bool has_tables() const noexcept { return tables_ != nullptr; }

  FieldElement zero() const noexcept { return {0}; }
  FieldElement one() const noexcept { return {1}; }

  /// Bounds-checked element construction.
  FieldElement element(std::uint64_t code) const {
    if (code >= q_) fail(errc::invalid_param, "element code out of range");
    return {static_cast<std::uint32_t>(code)};
  }

  FieldElement add(FieldElement a, FieldElement b) const { return {add_raw(a.code, b.code)}; }
  FieldElement sub(FieldElement a, FieldElement b) const { return {sub_raw(a.code, b.code)}; }
  FieldElement neg(FieldElement a) const { return {neg_raw(a.code)}; }
  FieldElement mul(FieldElement a, FieldElement b) const { return {mul_raw(a.code, b.code)}; }

  FieldElement inv(FieldElement a) const {
    if (a.code == 0) fail(errc::division_by_zero, "inverse of zero");
    return {inv_raw(a.code)};
  }

  FieldElement pow(FieldElement a, std::uint64_t e) const { return {pow_raw(a.code, e)}; }

  /// Absolute trace Tr(a) = a + a^p + ... + a^{p^{k-1}}; lands in the prime
  /// subfield, so the result code is always below p.
  FieldElement trace(FieldElement a) const {
    std::uint32_t frob = a.code;
    std::uint32_t acc = a.code;
    for (std::uint32_t i = 1; i < k_; ++i) {
      frob = pow_raw(frob, p_);
      acc = add_raw(acc, frob);
    }
    if (acc >= p_) throw std::logic_error("trace left the prime subfield");
    return {acc};
  }

  /// Base-p digits of an element code, constant coefficient first (size k).
  std::vector<std::uint32_t> coeffs(FieldElement a) const {
    std::vector<std::uint32_t> out(k_, 0);
    std::uint32_t c = a.code;
    for (std::uint32_t i = 0; i < k_; ++i) {
      out[i] = c % p_;
      c /= p_;
    }
    return out;
  }

  FieldElement from_coeffs(const std::vector<std::uint32_t>& digits) const {
    if (digits.size() != k_) fail(errc::invalid_param, "coefficient count must equal k");
    std::uint64_t code = 0;
    for (std::uint32_t i = k_; i-- > 0;) {
      if (digits[i] >= p_) fail(errc::invalid_param, "coefficient out of range");
      code = code * p_ + digits[i];
    }
    return {static_cast<std::uint32_t>(code)};
  }

  // Raw-code arithmetic for hot loops. Callers guarantee codes < q.

  std::uint32_t add_raw(std::uint32_t a, std::uint32_t b) const {
    if (k_ == 1) {
      std::uint32_t s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    return digitwise(a, b, /*subtract=*/false);
  }

  std::uint32_t sub_raw(std::uint32_t a, std::uint32_t b) const {
    if (k_ == 1) return a >= b ? a - b : a + p_ - b;
    return digitwise(a, b, /*subtract=*/true);
  }

  std::uint32_t neg_raw(std::uint32_t a) const { return sub_raw(0, a); }

  std::uint32_t mul_raw(std::uint32_t a, std::uint32_t b) const {
    if (tables_) return tables_->mul[static_cast<std::size_t>(a) * q_ + b];
    if (k_ == 1) return static_cast<std::uint32_t>((std::uint64_t)a * b % p_);
    return mul_poly(a, b);
  }

  std::uint32_t inv_raw(std::uint32_t a) const {
    if (tables_) return tables_->inv[a];
    return inv_gcd(a);
  }

  std::uint32_t pow_raw(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t base = a;
    std::uint32_t acc = 1;
    while (e > 0) {
      if (e & 1) acc = mul_raw(acc, base);
      base = mul_raw(base, base);
      e >>= 1;
    }
    return acc;
  }

  friend FieldSpec make_field(std::uint32_t p, std::uint32_t k, const FieldOptions& opt);

 private:
  FieldSpec() = default;

  struct Tables {
    std::vector<std::uint16_t> mul;  // q*q, row-major
    std::vector<std::uint16_t> inv;  // q, entry 0 unused
  };

  // Digitwise base-p addition/subtraction of codes.
  std::uint32_t digitwise(std::uint32_t a, std::uint32_t b, bool subtract) const {
    std::uint32_t out = 0;
    std::uint32_t pw = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      std::uint32_t da = a % p_;
      std::uint32_t db = b % p_;
      std::uint32_t dr = subtract ? (da >= db ? da - db : da + p_ - db)
                                  : (da + db >= p_ ? da + db - p_ : da + db);
      out += dr * pw;
      a /= p_;
      b /= p_;
      pw *= p_;
    }
    return out;
  }

  // Schoolbook polynomial product reduced mod the modulus.
  std::uint32_t mul_poly(std::uint32_t a, std::uint32_t b) const {
    constexpr std::uint32_t kMaxDeg = 64;
    std::uint32_t da[kMaxDeg] = {0};
    std::uint32_t db[kMaxDeg] = {0};
    std::uint64_t prod[2 * kMaxDeg] = {0};
    for (std::uint32_t i = 0; i < k_; ++i) {
      da[i] = a % p_;
      a /= p_;
      db[i] = b % p_;
      b /= p_;
    }
    for (std::uint32_t i = 0; i < k_; ++i) {
      if (da[i] == 0) continue;
      for (std::uint32_t j = 0; j < k_; ++j) prod[i + j] += (std::uint64_t)da[i] * db[j];
    }
    for (std::uint32_t i = 0; i < 2 * k_ - 1; ++i) prod[i] %= p_;
    // Reduce: modulus is monic, so x^k = -(m_0 + m_1 x + ... + m_{k-1} x^{k-1}).
    for (std::uint32_t deg = 2 * k_ - 2; deg >= k_; --deg) {
      std::uint64_t top = prod[deg] % p_;
      if (top != 0) {
        prod[deg] = 0;
        for (std::uint32_t j = 0; j < k_; ++j) {
          std::uint64_t t = prod[deg - k_ + j] + (std::uint64_t)(p_ - modulus_[j]) % p_ * top;
          prod[deg - k_ + j] = t % p_;
        }
      }
    }
    std::uint32_t code = 0;
    for (std::uint32_t i = k_; i-- > 0;) code = code * p_ + static_cast<std::uint32_t>(prod[i] % p_);
    return code;
  }

  // Extended Euclid on polynomials over F_p; for k = 1 falls back to the
  // integer version via Fermat.
  std::uint32_t inv_gcd(std::uint32_t a) const {
    if (k_ == 1) return pow_raw(a, p_ - 2);

    using Poly = std::vector<std::uint32_t>;  // constant term first, trimmed
    auto trim = [](Poly& f) {
      while (!f.empty() && f.back() == 0) f.pop_back();
    };
    auto inv_mod_p = [this](std::uint32_t x) {
      std::uint32_t r = 1;
      std::uint32_t base = x % p_;
      for (std::uint32_t e = p_ - 2; e > 0; e >>= 1) {
        if (e & 1) r = (std::uint64_t)r * base % p_;
        base = (std::uint64_t)base * base % p_;
      }
      return r;
    };
    // divmod: f = g*quot + rem
    auto divmod = [&](Poly f, const Poly& g, Poly& quot) {
      quot.assign(f.size() > g.size() ? f.size() - g.size() + 1 : 1, 0);
      std::uint32_t lead_inv = inv_mod_p(g.back());
      while (f.size() >= g.size() && !f.empty()) {
        std::uint32_t c = (std::uint64_t)f.back() * lead_inv % p_;
        std::size_t shift = f.size() - g.size();
        quot[shift] = c;
        for (std::size_t i = 0; i < g.size(); ++i) {
          std::uint64_t t = f[shift + i] + (std::uint64_t)(p_ - g[i]) % p_ * c;
          f[shift + i] = static_cast<std::uint32_t>(t % p_);
        }
        trim(f);
      }
      return f;  // remainder
    };
    auto mul_mod_p = [&](const Poly& f, const Poly& g) {
      if (f.empty() || g.empty()) return Poly{};
      Poly out(f.size() + g.size() - 1, 0);
      for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
          out[i + j] = static_cast<std::uint32_t>(
              (out[i + j] + (std::uint64_t)f[i] * g[j]) % p_);
      trim(out);
      return out;
    };
    auto sub_poly = [&](Poly f, const Poly& g) {
      if (f.size() < g.size()) f.resize(g.size(), 0);
      for (std::size_t i = 0; i < g.size(); ++i)
        f[i] = f[i] >= g[i] ? f[i] - g[i] : f[i] + p_ - g[i];
      trim(f);
      return f;
    };

    Poly r0 = modulus_;
    Poly r1;
    {
      std::uint32_t c = a;
      for (std::uint32_t i = 0; i < k_; ++i) {
        r1.push_back(c % p_);
        c /= p_;
      }
      trim(r1);
    }
    Poly s0{};      // coefficient of `a` alongside r0
    Poly s1{1};     // ... alongside r1
    while (!(r1.size() == 1)) {
      Poly quot;
      Poly rem = divmod(r0, r1, quot);
      Poly s2 = sub_poly(s0, mul_mod_p(quot, s1));
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(s2);
      if (r1.empty()) throw std::logic_error("modulus not coprime to element");
    }
    // r1 is a nonzero constant; scale s1 by its inverse.
    std::uint32_t scale = inv_mod_p(r1[0]);
    std::uint32_t code = 0;
    for (std::size_t i = s1.size(); i-- > 0;)
      code = code * p_ + static_cast<std::uint32_t>((std::uint64_t)s1[i] * scale % p_);
    return code;
  }

  std::uint32_t p_ = 0;
  std::uint32_t k_ = 0;
  std::uint64_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::shared_ptr<const Tables> tables_;
};

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

/// Remainder of f mod g over F_p, both constant-term-first and g monic.
inline std::vector<std::uint32_t> poly_mod(std::vector<std::uint32_t> f,
                                           const std::vector<std::uint32_t>& g,
                                           std::uint32_t p) {
  auto trim = [](std::vector<std::uint32_t>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  trim(f);
  while (f.size() >= g.size() && !f.empty()) {
    std::uint32_t c = f.back();
    std::size_t shift = f.size() - g.size();
    for (std::size_t i = 0; i < g.size(); ++i) {
      std::uint64_t t = f[shift + i] + (std::uint64_t)(p - g[i]) % p * c;
      f[shift + i] = static_cast<std::uint32_t>(t % p);
    }
    trim(f);
  }
  return f;
}

/// Irreducibility over F_p by exhaustive trial division: no monic divisor of
/// degree 1..deg/2 divides f. Adequate at desk scale.
inline bool is_irreducible(const std::vector<std::uint32_t>& f, std::uint32_t p) {
  std::uint32_t deg = static_cast<std::uint32_t>(f.size()) - 1;
  for (std::uint32_t m = 1; 2 * m <= deg; ++m) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < m; ++i) count *= p;
    for (std::uint64_t v = 0; v < count; ++v) {
      std::vector<std::uint32_t> g(m + 1, 0);
      std::uint64_t c = v;
      for (std::uint32_t i = 0; i < m; ++i) {
        g[i] = static_cast<std::uint32_t>(c % p);
        c /= p;
      }
      g[m] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Construct F_{p^k} for an odd prime p. The modulus search enumerates monic
/// degree-k polynomials in lexicographic order of (c_0, c_1, ..., c_{k-1})
/// and takes the first irreducible one.
inline FieldSpec make_field(std::uint32_t p, std::uint32_t k,
                            const FieldOptions& opt = FieldOptions{}) {
  if (p == 2) fail(errc::even_characteristic, "q must be odd");
  if (!detail::is_prime(p)) fail(errc::not_prime, "p = " + std::to_string(p));
  if (k < 1) fail(errc::invalid_param, "extension degree must be at least 1");

  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    q *= p;
    if (q > opt.size_cap) fail(errc::size_cap_exceeded, "q exceeds size cap");
  }

  FieldSpec F;
  F.p_ = p;
  F.k_ = k;
  F.q_ = q;

  if (k == 1) {
    F.modulus_ = {0, 1};  // x
  } else {
    bool found = false;
    for (std::uint64_t v = 0; v < q && !found; ++v) {
      // v encodes (c_0, ..., c_{k-1}) with c_0 in the most significant slot,
      // so ascending v is ascending lex order from the constant term upward.
      std::vector<std::uint32_t> cand(k + 1, 0);
      cand[k] = 1;
      std::uint64_t rem = v;
      std::uint64_t base = q / p;  // p^{k-1}
      for (std::uint32_t i = 0; i < k; ++i) {
        cand[i] = static_cast<std::uint32_t>(rem / base);
        rem %= base;
        base /= p;
      }
      if (detail::is_irreducible(cand, p)) {
        F.modulus_ = cand;
        found = true;
      }
    }
    if (!found) throw std::logic_error("no irreducible modulus found");
  }

  if (q <= opt.table_threshold) {
    auto tables = std::make_shared<FieldSpec::Tables>();
    tables->mul.resize(static_cast<std::size_t>(q) * q);
    for (std::uint64_t a = 0; a < q; ++a) {
      for (std::uint64_t b = a; b < q; ++b) {
        std::uint32_t r =
            k == 1 ? static_cast<std::uint32_t>(a * b % p)
                   : F.mul_poly(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
        tables->mul[a * q + b] = static_cast<std::uint16_t>(r);
        tables->mul[b * q + a] = static_cast<std::uint16_t>(r);
      }
    }
    tables->inv.assign(q, 0);
    for (std::uint64_t a = 1; a < q; ++a) {
      for (std::uint64_t b = 1; b < q; ++b) {
        if (tables->mul[a * q + b] == 1) {
          tables->inv[a] = static_cast<std::uint16_t>(b);
          break;
        }
      }
    }
    F.tables_ = std::move(tables);
  }

  return F;
}

}  // namespace pindist
