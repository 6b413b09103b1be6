#pragma once

#include "acl/errors.hpp"
#include "acl/numeric.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace acl {

/// An element of F_q, encoded as the integer sum c_i p^i of its coordinates in the
/// polynomial basis 1, x, ..., x^{k-1} over F_p. Encoding order is the element order.
using Elem = std::uint32_t;

/// The finite field F_q, q = p^k, realised as F_p[x]/(modulus) with the
/// lexicographically least monic irreducible modulus of degree k.
///
/// Lexicographic order compares coefficient sequences lowest degree first.
/// Copies share the arithmetic tables.
class Field {
 public:
  static constexpr std::uint64_t kMaxOrder = 65536;
  static constexpr std::uint64_t kMaxExtensionOrder = 1024;

  /// Field of order q; q must be a prime power within kMaxOrder.
  static Field of_order(std::uint64_t q) {
    if (!is_prime_power(q)) throw DomainError("field order must be a prime power, got " + std::to_string(q));
    const auto p = smallest_prime_factor(q);
    unsigned k = 0;
    for (std::uint64_t r = q; r > 1; r /= p) ++k;
    return Field(static_cast<std::uint32_t>(p), k);
  }

  Field(std::uint32_t p, unsigned k) : Field(p, least_irreducible(p, k)) {}

  /// Explicit modulus (coefficients over F_p, lowest degree first, monic).
  Field(std::uint32_t p, std::vector<std::uint32_t> modulus) {
    if (!is_prime(p)) throw DomainError("characteristic must be prime, got " + std::to_string(p));
    if (modulus.size() < 2 || modulus.back() != 1) throw DomainError("modulus must be monic of degree >= 1");
    const unsigned k = static_cast<unsigned>(modulus.size() - 1);
    for (auto c : modulus)
      if (c >= p) throw DomainError("modulus coefficient out of range");
    if (!irreducible_over_prime_field(p, modulus)) throw DomainError("modulus is reducible over F_p");
    std::uint64_t q = 1;
    for (unsigned i = 0; i < k; ++i) {
      q *= p;
      if (q > kMaxOrder) throw SizeError("field order exceeds " + std::to_string(kMaxOrder));
    }
    if (k > 1 && q > kMaxExtensionOrder)
      throw SizeError("extension field order exceeds " + std::to_string(kMaxExtensionOrder));
    auto t = std::make_shared<Tables>();
    t->p = p;
    t->k = k;
    t->q = static_cast<std::uint32_t>(q);
    t->modulus = std::move(modulus);
    build(*t);
    tables_ = std::move(t);
  }

  std::uint32_t characteristic() const { return tables_->p; }
  unsigned degree() const { return tables_->k; }
  std::uint32_t order() const { return tables_->q; }
  bool is_odd() const { return tables_->p != 2; }
  const std::vector<std::uint32_t>& modulus() const { return tables_->modulus; }

  Elem add(Elem a, Elem b) const {
    const auto& t = *tables_;
    if (t.k == 1) {
      const Elem s = a + b;
      return s >= t.p ? s - t.p : s;
    }
    return t.add[a * t.q + b];
  }
  Elem neg(Elem a) const {
    const auto& t = *tables_;
    if (t.k == 1) return a == 0 ? 0 : t.p - a;
    return t.neg[a];
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    const auto& t = *tables_;
    if (t.k == 1) return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % t.p);
    return t.mul[a * t.q + b];
  }
  Elem inv(Elem a) const {
    if (a == 0) throw DomainError("inverse of zero in F_q");
    return tables_->inv[a];
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const {
    Elem out = 1;
    while (e != 0) {
      if (e & 1u) out = mul(out, a);
      e >>= 1u;
      if (e != 0) a = mul(a, a);
    }
    return out;
  }

  /// Image of an integer in the prime subfield.
  Elem from_int(std::int64_t n) const {
    const std::int64_t p = tables_->p;
    return static_cast<Elem>(((n % p) + p) % p);
  }

  bool is_square(Elem a) const { return a == 0 || tables_->sqrt[a] != kNoRoot; }
  /// Least square root in encoding order, if any.
  std::optional<Elem> sqrt(Elem a) const {
    const Elem r = tables_->sqrt[a];
    if (r == kNoRoot) return std::nullopt;
    return r;
  }
  /// Least nonsquare in encoding order; q must be odd.
  Elem nonsquare() const {
    if (!is_odd()) throw UnsupportedError("every element of a field of characteristic 2 is a square");
    return tables_->nonsquare;
  }

  std::string element_to_string(Elem a) const {
    if (tables_->k == 1) return std::to_string(a);
    // base-p digits, lowest first, joined by ':' so that CSV fields stay token-safe
    std::string out;
    for (unsigned i = 0; i < tables_->k; ++i) {
      if (i) out += ':';
      out += std::to_string(a % tables_->p);
      a /= tables_->p;
    }
    return out;
  }

  friend bool operator==(const Field& a, const Field& b) {
    return a.tables_ == b.tables_ ||
           (a.tables_->p == b.tables_->p && a.tables_->modulus == b.tables_->modulus);
  }

 private:
  static constexpr Elem kNoRoot = 0xffffffffu;

  struct Tables {
    std::uint32_t p = 0;
    unsigned k = 0;
    std::uint32_t q = 0;
    std::vector<std::uint32_t> modulus;
    std::vector<std::uint16_t> add, mul;
    std::vector<Elem> neg, inv, sqrt;
    Elem nonsquare = 0;
  };

  using PrimePoly = std::vector<std::uint32_t>;

  static void trim(PrimePoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }

  // Remainder modulo a monic polynomial.
  static PrimePoly prime_mod(PrimePoly a, const PrimePoly& m, std::uint32_t p) {
    trim(a);
    const std::size_t dm = m.size() - 1;
    while (a.size() > dm) {
      const std::uint64_t c = a.back();
      const std::size_t shift = a.size() - 1 - dm;
      for (std::size_t i = 0; i <= dm; ++i)
        a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * m[i]) % p);
      trim(a);
    }
    return a;
  }

  // Trial division by every monic polynomial of degree 1..k/2.
  static bool irreducible_over_prime_field(std::uint32_t p, const PrimePoly& f) {
    const unsigned k = static_cast<unsigned>(f.size() - 1);
    for (unsigned d = 1; 2 * d <= k; ++d) {
      std::uint64_t count = 1;
      for (unsigned i = 0; i < d; ++i) count *= p;
      for (std::uint64_t idx = 0; idx < count; ++idx) {
        PrimePoly g(d + 1, 0);
        g[d] = 1;
        std::uint64_t r = idx;
        for (unsigned i = 0; i < d; ++i) {
          g[i] = static_cast<std::uint32_t>(r % p);
          r /= p;
        }
        if (prime_mod(f, g, p).empty()) return false;
      }
    }
    return true;
  }

  static PrimePoly least_irreducible(std::uint32_t p, unsigned k) {
    if (!is_prime(p)) throw DomainError("characteristic must be prime, got " + std::to_string(p));
    if (k == 0) throw DomainError("extension degree must be >= 1");
    std::uint64_t count = 1;
    for (unsigned i = 0; i < k; ++i) {
      count *= p;
      if (count > kMaxOrder) throw SizeError("field order exceeds " + std::to_string(kMaxOrder));
    }
    // index digits: c_0 most significant, so increasing index is lexicographic order
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      PrimePoly f(k + 1, 0);
      f[k] = 1;
      std::uint64_t r = idx;
      for (unsigned i = k; i-- > 0;) {
        f[i] = static_cast<std::uint32_t>(r % p);
        r /= p;
      }
      if (irreducible_over_prime_field(p, f)) return f;
    }
    throw InvariantError("no irreducible polynomial found");
  }

  static void build(Tables& t) {
    const std::uint32_t q = t.q, p = t.p;
    auto digits = [&](Elem a) {
      PrimePoly d(t.k, 0);
      for (unsigned i = 0; i < t.k; ++i) {
        d[i] = a % p;
        a /= p;
      }
      return d;
    };
    auto encode = [&](const PrimePoly& d) {
      Elem a = 0;
      for (std::size_t i = d.size(); i-- > 0;) a = a * p + d[i];
      return a;
    };
    auto mul_raw = [&](Elem a, Elem b) -> Elem {
      if (t.k == 1) return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p);
      const auto da = digits(a), db = digits(b);
      PrimePoly prod(2 * t.k - 1, 0);
      for (unsigned i = 0; i < t.k; ++i)
        for (unsigned j = 0; j < t.k; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
      auto r = prime_mod(prod, t.modulus, p);
      r.resize(t.k, 0);
      return encode(r);
    };
    if (t.k > 1) {
      t.add.resize(static_cast<std::size_t>(q) * q);
      t.mul.resize(static_cast<std::size_t>(q) * q);
      t.neg.resize(q);
      for (Elem a = 0; a < q; ++a) {
        const auto da = digits(a);
        PrimePoly dn(t.k);
        for (unsigned i = 0; i < t.k; ++i) dn[i] = (p - da[i]) % p;
        t.neg[a] = encode(dn);
        for (Elem b = 0; b < q; ++b) {
          const auto db = digits(b);
          PrimePoly ds(t.k);
          for (unsigned i = 0; i < t.k; ++i) ds[i] = (da[i] + db[i]) % p;
          t.add[a * q + b] = static_cast<std::uint16_t>(encode(ds));
          t.mul[a * q + b] = static_cast<std::uint16_t>(mul_raw(a, b));
        }
      }
    }
    t.inv.assign(q, 0);
    t.sqrt.assign(q, kNoRoot);
    // a^{q-2} = a^{-1}
    for (Elem a = 1; a < q; ++a) {
      Elem out = 1, base = a;
      for (std::uint64_t e = q - 2; e != 0; e >>= 1u) {
        if (e & 1u) out = mul_raw(out, base);
        base = mul_raw(base, base);
      }
      t.inv[a] = out;
    }
    for (Elem r = q; r-- > 0;) t.sqrt[mul_raw(r, r)] = r;
    t.nonsquare = 0;
    if (p != 2)
      for (Elem a = 1; a < q; ++a)
        if (t.sqrt[a] == kNoRoot) {
          t.nonsquare = a;
          break;
        }
  }

  std::shared_ptr<const Tables> tables_;
};

}  // namespace acl
