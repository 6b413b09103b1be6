#pragma once

#include "acl/errors.hpp"
#include "acl/field.hpp"
#include "acl/numeric.hpp"
#include "acl/poly.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <vector>

namespace acl {

/// Largest q^d for which monic polynomials of degree d are filtered exhaustively.
inline constexpr std::uint64_t kIrreducibleGuard = 10'000'000;

/// Ben-Or test: f is irreducible iff gcd(f, t^{q^i} - t) = 1 for all i <= deg f / 2.
inline bool is_irreducible(const Field& F, const Poly& f) {
  const int d = f.degree();
  if (d < 1) return false;
  if (d == 1) return true;
  if (f[0] == 0) return false;
  const Poly x = Poly::t();
  Poly h = x;
  for (int i = 1; 2 * i <= d; ++i) {
    h = powmod(F, h, BigInt(F.order()), f);
    if (!gcd(F, f, sub(F, h, x)).is_one()) return false;
  }
  return true;
}

namespace detail {

inline std::uint64_t checked_power(std::uint64_t q, unsigned d, std::uint64_t limit) {
  std::uint64_t out = 1;
  for (unsigned i = 0; i < d; ++i) {
    if (out > limit / q) return limit + 1;
    out *= q;
  }
  return out;
}

// Monic polynomial of degree d whose lower coefficients are the base-q digits of
// index with c_0 most significant, so increasing index is lexicographic order.
inline Poly monic_from_index(std::uint64_t index, std::uint64_t q, unsigned d) {
  std::vector<Elem> c(d + 1, 0);
  c[d] = 1;
  for (unsigned i = d; i-- > 0;) {
    c[i] = static_cast<Elem>(index % q);
    index /= q;
  }
  return Poly(std::move(c));
}

class IrreducibleCache {
 public:
  static IrreducibleCache& instance() {
    static IrreducibleCache cache;
    return cache;
  }

  std::shared_ptr<const std::vector<Poly>> get(const Field& F, unsigned d) {
    const Key key{F.characteristic(), F.modulus(), d};
    {
      std::lock_guard lock(mu_);
      auto it = table_.find(key);
      if (it != table_.end()) return it->second;
    }
    auto list = std::make_shared<std::vector<Poly>>();
    const std::uint64_t q = F.order();
    const std::uint64_t count = checked_power(q, d, kIrreducibleGuard);
    if (count > kIrreducibleGuard)
      throw SizeError("irreducible enumeration guard exceeded: q^d > " + std::to_string(kIrreducibleGuard));
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Poly f = monic_from_index(idx, q, d);
      if (is_irreducible(F, f)) list->push_back(std::move(f));
    }
    std::lock_guard lock(mu_);
    return table_.emplace(key, std::move(list)).first->second;
  }

 private:
  using Key = std::tuple<std::uint32_t, std::vector<std::uint32_t>, unsigned>;
  std::mutex mu_;
  std::map<Key, std::shared_ptr<const std::vector<Poly>>> table_;
};

}  // namespace detail

/// All monic irreducible polynomials of degree d, in lexicographic order.
inline const std::vector<Poly>& irreducibles_of_degree(const Field& F, unsigned d) {
  if (d == 0) throw DomainError("irreducible degree must be >= 1");
  // the cache keeps the list alive for the life of the process
  return *detail::IrreducibleCache::instance().get(F, d);
}

struct Factor {
  Poly prime;  // monic irreducible
  unsigned multiplicity = 0;
};

struct Factorization {
  Elem unit = 1;
  std::vector<Factor> factors;  // ordered by degree, then lexicographically
};

/// Factorization by trial division with enumerated irreducibles of degree <= deg/2.
/// Throws SizeError when that enumeration exceeds the irreducible guard.
inline Factorization factor(const Field& F, const Poly& f) {
  if (f.is_zero()) throw DomainError("cannot factor the zero polynomial");
  Factorization out;
  out.unit = f.lead();
  Poly rest = make_monic(F, f);
  for (unsigned d = 1; 2 * static_cast<int>(d) <= rest.degree(); ++d) {
    for (const Poly& p : irreducibles_of_degree(F, d)) {
      if (2 * static_cast<int>(d) > rest.degree()) break;
      unsigned m = 0;
      for (;;) {
        auto [qt, r] = divmod(F, rest, p);
        if (!r.is_zero()) break;
        rest = std::move(qt);
        ++m;
      }
      if (m) out.factors.push_back({p, m});
    }
  }
  if (rest.degree() >= 1) {
    // no factor of degree <= deg/2 remains, so rest is irreducible
    auto pos = out.factors.begin();
    while (pos != out.factors.end() && (pos->prime.degree() < rest.degree() ||
                                        (pos->prime.degree() == rest.degree() && pos->prime < rest)))
      ++pos;
    if (pos != out.factors.end() && pos->prime == rest)
      ++pos->multiplicity;
    else
      out.factors.insert(pos, {rest, 1});
  }
  return out;
}

/// Legendre symbol of a modulo the monic irreducible p: 0 if p | a, else +1 or -1
/// according to whether a mod p is a square in F_q[t]/(p).
inline int quadratic_character(const Field& F, const Poly& a, const Poly& p) {
  if (!F.is_odd()) throw UnsupportedError("quadratic character requires odd characteristic");
  if (!p.is_monic() || p.degree() < 1) throw DomainError("quadratic character modulus must be monic of degree >= 1");
  const Poly r = mod(F, a, p);
  if (r.is_zero()) return 0;
  const BigInt residue_order = ipow(F.order(), static_cast<unsigned long>(p.degree()));
  const Poly s = powmod(F, r, (residue_order - 1) / 2, p);
  if (s.is_one()) return 1;
  check_invariant(s == Poly::constant(F.neg(1)), "Euler criterion produced a value other than +-1");
  return -1;
}

/// |P^n(F_{q^k})| = (q^{k(n+1)} - 1) / (q^k - 1).
inline BigInt count_points_pn(unsigned n, std::uint64_t q, unsigned k) {
  if (n < 1 || k < 1) throw DomainError("count_points_pn requires n >= 1 and k >= 1");
  const BigInt qk = ipow(q, k);
  return (ipow(qk, n + 1) - 1) / (qk - 1);
}

inline BigInt count_points_pn(unsigned n, const Field& F, unsigned k) { return count_points_pn(n, F.order(), k); }

/// Square root in F_q[t] (odd q), if f is a square.
inline std::optional<Poly> sqrt_poly(const Field& F, const Poly& f) {
  if (!F.is_odd()) throw UnsupportedError("polynomial square roots are implemented for odd q only");
  if (f.is_zero()) return Poly();
  if (f.degree() % 2 != 0) return std::nullopt;
  const auto lead_root = F.sqrt(f.lead());
  if (!lead_root) return std::nullopt;
  const std::size_t n = static_cast<std::size_t>(f.degree() / 2);
  std::vector<Elem> g(n + 1, 0);
  g[n] = *lead_root;
  const Elem two_lead_inv = F.inv(F.mul(F.from_int(2), g[n]));
  for (std::size_t k = n; k-- > 0;) {
    // coefficient of t^{n+k} in g^2 from the already-known g_{k+1..n}
    Elem acc = 0;
    for (std::size_t i = k + 1; i <= n; ++i) {
      const std::size_t j = n + k - i;
      if (j > k && j <= n) acc = F.add(acc, F.mul(g[i], g[j]));
    }
    g[k] = F.mul(F.sub(f[n + k], acc), two_lead_inv);
  }
  Poly root(std::move(g));
  if (mul(F, root, root) != f) return std::nullopt;
  return root;
}

/// f = unit * square^2 * core with core monic squarefree.
struct SquarefreeSplit {
  Elem unit = 1;
  Poly square;
  Poly core;
};

inline SquarefreeSplit squarefree_split(const Field& F, const Poly& f) {
  const Factorization fac = factor(F, f);
  SquarefreeSplit out{fac.unit, Poly::one(), Poly::one()};
  for (const auto& [p, m] : fac.factors) {
    if (m / 2) out.square = mul(F, out.square, pow(F, p, m / 2));
    if (m % 2) out.core = mul(F, out.core, p);
  }
  return out;
}

inline bool is_squarefree(const Field& F, const Poly& f) {
  for (const auto& fa : factor(F, f).factors)
    if (fa.multiplicity > 1) return false;
  return true;
}

}  // namespace acl
