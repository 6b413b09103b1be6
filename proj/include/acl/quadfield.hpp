#pragma once

#include "acl/errors.hpp"
#include "acl/fq_arith.hpp"
#include "acl/global_field.hpp"
#include "acl/numeric.hpp"
#include "acl/poly.hpp"
#include "acl/ratpoints.hpp"

#include <array>
#include <atomic>
#include <future>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace acl {

/// L = F_q(t)(sqrt D) for odd q and squarefree D that is not a square.
class QuadExt {
 public:
  QuadExt(Field F, Poly D) : F_(std::move(F)), D_(std::move(D)) {
    if (!F_.is_odd()) throw UnsupportedError("quadratic extensions are implemented for odd q only");
    if (D_.is_zero()) throw DomainError("D must be nonzero");
    if (D_.is_constant()) {
      if (F_.is_square(D_[0])) throw DomainError("constant D must be a nonsquare");
    } else if (!is_squarefree(F_, D_)) {
      throw DomainError("D must be squarefree");
    }
  }

  const Field& field() const { return F_; }
  const Poly& D() const { return D_; }

  friend bool operator==(const QuadExt& a, const QuadExt& b) { return a.F_ == b.F_ && a.D_ == b.D_; }

 private:
  Field F_;
  Poly D_;
};

/// num / den with den monic and gcd(num, den) = 1.
struct RatFunc {
  Poly num;
  Poly den = Poly::one();

  static RatFunc make(const Field& F, Poly n, Poly d) {
    if (d.is_zero()) throw DomainError("zero denominator");
    if (n.is_zero()) return {Poly(), Poly::one()};
    const Poly g = gcd(F, n, d);
    n = quo(F, n, g);
    d = quo(F, d, g);
    const Elem li = F.inv(d.lead());
    return {scale(F, n, li), scale(F, d, li)};
  }
  bool is_zero() const { return num.is_zero(); }
  friend bool operator==(const RatFunc&, const RatFunc&) = default;
};

/// (a + b sqrt D) / c with polynomial a, b, monic c and gcd(a, b, c) = 1.
struct QuadElem {
  Poly a, b;
  Poly c = Poly::one();

  static QuadElem make(const Field& F, Poly a, Poly b, Poly c = Poly::one()) {
    if (c.is_zero()) throw DomainError("zero denominator");
    if (a.is_zero() && b.is_zero()) return {Poly(), Poly(), Poly::one()};
    const Poly g = gcd(F, gcd(F, a, b), c);
    if (!g.is_one()) {
      a = quo(F, a, g);
      b = quo(F, b, g);
      c = quo(F, c, g);
    }
    const Elem li = F.inv(c.lead());
    return {scale(F, a, li), scale(F, b, li), scale(F, c, li)};
  }
  bool is_zero() const { return a.is_zero() && b.is_zero(); }
  bool is_rational() const { return b.is_zero(); }
  friend bool operator==(const QuadElem&, const QuadElem&) = default;
};

inline QuadElem add(const QuadExt& L, const QuadElem& x, const QuadElem& y) {
  const Field& F = L.field();
  return QuadElem::make(F, add(F, mul(F, x.a, y.c), mul(F, y.a, x.c)), add(F, mul(F, x.b, y.c), mul(F, y.b, x.c)),
                        mul(F, x.c, y.c));
}

inline QuadElem mul(const QuadExt& L, const QuadElem& x, const QuadElem& y) {
  const Field& F = L.field();
  const Poly a = add(F, mul(F, x.a, y.a), mul(F, L.D(), mul(F, x.b, y.b)));
  const Poly b = add(F, mul(F, x.a, y.b), mul(F, x.b, y.a));
  return QuadElem::make(F, a, b, mul(F, x.c, y.c));
}

inline QuadElem conjugate(const QuadExt& L, const QuadElem& x) { return {x.a, neg(L.field(), x.b), x.c}; }

/// a^2 - D b^2 over c^2.
inline RatFunc norm(const QuadExt& L, const QuadElem& x) {
  const Field& F = L.field();
  return RatFunc::make(F, sub(F, mul(F, x.a, x.a), mul(F, L.D(), mul(F, x.b, x.b))), mul(F, x.c, x.c));
}

inline RatFunc trace(const QuadExt& L, const QuadElem& x) {
  const Field& F = L.field();
  return RatFunc::make(F, scale(F, x.a, F.from_int(2)), x.c);
}

enum class Splitting { split, inert, ramified };

inline const char* to_string(Splitting s) {
  switch (s) {
    case Splitting::split: return "split";
    case Splitting::inert: return "inert";
    case Splitting::ramified: return "ramified";
  }
  return "?";
}

/// A place w of L above a place of F_q(t).
struct PlaceQ {
  std::optional<Poly> base;  // monic irreducible; empty for the infinite place
  Splitting type = Splitting::inert;
  unsigned e = 1, f = 2;
  unsigned branch = 0;  // split places: 0 takes the smaller residue root, 1 its negative
  Poly root;            // split places: a square root of D (reversed D at infinity) modulo the base

  bool is_infinite() const { return !base.has_value(); }
  unsigned base_degree() const { return base ? static_cast<unsigned>(base->degree()) : 1u; }
  /// deg w = f * deg(base).
  unsigned degree() const { return f * base_degree(); }
};

namespace detail {

inline Poly mulmod(const Field& F, const Poly& a, const Poly& b, const Poly& m) { return mod(F, mul(F, a, b), m); }

// Tonelli-Shanks in F_q[t]/(p), p monic irreducible.
inline std::optional<Poly> sqrt_mod_prime(const Field& F, const Poly& a, const Poly& p) {
  const Poly x = mod(F, a, p);
  if (x.is_zero()) return Poly();
  if (quadratic_character(F, x, p) != 1) return std::nullopt;
  const unsigned d = static_cast<unsigned>(p.degree());
  const BigInt Q = ipow(BigInt(F.order()), d);
  BigInt odd = Q - 1;
  unsigned s = 0;
  while (!boost::multiprecision::bit_test(odd, 0)) {
    odd >>= 1;
    ++s;
  }
  // least nonsquare residue in lexicographic order
  Poly z;
  const std::uint64_t residues = checked_power(F.order(), d, kIrreducibleGuard);
  for (std::uint64_t idx = 1; idx < residues; ++idx) {
    std::vector<Elem> c(d);
    std::uint64_t r = idx;
    for (unsigned i = 0; i < d; ++i) {
      c[i] = static_cast<Elem>(r % F.order());
      r /= F.order();
    }
    Poly cand(std::move(c));
    if (quadratic_character(F, cand, p) == -1) {
      z = std::move(cand);
      break;
    }
  }
  check_invariant(!z.is_zero(), "no nonsquare residue found");
  unsigned m = s;
  Poly c = powmod(F, z, odd, p);
  Poly t = powmod(F, x, odd, p);
  Poly root = powmod(F, x, (odd + 1) / 2, p);
  while (!t.is_one()) {
    unsigned i = 0;
    Poly t2 = t;
    while (!t2.is_one()) {
      t2 = mulmod(F, t2, t2, p);
      ++i;
    }
    check_invariant(i < m, "Tonelli-Shanks failed to converge");
    Poly b = c;
    for (unsigned j = 0; j + 1 < m - i; ++j) b = mulmod(F, b, b, p);
    m = i;
    c = mulmod(F, b, b, p);
    t = mulmod(F, t, c, p);
    root = mulmod(F, root, b, p);
  }
  return root;
}

// Newton lift of a square root r0 of D modulo p to a square root modulo p^k.
inline Poly hensel_lift(const Field& F, const Poly& D, const Poly& p, const Poly& r0, unsigned k) {
  Poly r = r0;
  unsigned prec = 1;
  const Elem two = F.from_int(2);
  while (prec < k) {
    prec = std::min(2 * prec, k);
    const Poly m = pow(F, p, prec);
    const Poly err = mod(F, sub(F, mul(F, r, r), D), m);
    const Poly inv2r = inverse_mod(F, scale(F, r, two), m);
    r = mod(F, sub(F, r, mul(F, err, inv2r)), m);
  }
  return r;
}

inline long valuation_at(const Field& F, const Poly& a, const Poly& p) {
  if (a.is_zero()) return std::numeric_limits<long>::max();
  return static_cast<long>(multiplicity(F, a, p));
}

inline long valuation_infinity(const Poly& a) {
  return a.is_zero() ? std::numeric_limits<long>::max() : -static_cast<long>(a.degree());
}

// v_p(A + B r) for the branch r of sqrt(D) lifted to precision v_p(A^2 - D B^2) + 1.
inline long split_valuation(const Field& F, const Poly& D, const Poly& p, const Poly& r0, const Poly& A,
                            const Poly& B) {
  const Poly N = sub(F, mul(F, A, A), mul(F, D, mul(F, B, B)));
  check_invariant(!N.is_zero(), "norm of a nonzero element vanished");
  const unsigned k = multiplicity(F, N, p) + 1;
  const Poly r = hensel_lift(F, D, p, r0, k);
  const Poly pk = pow(F, p, k);
  const Poly value = mod(F, add(F, A, mul(F, B, r)), pk);
  check_invariant(!value.is_zero(), "split valuation exceeded the lift precision");
  return static_cast<long>(multiplicity(F, value, p));
}

// u^n f(1/u) for deg f <= n.
inline Poly reverse(const Poly& f, unsigned n) {
  if (f.is_zero()) return f;
  std::vector<Elem> c(n + 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i) c[n - i] = f[i];
  return Poly(std::move(c));
}

}  // namespace detail

/// Splitting of the finite place p (monic irreducible) in L.
inline Splitting splitting_type(const QuadExt& L, const Poly& p) {
  const Field& F = L.field();
  const int chi = quadratic_character(F, L.D(), p);
  return chi == 0 ? Splitting::ramified : chi == 1 ? Splitting::split : Splitting::inert;
}

/// Splitting of the infinite place of F_q(t) in L.
inline Splitting splitting_type_infinity(const QuadExt& L) {
  if (L.D().degree() % 2 != 0) return Splitting::ramified;
  return L.field().is_square(L.D().lead()) ? Splitting::split : Splitting::inert;
}

namespace detail {

inline std::vector<PlaceQ> make_places(Splitting type, std::optional<Poly> base, const Poly& root, const Field& F,
                                       const Poly& modulus) {
  switch (type) {
    case Splitting::ramified: return {PlaceQ{std::move(base), type, 2, 1, 0, Poly()}};
    case Splitting::inert: return {PlaceQ{std::move(base), type, 1, 2, 0, Poly()}};
    case Splitting::split: {
      Poly r1 = root, r2 = mod(F, neg(F, root), modulus);
      if (r2 < r1) std::swap(r1, r2);
      return {PlaceQ{base, type, 1, 1, 0, r1}, PlaceQ{base, type, 1, 1, 1, r2}};
    }
  }
  return {};
}

}  // namespace detail

/// The one or two places of L above the finite place p.
inline std::vector<PlaceQ> places_above(const QuadExt& L, const Poly& p) {
  if (!p.is_monic() || p.degree() < 1) throw DomainError("base place must be a monic irreducible");
  const Field& F = L.field();
  const Splitting type = splitting_type(L, p);
  Poly root;
  if (type == Splitting::split) root = *detail::sqrt_mod_prime(F, L.D(), p);
  return detail::make_places(type, p, root, F, p);
}

/// The one or two places of L above infinity. In u = 1/t the reversed D has a
/// nonzero constant term; split places carry its square root modulo u.
inline std::vector<PlaceQ> places_above_infinity(const QuadExt& L) {
  const Field& F = L.field();
  const Splitting type = splitting_type_infinity(L);
  Poly root;
  if (type == Splitting::split) root = Poly::constant(*F.sqrt(L.D().lead()));
  return detail::make_places(type, std::nullopt, root, F, Poly::t());
}

/// Normalized valuation w(z), surjective onto Z; w(x) = e v(x) on F_q(t).
inline long valuation(const QuadExt& L, const QuadElem& z, const PlaceQ& w) {
  if (z.is_zero()) throw DomainError("valuation of zero is undefined");
  const Field& F = L.field();
  const Poly& A = z.a;
  const Poly& B = z.b;
  const Poly& D = L.D();
  long num = 0;
  long den = 0;
  if (w.is_infinite()) {
    den = detail::valuation_infinity(z.c);
    switch (w.type) {
      case Splitting::inert: {
        const Poly N = sub(F, mul(F, A, A), mul(F, D, mul(F, B, B)));
        const long v = detail::valuation_infinity(N);
        check_invariant(v % 2 == 0, "odd norm valuation at an inert place");
        num = v / 2;
        break;
      }
      case Splitting::ramified: {
        const long va = detail::valuation_infinity(A), vb = detail::valuation_infinity(B);
        const long ta = va == std::numeric_limits<long>::max() ? va : 2 * va;
        const long tb = vb == std::numeric_limits<long>::max() ? vb : 2 * vb - D.degree();
        num = std::min(ta, tb);
        break;
      }
      case Splitting::split: {
        const unsigned h = static_cast<unsigned>(D.degree() / 2);
        const unsigned n = static_cast<unsigned>(std::max(A.degree(), B.is_zero() ? kDegreeOfZero : B.degree() + static_cast<int>(h)));
        const Poly Ar = detail::reverse(A, n);
        const Poly Br = B.is_zero() ? Poly() : detail::reverse(B, n - h);
        const Poly Dr = detail::reverse(D, 2 * h);
        num = -static_cast<long>(n) + detail::split_valuation(F, Dr, Poly::t(), w.root, Ar, Br);
        break;
      }
    }
    return num - static_cast<long>(w.e) * den;
  }
  const Poly& p = *w.base;
  den = detail::valuation_at(F, z.c, p);
  switch (w.type) {
    case Splitting::inert: {
      const Poly N = sub(F, mul(F, A, A), mul(F, D, mul(F, B, B)));
      const long v = detail::valuation_at(F, N, p);
      check_invariant(v % 2 == 0, "odd norm valuation at an inert place");
      num = v / 2;
      break;
    }
    case Splitting::ramified: {
      const long va = detail::valuation_at(F, A, p), vb = detail::valuation_at(F, B, p);
      const long ta = va == std::numeric_limits<long>::max() ? va : 2 * va;
      const long tb = vb == std::numeric_limits<long>::max() ? vb : 2 * vb + 1;
      num = std::min(ta, tb);
      break;
    }
    case Splitting::split: num = detail::split_valuation(F, D, p, w.root, A, B); break;
  }
  return num - static_cast<long>(w.e) * den;
}

/// Sum of w(z) deg(w) over the places above p (or above infinity if p is empty).
inline long weighted_valuation_sum(const QuadExt& L, const QuadElem& z, const std::optional<Poly>& p) {
  long total = 0;
  for (const auto& w : p ? places_above(L, *p) : places_above_infinity(L))
    total += valuation(L, z, w) * static_cast<long>(w.degree());
  return total;
}

namespace detail {

// Coordinates scaled to polynomial a + b sqrt D.
inline std::vector<QuadElem> clear_denominators(const QuadExt& L, std::span<const QuadElem> x) {
  const Field& F = L.field();
  Poly l = Poly::one();
  for (const auto& z : x) l = quo(F, mul(F, l, z.c), gcd(F, l, z.c));
  std::vector<QuadElem> out;
  for (const auto& z : x) {
    const Poly s = quo(F, l, z.c);
    out.push_back({mul(F, z.a, s), mul(F, z.b, s), Poly::one()});
  }
  return out;
}

inline Poly norm_poly(const QuadExt& L, const QuadElem& z) {
  const Field& F = L.field();
  return sub(F, mul(F, z.a, z.a), mul(F, L.D(), mul(F, z.b, z.b)));
}

}  // namespace detail

/// The primitive ternary form (x.y)(conj(x).y) as a point of P^5: coefficients of
/// y0^2, y1^2, y2^2, y0y1, y0y2, y1y2. Identical for x, its conjugate and L^* multiples.
inline ProjPoint orbit_key(const QuadExt& L, std::span<const QuadElem> x) {
  if (x.size() != 3) throw DomainError("degree-2 points live in P^2");
  const Field& F = L.field();
  const auto c = detail::clear_denominators(L, x);
  const Elem two = F.from_int(2);
  auto sym = [&](std::size_t i, std::size_t j) {
    return scale(F, sub(F, mul(F, c[i].a, c[j].a), mul(F, L.D(), mul(F, c[i].b, c[j].b))), two);
  };
  return canonicalize(F, {detail::norm_poly(L, c[0]), detail::norm_poly(L, c[1]), detail::norm_poly(L, c[2]),
                          sym(0, 1), sym(0, 2), sym(1, 2)});
}

/// A point of P^2(L) of exact degree 2 in canonical form: the first nonzero
/// coordinate lies in F_q[t] and is monic, all coordinates are integral with
/// trivial F_q[t]-content.
struct DegreeTwoPoint {
  std::array<QuadElem, 3> coords;
  ProjPoint key;
};

inline DegreeTwoPoint make_degree2_point(const QuadExt& L, std::span<const QuadElem> x) {
  if (x.size() != 3) throw DomainError("degree-2 points live in P^2");
  const Field& F = L.field();
  auto c = detail::clear_denominators(L, x);
  std::size_t k = 0;
  while (k < 3 && c[k].is_zero()) ++k;
  if (k == 3) throw DomainError("all coordinates are zero");
  const QuadElem pivot_conj = conjugate(L, c[k]);
  for (auto& z : c) z = mul(L, z, pivot_conj);
  Poly g;
  for (const auto& z : c) g = gcd(F, gcd(F, g, z.a), z.b);
  const Elem li = F.inv(quo(F, c[k].a, g).lead());
  bool rational = true;
  std::array<QuadElem, 3> out;
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] = {scale(F, quo(F, c[i].a, g), li), scale(F, quo(F, c[i].b, g), li), Poly::one()};
    rational = rational && out[i].b.is_zero();
  }
  if (rational) throw DomainError("point is defined over F_q(t): degree 1, not 2");
  return {out, orbit_key(L, out)};
}

/// Exponent m with H_2(x) = q^{m/2}: m = sum_w deg(w) * (-min_i w(x_i)).
inline long height_degree2(const QuadExt& L, std::span<const QuadElem> x) {
  const DegreeTwoPoint P = make_degree2_point(L, x);
  const Field& F = L.field();
  auto contribution = [&](const std::vector<PlaceQ>& places) {
    long total = 0;
    for (const auto& w : places) {
      long m = std::numeric_limits<long>::max();
      for (const auto& z : P.coords)
        if (!z.is_zero()) m = std::min(m, valuation(L, z, w));
      total -= m * static_cast<long>(w.degree());
    }
    return total;
  };
  long total = contribution(places_above_infinity(L));
  // integral coordinates: only places dividing every nonzero norm can contribute
  Poly g;
  for (const auto& z : P.coords)
    if (!z.is_zero()) g = gcd(F, g, detail::norm_poly(L, z));
  if (g.degree() >= 1)
    for (const auto& fa : factor(F, g).factors) total += contribution(places_above(L, fa.prime));
  check_invariant(total >= 0, "negative height exponent");
  return total;
}

inline long height_degree2(const QuadExt& L, const DegreeTwoPoint& P) { return height_degree2(L, P.coords); }

/// 2 S(3,1)^2 q^{3M} M.
inline Rational kt_main_term(std::uint64_t q, unsigned M) {
  const Rational S = schanuel_constant(2, q);
  return 2 * S * S * Rational(ipow(BigInt(q), 3 * M)) * M;
}

/// Search limits for degree-2 enumeration: degree of the squarefree part D of the
/// discriminant, and degree of the rational line through x and its conjugate.
struct Degree2Bound {
  unsigned disc_degree = 0;
  unsigned line_degree = 0;
};

struct Degree2Options {
  std::optional<Degree2Bound> bound;  // default {2M, M}
  unsigned verify_every = 0;          // rebuild every k-th orbit in L and recheck height and key; 0 disables
  unsigned jobs = 1;
};

struct Degree2Count {
  std::uint64_t q = 0;
  unsigned M = 0;
  BigInt count;  // Galois orbits {x, conj(x)} with H_2(x)^2 = q^M
  bool stable = false;
  Degree2Bound bound;
  std::uint64_t verified = 0;
  Rational main_term;
  Rational ratio() const { return Rational(count) / main_term; }
};

/// Work estimate sum_d A(d) q^{3(M-d)+3} must stay within this many forms.
inline constexpr std::uint64_t kDegree2Guard = 200'000'000;

namespace detail {

// A basis u, v of {x in F_q[t]^3 : y . x = 0} with deg u + deg v = deg y.
struct LineBasis {
  std::array<Poly, 3> u, v;
  unsigned du = 0, dv = 0;
};

inline unsigned vec_degree(const std::array<Poly, 3>& x) {
  int d = kDegreeOfZero;
  for (const auto& c : x) d = std::max(d, c.degree());
  return static_cast<unsigned>(d);
}

inline LineBasis line_basis(const Field& F, const std::vector<Poly>& y) {
  std::array<Poly, 3> u, v;
  if (y[0].is_zero() && y[1].is_zero()) {
    u = {Poly::one(), Poly(), Poly()};
    v = {Poly(), Poly::one(), Poly()};
  } else {
    const auto x = xgcd(F, y[0], y[1]);
    u = {quo(F, y[1], x.g), neg(F, quo(F, y[0], x.g)), Poly()};
    v = {mul(F, x.s, y[2]), mul(F, x.t, y[2]), neg(F, x.g)};
  }
  // Popov reduction: make the leading coefficient vectors independent
  for (;;) {
    if (vec_degree(u) > vec_degree(v)) std::swap(u, v);
    const unsigned du = vec_degree(u), dv = vec_degree(v);
    std::array<Elem, 3> lu{}, lv{};
    for (int i = 0; i < 3; ++i) {
      lu[i] = u[i][du];
      lv[i] = v[i][dv];
    }
    std::optional<Elem> ratio;
    bool dependent = true;
    for (int i = 0; i < 3 && dependent; ++i) {
      if (lu[i] == 0 && lv[i] == 0) continue;
      if (lu[i] == 0 || lv[i] == 0) {
        dependent = false;
        break;
      }
      const Elem r = F.div(lv[i], lu[i]);
      if (ratio && *ratio != r) dependent = false;
      ratio = r;
    }
    if (!dependent) return {u, v, du, dv};
    for (int i = 0; i < 3; ++i) v[i] = sub(F, v[i], shift(scale(F, u[i], *ratio), dv - du));
  }
}

inline std::vector<Poly> polys_up_to(const Field& F, int max_deg, bool monic_nonzero) {
  std::vector<Poly> out;
  if (max_deg < 0) {
    if (!monic_nonzero) out.emplace_back();
    return out;
  }
  const std::uint64_t q = F.order();
  if (!monic_nonzero) {
    const std::uint64_t count = checked_power(q, static_cast<unsigned>(max_deg + 1), kDegree2Guard);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<Elem> c(static_cast<std::size_t>(max_deg + 1));
      std::uint64_t r = idx;
      for (auto& x : c) {
        x = static_cast<Elem>(r % q);
        r /= q;
      }
      out.emplace_back(std::move(c));
    }
    return out;
  }
  for (int d = 0; d <= max_deg; ++d) {
    const std::uint64_t count = checked_power(q, static_cast<unsigned>(d), kDegree2Guard);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<Elem> c(static_cast<std::size_t>(d + 1));
      c[d] = 1;
      std::uint64_t r = idx;
      for (int i = 0; i < d; ++i) {
        c[i] = static_cast<Elem>(r % q);
        r /= q;
      }
      out.emplace_back(std::move(c));
    }
  }
  return out;
}

// disc = (s f)^2 D with D monic squarefree or the least nonsquare times one.
struct DiscSplit {
  Poly f;
  Poly D;
};

inline DiscSplit split_discriminant(const Field& F, const Poly& disc) {
  const SquarefreeSplit s = squarefree_split(F, disc);
  Elem unit = s.unit;
  Poly D = s.core;
  if (!F.is_square(unit)) {
    D = scale(F, D, F.nonsquare());
    unit = F.div(unit, F.nonsquare());
  }
  return {scale(F, s.square, *F.sqrt(unit)), D};
}

struct LineTally {
  std::uint64_t count = 0;
  std::uint64_t verified = 0;
};

// Counts primitive irreducible forms c U^2 - b U V + a V^2 (a monic) on the line
// with exponent max(deg c + 2 du, deg b + du + dv, deg a + 2 dv) = M.
inline LineTally count_on_line(const Field& F, const std::vector<Poly>& y, unsigned M, const Degree2Bound& bound,
                               unsigned verify_every, std::uint64_t& verify_clock) {
  LineTally tally;
  const LineBasis lb = line_basis(F, y);
  const unsigned d = lb.du + lb.dv;
  int line_height = kDegreeOfZero;
  for (const auto& c : y) line_height = std::max(line_height, c.degree());
  check_invariant(static_cast<int>(d) == line_height, "reduced line basis degrees do not add up to the line height");
  if (d > M || d > bound.line_degree) return tally;
  const int max_a = static_cast<int>(M) - 2 * static_cast<int>(lb.dv);
  const int max_b = static_cast<int>(M) - static_cast<int>(d);
  const int max_c = static_cast<int>(M) - 2 * static_cast<int>(lb.du);
  if (max_a < 0 || max_c < 0) return tally;
  const auto as = polys_up_to(F, max_a, true);
  const auto bs = polys_up_to(F, max_b, false);
  const auto cs = polys_up_to(F, max_c, false);
  const Elem four = F.from_int(4);
  for (const Poly& a : as)
    for (const Poly& b : bs) {
      const Poly gab = gcd(F, a, b);
      for (const Poly& c : cs) {
        if (c.is_zero()) continue;
        const bool top = a.degree() == max_a || (!b.is_zero() && b.degree() == max_b) || c.degree() == max_c;
        if (!top) continue;
        if (!gab.is_one() && !gcd(F, gab, c).is_one()) continue;
        const Poly disc = sub(F, mul(F, b, b), scale(F, mul(F, a, c), four));
        if (sqrt_poly(F, disc).has_value()) continue;  // reducible over F_q(t)
        if (disc.degree() > static_cast<int>(bound.disc_degree) &&
            split_discriminant(F, disc).D.degree() > static_cast<int>(bound.disc_degree))
          continue;
        ++tally.count;
        if (verify_every && verify_clock++ % verify_every == 0) {
          const DiscSplit ds = split_discriminant(F, disc);
          const QuadExt L(F, ds.D);
          const QuadElem alpha = QuadElem::make(F, neg(F, b), ds.f);
          const QuadElem beta = QuadElem::make(F, scale(F, a, F.from_int(2)), Poly());
          std::array<QuadElem, 3> x;
          for (int i = 0; i < 3; ++i)
            x[i] = add(L, mul(L, alpha, QuadElem::make(F, lb.u[i], Poly())),
                       mul(L, beta, QuadElem::make(F, lb.v[i], Poly())));
          check_invariant(height_degree2(L, x) == static_cast<long>(M), "valuation height disagrees with form height");
          // the key is the primitive form c U^2 - b U V + a V^2 expanded in y
          const ProjPoint key = orbit_key(L, x);
          std::vector<Poly> form(6);
          const auto& u = lb.u;
          const auto& v = lb.v;
          const Poly mb = neg(F, b);
          auto quad = [&](int i, int j) {
            // coefficient of y_i y_j (i < j) or y_i^2 (i == j)
            const Poly uu = i == j ? mul(F, u[i], u[i]) : add(F, mul(F, u[i], u[j]), mul(F, u[j], u[i]));
            const Poly vv = i == j ? mul(F, v[i], v[i]) : add(F, mul(F, v[i], v[j]), mul(F, v[j], v[i]));
            const Poly uv = i == j ? mul(F, u[i], v[i]) : add(F, mul(F, u[i], v[j]), mul(F, u[j], v[i]));
            return add(F, add(F, mul(F, c, uu), mul(F, mb, uv)), mul(F, a, vv));
          };
          form = {quad(0, 0), quad(1, 1), quad(2, 2), quad(0, 1), quad(0, 2), quad(1, 2)};
          check_invariant(canonicalize(F, form) == key, "orbit key disagrees with the line form");
          check_invariant(static_cast<long>(key.height_exponent()) == static_cast<long>(M),
                          "orbit key height disagrees");
          ++tally.verified;
        }
      }
    }
  return tally;
}

inline std::pair<BigInt, std::uint64_t> count_degree2(const Field& F, unsigned M, const Degree2Bound& bound,
                                                      unsigned verify_every, unsigned jobs) {
  // every line through an orbit of exponent M has height <= M
  const unsigned max_line = std::min(M, bound.line_degree);
  std::vector<std::vector<Poly>> lines;
  for (unsigned N = 0; N <= max_line; ++N)
    enumerate_exact_height(F, 2, N, [&](const ProjPoint& p) { lines.push_back(p.coords()); });
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    std::uint64_t count = 0, verified = 0, clock = 0;
    for (std::size_t i = next++; i < lines.size(); i = next++) {
      const auto t = count_on_line(F, lines[i], M, bound, verify_every, clock);
      count += t.count;
      verified += t.verified;
    }
    return std::pair{count, verified};
  };
  std::vector<std::future<std::pair<std::uint64_t, std::uint64_t>>> futures;
  for (unsigned j = 1; j < std::max(1u, jobs); ++j) futures.push_back(std::async(std::launch::async, worker));
  auto [count, verified] = worker();
  for (auto& f : futures) {
    const auto r = f.get();
    count += r.first;
    verified += r.second;
  }
  return {BigInt(count), verified};
}

}  // namespace detail

/// Estimated number of binary forms scanned for exponent M.
inline BigInt degree2_work(std::uint64_t q, unsigned M) {
  BigInt total(0);
  for (unsigned d = 0; d <= M; ++d) total += count_exact_height_formula(2, q, d) * ipow(BigInt(q), 3 * (M - d) + 3);
  return total;
}

/// Galois orbits of degree-2 points x of P^2 over F_q(t) with H_2(x)^2 = q^M.
///
/// Each orbit spans a rational line; on a reduced basis of that line the orbit is
/// an irreducible primitive binary quadratic form. The stability flag compares the
/// count with the one obtained after growing both bound components by 2.
inline Degree2Count enumerate_degree2(const Field& F, unsigned M, Degree2Options opts = {}) {
  if (!F.is_odd()) throw UnsupportedError("degree-2 enumeration requires odd q");
  if (M < 1) throw DomainError("enumerate_degree2 requires M >= 1");
  if (degree2_work(F.order(), M) > kDegree2Guard)
    throw SizeError("degree-2 enumeration guard exceeded for q=" + std::to_string(F.order()) +
                    " M=" + std::to_string(M));
  const Degree2Bound bound = opts.bound.value_or(Degree2Bound{2 * M, M});
  Degree2Count out;
  out.q = F.order();
  out.M = M;
  out.bound = bound;
  auto [count, verified] = detail::count_degree2(F, M, bound, opts.verify_every, opts.jobs);
  const Degree2Bound grown{bound.disc_degree + 2, bound.line_degree + 2};
  auto [count2, verified2] = detail::count_degree2(F, M, grown, 0, opts.jobs);
  out.count = count;
  out.verified = verified;
  out.stable = count == count2;
  out.main_term = kt_main_term(F.order(), M);
  return out;
}

/// Main terms of the two parts of Hilb^2 P^2 at exponent M and the exact reducible count.
struct Hilb2Split {
  Rational irreducible_main;  // S^2 q^{3M} M
  Rational reducible_main;    // (S^2 / 2) q^{3M} M
  Rational reducible_exact;   // halved pair count
  Rational total_main;        // (3/2) S^2 q^{3M} M
};

inline Hilb2Split hilb2_split_counts(const Field& F, unsigned M) {
  const Rational S = schanuel_constant(2, F.order());
  const Rational base = S * S * Rational(ipow(BigInt(F.order()), 3 * M)) * M;
  Hilb2Split out;
  out.irreducible_main = base;
  out.reducible_main = base / 2;
  out.reducible_exact = count_reducible_pairs(F, M).observed;
  out.total_main = out.irreducible_main + out.reducible_main;
  return out;
}

}  // namespace acl
