#pragma once

#include "acl/errors.hpp"
#include "acl/field.hpp"
#include "acl/numeric.hpp"

#include <compare>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace acl {

/// Degree reported for the zero polynomial; compares below every real degree.
inline constexpr int kDegreeOfZero = -1;

/// Dense polynomial over F_q, coefficients lowest degree first, no trailing zeros.
///
/// Ordering is lexicographic on the coefficient sequence (lowest degree first); for
/// polynomials of equal degree this is the order used for every emitted list.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Elem> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly constant(Elem c) { return Poly(std::vector<Elem>{c}); }
  static Poly monomial(Elem c, unsigned degree) {
    std::vector<Elem> v(degree + 1, 0);
    v[degree] = c;
    return Poly(std::move(v));
  }
  static Poly one() { return constant(1); }
  static Poly t() { return monomial(1, 1); }

  int degree() const { return c_.empty() ? kDegreeOfZero : static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  bool is_constant() const { return c_.size() <= 1; }
  Elem lead() const { return c_.empty() ? 0 : c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  Elem operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  const std::vector<Elem>& coeffs() const { return c_; }
  std::size_t size() const { return c_.size(); }

  friend bool operator==(const Poly&, const Poly&) = default;
  friend auto operator<=>(const Poly& a, const Poly& b) { return a.c_ <=> b.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Elem> c_;
};

inline Poly add(const Field& F, const Poly& a, const Poly& b) {
  std::vector<Elem> out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = F.add(a[i], b[i]);
  return Poly(std::move(out));
}

inline Poly neg(const Field& F, const Poly& a) {
  std::vector<Elem> out(a.coeffs());
  for (auto& c : out) c = F.neg(c);
  return Poly(std::move(out));
}

inline Poly sub(const Field& F, const Poly& a, const Poly& b) {
  std::vector<Elem> out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = F.sub(a[i], b[i]);
  return Poly(std::move(out));
}

inline Poly scale(const Field& F, const Poly& a, Elem c) {
  if (c == 0) return Poly();
  std::vector<Elem> out(a.coeffs());
  for (auto& x : out) x = F.mul(x, c);
  return Poly(std::move(out));
}

inline Poly mul(const Field& F, const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Elem> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = F.add(out[i + j], F.mul(a[i], b[j]));
  }
  return Poly(std::move(out));
}

/// Multiplication by t^k.
inline Poly shift(const Poly& a, unsigned k) {
  if (a.is_zero()) return a;
  std::vector<Elem> out(k, 0);
  out.insert(out.end(), a.coeffs().begin(), a.coeffs().end());
  return Poly(std::move(out));
}

/// a = quotient * b + remainder, deg remainder < deg b.
inline std::pair<Poly, Poly> divmod(const Field& F, const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly(), a};
  std::vector<Elem> r(a.coeffs());
  const std::size_t db = b.size() - 1;
  std::vector<Elem> quo(r.size() - db, 0);
  const Elem lead_inv = F.inv(b.lead());
  for (std::size_t top = r.size(); top-- > db;) {
    const Elem c = F.mul(r[top], lead_inv);
    if (c == 0) continue;
    const std::size_t s = top - db;
    quo[s] = c;
    for (std::size_t i = 0; i <= db; ++i) r[s + i] = F.sub(r[s + i], F.mul(c, b[i]));
  }
  r.resize(db);
  return {Poly(std::move(quo)), Poly(std::move(r))};
}

inline Poly mod(const Field& F, const Poly& a, const Poly& b) { return divmod(F, a, b).second; }
inline Poly quo(const Field& F, const Poly& a, const Poly& b) { return divmod(F, a, b).first; }

inline bool divides(const Field& F, const Poly& d, const Poly& a) { return mod(F, a, d).is_zero(); }

inline Poly make_monic(const Field& F, const Poly& a) {
  if (a.is_zero() || a.is_monic()) return a;
  return scale(F, a, F.inv(a.lead()));
}

/// Monic gcd; gcd(0, 0) = 0.
inline Poly gcd(const Field& F, Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(F, a);
}

struct Xgcd {
  Poly g, s, t;  // s*a + t*b = g, g monic
};

inline Xgcd xgcd(const Field& F, const Poly& a, const Poly& b) {
  Poly r0 = a, r1 = b, s0 = Poly::one(), s1, t0, t1 = Poly::one();
  while (!r1.is_zero()) {
    auto [qt, r2] = divmod(F, r0, r1);
    Poly s2 = sub(F, s0, mul(F, qt, s1));
    Poly t2 = sub(F, t0, mul(F, qt, t1));
    r0 = std::move(r1), r1 = std::move(r2);
    s0 = std::move(s1), s1 = std::move(s2);
    t0 = std::move(t1), t1 = std::move(t2);
  }
  if (r0.is_zero()) return {Poly(), Poly(), Poly()};
  const Elem li = F.inv(r0.lead());
  return {scale(F, r0, li), scale(F, s0, li), scale(F, t0, li)};
}

/// Inverse of a modulo m; a must be coprime to m.
inline Poly inverse_mod(const Field& F, const Poly& a, const Poly& m) {
  auto x = xgcd(F, mod(F, a, m), m);
  if (!x.g.is_one()) throw DomainError("polynomial is not invertible modulo m");
  return mod(F, x.s, m);
}

inline Poly pow(const Field& F, Poly base, unsigned e) {
  Poly out = Poly::one();
  while (e != 0) {
    if (e & 1u) out = mul(F, out, base);
    e >>= 1u;
    if (e != 0) base = mul(F, base, base);
  }
  return out;
}

inline Poly powmod(const Field& F, Poly base, BigInt e, const Poly& m) {
  Poly out = mod(F, Poly::one(), m);
  base = mod(F, base, m);
  while (e != 0) {
    if (boost::multiprecision::bit_test(e, 0)) out = mod(F, mul(F, out, base), m);
    e >>= 1;
    if (e != 0) base = mod(F, mul(F, base, base), m);
  }
  return out;
}

inline Poly derivative(const Field& F, const Poly& a) {
  if (a.size() <= 1) return Poly();
  std::vector<Elem> out(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = F.mul(F.from_int(static_cast<std::int64_t>(i)), a[i]);
  return Poly(std::move(out));
}

inline Elem eval(const Field& F, const Poly& a, Elem x) {
  Elem out = 0;
  for (std::size_t i = a.size(); i-- > 0;) out = F.add(F.mul(out, x), a[i]);
  return out;
}

/// Multiplicity of the irreducible p in a (a nonzero).
inline unsigned multiplicity(const Field& F, Poly a, const Poly& p) {
  if (a.is_zero()) throw DomainError("multiplicity in the zero polynomial is infinite");
  unsigned k = 0;
  for (;;) {
    auto [qt, r] = divmod(F, a, p);
    if (!r.is_zero()) return k;
    a = std::move(qt);
    ++k;
  }
}

/// Human-readable form, e.g. "t^2+2t+1".
inline std::string to_string(const Field& F, const Poly& a, const std::string& var = "t") {
  if (a.is_zero()) return "0";
  std::string out;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] == 0) continue;
    if (!out.empty()) out += '+';
    const std::string c = F.element_to_string(a[i]);
    const bool bracket = F.degree() > 1 && a[i] != 1;
    if (i == 0) {
      out += bracket ? "(" + c + ")" : c;
      continue;
    }
    if (a[i] != 1) out += bracket ? "(" + c + ")" : c;
    out += var;
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

/// Comma-separated element codes, lowest degree first; "0" for the zero polynomial.
inline std::string serialize(const Poly& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(a[i]);
  }
  return out;
}

inline Poly parse_poly(const Field& F, const std::string& text) {
  std::vector<Elem> c;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const long v = std::stol(tok);
    if (v < 0 || static_cast<std::uint64_t>(v) >= F.order()) throw DomainError("coefficient out of range: " + tok);
    c.push_back(static_cast<Elem>(v));
  }
  return Poly(std::move(c));
}

}  // namespace acl
