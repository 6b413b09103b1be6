#pragma once

#include "acl/errors.hpp"
#include "acl/numeric.hpp"

#include <cstdint>
#include <vector>

namespace acl {

/// Arithmetic data of a global function field K with constant field F_q:
/// genus, number of degree-0 divisor classes J_K, and the L-polynomial L_K(u).
struct GlobalFieldParams {
  std::uint64_t q = 0;
  unsigned genus = 0;
  BigInt class_number = 1;
  std::vector<BigInt> lpoly{BigInt(1)};  // coefficients of L_K(u), lowest degree first

  /// The rational function field F_q(t): g = 0, J = 1, L = 1.
  static GlobalFieldParams rational(std::uint64_t q) {
    GlobalFieldParams p;
    p.q = q;
    return p;
  }

  bool is_rational() const { return genus == 0; }

  Rational lpoly_at(const Rational& u) const {
    Rational out(0);
    for (std::size_t i = lpoly.size(); i-- > 0;) out = out * u + Rational(lpoly[i]);
    return out;
  }

  /// L_K has degree 2g, L_K(0) = 1, L_K(1) = J_K and a_{2g-i} = q^{g-i} a_i.
  void validate() const {
    if (q < 2) throw DomainError("constant field order must be >= 2");
    if (lpoly.empty() || lpoly.front() != 1) throw DomainError("L-polynomial must have constant term 1");
    if (lpoly.size() != 2 * static_cast<std::size_t>(genus) + 1)
      throw DomainError("L-polynomial degree must equal twice the genus");
    if (class_number < 1) throw DomainError("class number must be positive");
    for (unsigned i = 0; i <= genus; ++i)
      if (lpoly[2 * genus - i] != ipow(BigInt(q), genus - i) * lpoly[i])
        throw DomainError("L-polynomial violates the functional equation");
    BigInt at_one(0);
    for (const auto& c : lpoly) at_one += c;
    if (at_one != class_number) throw DomainError("L-polynomial value at 1 disagrees with the class number");
  }
};

/// zeta_{F_q(t)}(s) = 1 / ((1 - q^{1-s})(1 - q^{-s})), exact for integer s > 1.
inline Rational zeta_fqt(long s, std::uint64_t q) {
  if (s <= 1) throw DomainError("zeta_{F_q(t)}(s) requires s > 1");
  const Rational qq(q);
  return Rational(1) / ((1 - rpow(qq, 1 - s)) * (1 - rpow(qq, -s)));
}

inline Real zeta_fqt(const Real& s, std::uint64_t q) {
  if (s <= 1) throw DomainError("zeta_{F_q(t)}(s) requires s > 1");
  const Real qq(q);
  return 1 / ((1 - pow(qq, 1 - s)) * (1 - pow(qq, -s)));
}

/// zeta_K(s) = L_K(q^{-s}) zeta_{F_q(t)}(s).
inline Rational zeta_global(long s, const GlobalFieldParams& K) {
  K.validate();
  return K.lpoly_at(rpow(Rational(K.q), -s)) * zeta_fqt(s, K.q);
}

/// Schanuel constant S_K(n+1, 1) = q^{(1-g)(n+1)} J_K / ((q - 1) zeta_K(n+1)).
inline Rational schanuel_constant(unsigned n, const GlobalFieldParams& K) {
  if (n < 1) throw DomainError("schanuel_constant requires n >= 1");
  K.validate();
  const long e = (1 - static_cast<long>(K.genus)) * static_cast<long>(n + 1);
  return rpow(Rational(K.q), e) * Rational(K.class_number) /
         (Rational(K.q - 1) * zeta_global(static_cast<long>(n) + 1, K));
}

inline Rational schanuel_constant(unsigned n, std::uint64_t q) {
  return schanuel_constant(n, GlobalFieldParams::rational(q));
}

}  // namespace acl
