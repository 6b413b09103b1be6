#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace acl {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

/// Default working precision (decimal digits) for every high-precision real.
inline constexpr unsigned kDefaultDigits = 50;

/// Sets the mpfr default precision for the lifetime of the guard.
/// The default precision is process-global, so real-valued code is single-threaded.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits) : saved_(Real::default_precision()) {
    Real::default_precision(digits);
  }
  ~PrecisionGuard() { Real::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

inline BigInt ipow(const BigInt& base, unsigned long exp) {
  return boost::multiprecision::pow(base, static_cast<unsigned>(exp));
}

inline BigInt ipow(std::uint64_t base, unsigned long exp) { return ipow(BigInt(base), exp); }

/// base^exp for a possibly negative exponent, as an exact rational.
inline Rational rpow(const Rational& base, long exp) {
  Rational out(1);
  Rational b = exp >= 0 ? base : Rational(1) / base;
  unsigned long e = exp >= 0 ? static_cast<unsigned long>(exp) : static_cast<unsigned long>(-exp);
  while (e != 0) {
    if (e & 1u) out *= b;
    e >>= 1u;
    if (e != 0) b *= b;
  }
  return out;
}

inline BigInt factorial(unsigned n) {
  BigInt out(1);
  for (unsigned i = 2; i <= n; ++i) out *= i;
  return out;
}

inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return BigInt(0);
  BigInt out(1);
  for (unsigned i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

/// Möbius function by trial division.
inline int mobius(std::uint64_t n) {
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

inline std::uint64_t smallest_prime_factor(std::uint64_t n) {
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return p;
  return n;
}

inline bool is_prime(std::uint64_t n) { return n >= 2 && smallest_prime_factor(n) == n; }

/// True if n is a power of a single prime (n >= 2).
inline bool is_prime_power(std::uint64_t n) {
  if (n < 2) return false;
  const auto p = smallest_prime_factor(n);
  while (n % p == 0) n /= p;
  return n == 1;
}

/// Number of monic irreducible polynomials of degree d over F_q (necklace count).
inline BigInt necklace_count(std::uint64_t q, unsigned d) {
  BigInt sum(0);
  for (auto e : divisors(d)) {
    const int mu = mobius(e);
    if (mu != 0) sum += mu * ipow(q, d / e);
  }
  return sum / d;
}

inline std::string to_string(const BigInt& x) { return x.str(); }

/// "a/b", or "a" when the denominator is one.
inline std::string to_string(const Rational& x) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline std::string to_string(const Real& x, unsigned digits) {
  return x.str(static_cast<std::streamsize>(digits), std::ios_base::fmtflags(0));
}

inline Rational parse_rational(const std::string& text) { return Rational(text); }

inline bool is_integer(const Rational& x) { return boost::multiprecision::denominator(x) == 1; }

inline Real to_real(const Rational& x) {
  return Real(boost::multiprecision::numerator(x)) / Real(boost::multiprecision::denominator(x));
}

inline Real abs(const Real& x) { return boost::multiprecision::abs(x); }
inline Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

}  // namespace acl
