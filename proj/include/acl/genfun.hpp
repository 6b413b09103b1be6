#pragma once

#include "acl/errors.hpp"
#include "acl/fq_arith.hpp"
#include "acl/numeric.hpp"
#include "acl/series.hpp"

#include <vector>

namespace acl {

/// Series limits: coefficient sizes grow like q^{2m}.
inline constexpr unsigned kMaxSeriesOrder = 64;
inline constexpr std::uint64_t kMaxSeriesQ = 16;

namespace detail {

inline void check_series_guard(std::uint64_t q, unsigned order) {
  if (order > kMaxSeriesOrder) throw SizeError("series order exceeds " + std::to_string(kMaxSeriesOrder));
  if (q > kMaxSeriesQ) throw SizeError("series q exceeds " + std::to_string(kMaxSeriesQ));
}

inline BigInt integral_coefficient(const Rational& c, const char* what) {
  check_invariant(is_integer(c), what);
  return boost::multiprecision::numerator(c);
}

// The same series evaluated for any integer q (the coefficients are polynomials in q).
inline TruncSeries hilb_series_unchecked(std::uint64_t q, unsigned N) {
  TruncSeries s(N);
  for (unsigned k = 1; k <= N; ++k) {
    const BigInt qk = ipow(BigInt(q), k);
    const BigInt points = 1 + qk + qk * qk;  // |P^2(F_{q^k})|
    BigInt pw(1);
    for (unsigned j = 0; k * (j + 1) <= N; ++j, pw *= qk) s[k * (j + 1)] += Rational(points * pw, BigInt(k));
  }
  return exp(s);
}

}  // namespace detail

/// Z(P^2, t) = 1 / ((1 - t)(1 - q t)(1 - q^2 t)) through t^N.
inline TruncSeries zeta_p2_series(std::uint64_t q, unsigned N) {
  detail::check_series_guard(q, N);
  const Rational qq(q);
  return TruncSeries::geometric(N, 1) * TruncSeries::geometric(N, qq) * TruncSeries::geometric(N, qq * qq);
}

/// |Sym^m P^2(F_q)| for m = 0..m_max.
inline std::vector<BigInt> sym_counts(std::uint64_t q, unsigned m_max) {
  const TruncSeries z = zeta_p2_series(q, m_max);
  std::vector<BigInt> out;
  for (unsigned m = 0; m <= m_max; ++m) out.push_back(detail::integral_coefficient(z[m], "zeta coefficient is not an integer"));
  return out;
}

/// Closed form for the number of effective 0-cycles of degree m on P^2 over F_q.
inline BigInt chen7_closed(std::uint64_t q, unsigned m) {
  if (m < 1) throw DomainError("chen7_closed requires m >= 1");
  const Rational qq(q);
  const unsigned k = m / 2;
  Rational sum(0);
  for (unsigned i = 0; i < k; ++i)
    sum += Rational(i + 1) * (rpow(qq, 2 * static_cast<long>(m - i)) + rpow(qq, 2 * static_cast<long>(i) + 1));
  sum *= 1 + 1 / qq;
  if (m % 2 == 0)
    sum += Rational(m + 2, 2) * rpow(qq, m);
  else
    sum += Rational(m + 1, 2) * rpow(qq, static_cast<long>(m) - 1) * (qq * qq + qq + 1);
  return detail::integral_coefficient(sum, "closed 0-cycle count is not an integer");
}

/// |Hilb^m P^2(F_q)| for m = 0..m_max from exp(sum_k t^k/k |P^2(F_{q^k})| / (1 - q^k t^k)).
inline std::vector<BigInt> hilb_counts(std::uint64_t q, unsigned m_max) {
  detail::check_series_guard(q, m_max);
  const TruncSeries s = detail::hilb_series_unchecked(q, m_max);
  std::vector<BigInt> out;
  for (unsigned m = 0; m <= m_max; ++m)
    out.push_back(detail::integral_coefficient(s[m], "Hilbert scheme count is not an integer"));
  return out;
}

/// Integer coefficients h_0..h_{2m} with |Hilb^m P^2(F_q)| = sum_i h_i q^i, by
/// interpolation at q = 0..2m.
inline std::vector<BigInt> hilb_count_polynomial(unsigned m) {
  if (m > kMaxSeriesOrder / 2) throw SizeError("Hilbert polynomial index too large");
  const unsigned n = 2 * m + 1;
  std::vector<Rational> y(n);
  for (unsigned x = 0; x < n; ++x) y[x] = detail::hilb_series_unchecked(x, m)[m];
  // Newton divided differences, then expansion into the monomial basis
  std::vector<Rational> dd = y;
  for (unsigned j = 1; j < n; ++j)
    for (unsigned i = n - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / Rational(j);
  std::vector<Rational> poly(n, Rational(0));
  for (unsigned i = n; i-- > 0;) {
    // poly = poly * (x - i) + dd[i]
    std::vector<Rational> next(n, Rational(0));
    for (unsigned k = 0; k + 1 < n; ++k) next[k + 1] += poly[k];
    for (unsigned k = 0; k < n; ++k) next[k] -= poly[k] * i;
    next[0] += dd[i];
    poly = std::move(next);
  }
  std::vector<BigInt> out;
  for (const auto& c : poly) out.push_back(detail::integral_coefficient(c, "Hilbert polynomial coefficient is not an integer"));
  return out;
}

/// Number P_m of closed points of degree m on P^2 over F_q, m = 1..m_max (index 0 unused).
inline std::vector<BigInt> closed_point_counts(std::uint64_t q, unsigned m_max) {
  if (m_max < 1) throw DomainError("closed_point_counts requires m_max >= 1");
  std::vector<BigInt> out(m_max + 1, BigInt(0));
  for (unsigned m = 1; m <= m_max; ++m) {
    BigInt acc(0);
    for (unsigned d : divisors(m)) {
      const BigInt qe = ipow(BigInt(q), m / d);
      acc += mobius(d) * (qe * qe + qe + 1);
    }
    check_invariant(acc % m == 0, "Moebius sum not divisible by m");
    out[m] = acc / m;
  }
  return out;
}

struct Chen8Result {
  Rational value;  // the closed formula evaluated as written
  BigInt expected;  // Moebius count
  bool valid = false;
};

/// Closed formula for prime 0-cycles of degree m, compared with the Moebius count.
inline Chen8Result chen8_closed(std::uint64_t q, unsigned m) {
  if (m < 2) throw DomainError("chen8_closed requires m >= 2");
  const Rational qq(q);
  Rational v;
  if (m % 2 == 0) {
    v = (rpow(qq, 2 * m) - rpow(qq, m / 2)) / m;
  } else {
    const unsigned j = static_cast<unsigned>(smallest_prime_factor(m));
    v = (rpow(qq, 2 * m) + rpow(qq, m) - rpow(qq, 2 * m / j) - rpow(qq, m / j)) / m;
  }
  Chen8Result r;
  r.value = v;
  r.expected = closed_point_counts(q, m)[m];
  r.valid = v == Rational(r.expected);
  return r;
}

inline constexpr int kChen1ErrorBound = 4;

struct Chen1Result {
  Rational ratio;             // P_m / |Sym^m P^2(F_q)|
  Rational normalized_error;  // |m ratio - (1 - q^-1 - q^-2 + q^-3)| q^m
  bool within_bound() const { return normalized_error <= kChen1ErrorBound; }
};

inline Chen1Result chen1_ratio(std::uint64_t q, unsigned m) {
  if (m < 1) throw DomainError("chen1_ratio requires m >= 1");
  const Rational qq(q);
  const Rational main = 1 - 1 / qq - 1 / (qq * qq) + 1 / (qq * qq * qq);
  Chen1Result r;
  r.ratio = Rational(closed_point_counts(q, m)[m]) / Rational(sym_counts(q, m)[m]);
  r.normalized_error = abs(r.ratio * m - main) * rpow(qq, m);
  return r;
}

}  // namespace acl
