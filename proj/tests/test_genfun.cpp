#include "acl/genfun.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace acl;

namespace {

// Coefficient of t^m in 1/((1-t)(1-qt)(1-q^2 t)) by listing monomials x^a y^b z^c.
BigInt sym_by_monomials(std::uint64_t q, unsigned m) {
  BigInt s(0);
  for (unsigned b = 0; b <= m; ++b)
    for (unsigned c = 0; b + c <= m; ++c) s += ipow(BigInt(q), b + 2 * c);
  return s;
}

// Points of P^2 over F_{q^m} whose field of definition is exactly F_{q^m}, divided by m.
BigInt closed_points_by_frobenius(std::uint64_t q, unsigned m) {
  const Field F = Field::of_order(static_cast<std::uint64_t>(ipow(BigInt(q), m)));
  const std::uint64_t Q = F.order();
  auto defined_over = [&](Elem x, unsigned d) { return F.pow(x, static_cast<std::uint64_t>(ipow(BigInt(q), d))) == x; };
  std::uint64_t hits = 0;
  auto visit = [&](Elem x, Elem y, Elem z) {
    for (unsigned d = 1; d < m; ++d)
      if (m % d == 0 && defined_over(x, d) && defined_over(y, d) && defined_over(z, d)) return;
    ++hits;
  };
  for (Elem y = 0; y < Q; ++y)
    for (Elem z = 0; z < Q; ++z) visit(1, y, z);
  for (Elem z = 0; z < Q; ++z) visit(0, 1, z);
  visit(0, 0, 1);
  return BigInt(hits / m);
}

// F^e for F_0 = 1 and rational e, via n G_n = sum_k (e k - n + k) F_k G_{n-k}.
std::vector<Rational> series_power(const std::vector<Rational>& f, const Rational& e) {
  std::vector<Rational> g(f.size(), Rational(0));
  g[0] = 1;
  for (unsigned n = 1; n < f.size(); ++n) {
    Rational acc(0);
    for (unsigned k = 1; k <= n; ++k) acc += (e * k - n + k) * f[k] * g[n - k];
    g[n] = acc / n;
  }
  return g;
}

std::vector<Rational> series_mul(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  std::vector<Rational> c(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; i + j < a.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

std::vector<std::vector<unsigned>> partitions(unsigned n, unsigned max_part) {
  if (n == 0) return {{}};
  std::vector<std::vector<unsigned>> out;
  for (unsigned p = std::min(n, max_part); p >= 1; --p)
    for (auto rest : partitions(n - p, p)) {
      rest.insert(rest.begin(), p);
      out.push_back(rest);
    }
  return out;
}

// Points of the punctual Hilbert scheme of length n in A^2 over a field with Q elements.
BigInt punctual_count(const BigInt& Q, unsigned n) {
  BigInt s(0);
  for (const auto& lambda : partitions(n, n)) s += ipow(Q, n - static_cast<unsigned>(lambda.size()));
  return s;
}

// Hilbert scheme count from the stratification by support: each closed point x of degree d
// contributes sum_n |Hilb^n_0(F_{q^d})| t^{dn}.
BigInt hilb_by_strata(std::uint64_t q, unsigned m) {
  std::vector<BigInt> P(m + 1, BigInt(0));
  for (unsigned d = 1; d <= m; ++d) P[d] = closed_point_counts(q, d)[d];
  std::vector<Rational> total(m + 1, Rational(0));
  total[0] = 1;
  for (unsigned d = 1; d <= m; ++d) {
    std::vector<Rational> local(m + 1, Rational(0));
    for (unsigned n = 0; d * n <= m; ++n) local[d * n] = Rational(punctual_count(ipow(BigInt(q), d), n));
    total = series_mul(total, series_power(local, Rational(P[d])));
  }
  return boost::multiprecision::numerator(total[m]);
}

// Sym^m as multisets of closed points: prod_d (1 - t^d)^{-P_d}.
BigInt sym_by_multisets(std::uint64_t q, unsigned m) {
  std::vector<Rational> total(m + 1, Rational(0));
  total[0] = 1;
  for (unsigned d = 1; d <= m; ++d) {
    std::vector<Rational> f(m + 1, Rational(0));
    f[0] = 1;
    f[d] = -1;
    total = series_mul(total, series_power(f, -Rational(closed_point_counts(q, d)[d])));
  }
  return boost::multiprecision::numerator(total[m]);
}

TruncSeries random_series(std::mt19937& rng, unsigned order, bool zero_constant) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  TruncSeries s(order);
  for (unsigned n = zero_constant ? 1 : 0; n <= order; ++n) s[n] = Rational(num(rng), den(rng));
  if (!zero_constant && s[0] == 0) s[0] = 1;
  return s;
}

}  // namespace

TEST(Series, ExpLogRoundTrip) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const TruncSeries s = random_series(rng, 12, true);
    EXPECT_EQ(log(exp(s)), s);
  }
}

TEST(Series, InverseAndGeometric) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const TruncSeries s = random_series(rng, 10, false);
    EXPECT_EQ(s * inverse(s), TruncSeries::constant(10, 1));
  }
  TruncSeries one_minus(6);
  one_minus[0] = 1;
  one_minus[2] = -3;
  EXPECT_EQ(inverse(one_minus), TruncSeries::geometric(6, 3, 2));
}

TEST(Series, ExpOfLogOneMinusT) {
  // exp(sum t^k / k) = 1 / (1 - t)
  TruncSeries s(9);
  for (unsigned k = 1; k <= 9; ++k) s[k] = Rational(1, k);
  EXPECT_EQ(exp(s), TruncSeries::geometric(9, 1));
}

TEST(Series, Preconditions) {
  EXPECT_THROW(exp(TruncSeries::constant(3, 1)), DomainError);
  EXPECT_THROW(log(TruncSeries::constant(3, 2)), DomainError);
  EXPECT_THROW(inverse(TruncSeries(3)), DomainError);
  EXPECT_THROW(TruncSeries(3) + TruncSeries(4), DomainError);
  EXPECT_THROW(sym_counts(17, 3), SizeError);
  EXPECT_THROW(hilb_counts(2, 65), SizeError);
}

TEST(Genfun, SymCountExamples) {
  EXPECT_EQ(sym_counts(2, 3)[2], 35);
  EXPECT_EQ(sym_counts(2, 3)[3], 155);
  EXPECT_EQ(sym_counts(3, 1)[1], 13);
  EXPECT_EQ(sym_counts(3, 2)[2], 130);
}

TEST(Genfun, SymCountsMatchOracles) {
  for (std::uint64_t q : {2, 3, 4, 5, 7}) {
    const auto sym = sym_counts(q, 12);
    for (unsigned m = 0; m <= 12; ++m) EXPECT_EQ(sym[m], sym_by_monomials(q, m)) << q << " " << m;
    for (unsigned m = 1; m <= 8; ++m) EXPECT_EQ(sym[m], sym_by_multisets(q, m)) << q << " " << m;
  }
}

TEST(Genfun, Chen7Examples) {
  EXPECT_EQ(chen7_closed(2, 1), 7);
  EXPECT_EQ(chen7_closed(2, 2), 35);
  EXPECT_EQ(chen7_closed(2, 3), 155);
  EXPECT_THROW(chen7_closed(2, 0), DomainError);
}

TEST(Genfun, Chen7MatchesSymCounts) {
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const auto sym = sym_counts(q, 12);
    for (unsigned m = 1; m <= 12; ++m) EXPECT_EQ(chen7_closed(q, m), sym[m]) << q << " " << m;
  }
}

TEST(Genfun, HilbExamples) {
  const auto h = hilb_counts(2, 2);
  EXPECT_EQ(h[0], 1);
  EXPECT_EQ(h[1], 7);
  EXPECT_EQ(h[2], 49);
  // Sym^2 minus the diagonal plus the exceptional divisor
  EXPECT_EQ(sym_counts(2, 2)[2] - 7 + BigInt(3 * 7), h[2]);
  for (std::uint64_t q : {2, 3, 5}) EXPECT_EQ(hilb_counts(q, 1)[1], q * q + q + 1);
}

TEST(Genfun, HilbIntegralAndMatchesStrata) {
  for (std::uint64_t q : {2, 3, 4, 5, 7, 16}) {
    const auto h = hilb_counts(q, 12);
    ASSERT_EQ(h.size(), 13u);
    for (unsigned m = 1; m <= 6; ++m) EXPECT_EQ(h[m], hilb_by_strata(q, m)) << q << " " << m;
  }
}

TEST(Genfun, HilbPolynomial) {
  const auto h2 = hilb_count_polynomial(2);
  EXPECT_EQ(h2, (std::vector<BigInt>{1, 2, 3, 2, 1}));
  for (unsigned m = 1; m <= 8; ++m) {
    const auto coeffs = hilb_count_polynomial(m);
    ASSERT_EQ(coeffs.size(), 2 * m + 1);
    EXPECT_EQ(coeffs[2 * m], 1);
    EXPECT_EQ(coeffs[2 * m - 1], m == 1 ? 1 : 2);
    for (std::uint64_t q : {2, 3, 5, 9}) {
      BigInt v(0);
      for (unsigned i = coeffs.size(); i-- > 0;) v = v * q + coeffs[i];
      EXPECT_EQ(v, hilb_counts(q, m)[m]) << m << " " << q;
    }
  }
}

TEST(Genfun, ClosedPointExamples) {
  const auto P = closed_point_counts(2, 3);
  EXPECT_EQ(P[1], 7);
  EXPECT_EQ(P[2], 7);
  EXPECT_EQ(P[3], 22);
  EXPECT_THROW(closed_point_counts(2, 0), DomainError);
}

TEST(Genfun, ClosedPointsNewtonIdentity) {
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const auto P = closed_point_counts(q, 12);
    for (unsigned m = 1; m <= 12; ++m) {
      BigInt s(0);
      for (unsigned d = 1; d <= m; ++d)
        if (m % d == 0) s += P[d] * d;
      const BigInt qm = ipow(BigInt(q), m);
      EXPECT_EQ(s, qm * qm + qm + 1);
      EXPECT_GT(P[m], 0);
    }
  }
}

TEST(Genfun, ClosedPointsMatchFrobeniusOrbits) {
  const auto P2 = closed_point_counts(2, 4);
  for (unsigned m = 1; m <= 4; ++m) EXPECT_EQ(P2[m], closed_points_by_frobenius(2, m)) << m;
  const auto P3 = closed_point_counts(3, 2);
  for (unsigned m = 1; m <= 2; ++m) EXPECT_EQ(P3[m], closed_points_by_frobenius(3, m)) << m;
}

TEST(Genfun, Chen8Examples) {
  auto r = chen8_closed(2, 2);
  EXPECT_EQ(r.value, 7);
  EXPECT_TRUE(r.valid);
  r = chen8_closed(2, 4);
  EXPECT_EQ(r.value, 63);
  EXPECT_TRUE(r.valid);
  r = chen8_closed(2, 6);
  EXPECT_EQ(r.value, Rational(2044, 3));
  EXPECT_EQ(r.expected, 679);
  EXPECT_FALSE(r.valid);
  EXPECT_THROW(chen8_closed(2, 1), DomainError);
}

TEST(Genfun, Chen8ValidExactlyOnPrimePowers) {
  for (std::uint64_t q : {2, 3, 4, 5}) {
    for (unsigned m = 2; m <= 16; ++m) {
      const auto r = chen8_closed(q, m);
      EXPECT_EQ(r.valid, is_prime_power(m)) << q << " " << m;
    }
    for (unsigned m : {6u, 10u, 12u, 15u}) EXPECT_FALSE(chen8_closed(q, m).valid);
  }
}

TEST(Genfun, Chen1Examples) {
  auto r = chen1_ratio(2, 2);
  EXPECT_EQ(r.ratio, Rational(1, 5));
  EXPECT_EQ(r.normalized_error, Rational(1, 10));
  r = chen1_ratio(2, 3);
  EXPECT_EQ(r.ratio, Rational(22, 155));
  EXPECT_LT(r.normalized_error, Rational(41, 100));
  r = chen1_ratio(3, 2);
  EXPECT_EQ(r.ratio, Rational(39, 130));
}

TEST(Genfun, Chen1ErrorBounded) {
  for (std::uint64_t q : {2, 3, 5})
    for (unsigned m = 2; m <= 12; ++m) EXPECT_TRUE(chen1_ratio(q, m).within_bound()) << q << " " << m;
}
