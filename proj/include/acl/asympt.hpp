#pragma once

#include "acl/errors.hpp"
#include "acl/global_field.hpp"
#include "acl/numeric.hpp"

#include <optional>
#include <vector>

namespace acl {

namespace detail {

inline void check_technical_params(std::uint64_t q, long t, long j, long m) {
  if (q < 2) throw DomainError("q must be >= 2");
  if (!(t > 0 && j >= 1 && j < t && t < m)) throw DomainError("technical sum requires 1 <= j < t < m");
}

}  // namespace detail

/// sum_{i=0}^{M} q^{(t-j) i / t} i^{m-t}.
inline Real technical_sum(std::uint64_t q, long t, long j, long m, unsigned M, unsigned digits = kDefaultDigits) {
  detail::check_technical_params(q, t, j, m);
  PrecisionGuard guard(digits + 10);
  const Real a = pow(Real(q), Real(t - j) / Real(t));
  const unsigned k = static_cast<unsigned>(m - t);
  Real sum(0), ai(1);
  for (unsigned i = 0; i <= M; ++i, ai *= a) sum += ai * Real(ipow(BigInt(i), k));
  return sum;
}

struct TechnicalLemmaRow {
  unsigned M = 0;
  Real sum;
  Real main_term;           // (1/(c log q) + 1/2) q^{cM} M^{m-t}, c = (t-j)/t
  Real dev;                 // |sum/main - 1| M
  Real dev_exact_constant;  // the same with the constant a/(a-1), a = q^c
  Real dev_first_order;     // and with the first-order correction -(m-t) a/(a-1)^2 q^{cM} M^{m-t-1}
};

inline TechnicalLemmaRow technical_lemma_check(std::uint64_t q, long t, long j, long m, unsigned M,
                                               unsigned digits = kDefaultDigits) {
  if (M < 1) throw DomainError("technical_lemma_check requires M >= 1");
  TechnicalLemmaRow row;
  row.M = M;
  row.sum = technical_sum(q, t, j, m, M, digits);
  PrecisionGuard guard(digits + 10);
  const Real c = Real(t - j) / Real(t);
  const Real a = pow(Real(q), c);
  const Real L = c * log(Real(q));
  const unsigned k = static_cast<unsigned>(m - t);
  const Real scale = pow(a, Real(M)) * pow(Real(M), Real(k));
  row.main_term = (1 / L + Real(1) / 2) * scale;
  const Real exact = a / (a - 1) * scale;
  const Real first = exact - Real(k) * a / ((a - 1) * (a - 1)) * scale / Real(M);
  row.dev = abs(row.sum / row.main_term - 1) * M;
  row.dev_exact_constant = abs(row.sum / exact - 1) * M;
  row.dev_first_order = abs(row.sum / first - 1) * M;
  return row;
}

/// Growth allowed between consecutive doublings for the deviation to count as bounded.
inline constexpr double kDevGrowthTolerance = 1.5;

struct TechnicalLemmaSweep {
  std::vector<TechnicalLemmaRow> rows;
  Real bound;  // max dev over the sweep
  bool bounded = false;
};

inline TechnicalLemmaSweep technical_lemma_sweep(std::uint64_t q, long t, long j, long m,
                                                 const std::vector<unsigned>& Ms = {50, 100, 200, 400},
                                                 unsigned digits = kDefaultDigits) {
  if (Ms.empty()) throw DomainError("empty M sequence");
  TechnicalLemmaSweep out;
  for (unsigned M : Ms) out.rows.push_back(technical_lemma_check(q, t, j, m, M, digits));
  PrecisionGuard guard(digits + 10);
  out.bound = 0;
  out.bounded = true;
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    if (out.rows[i].dev > out.bound) out.bound = out.rows[i].dev;
    if (i > 0 && out.rows[i].dev > kDevGrowthTolerance * out.rows[i - 1].dev) out.bounded = false;
  }
  return out;
}

/// (1/k!) sum_{i=0}^{M} i (M-i)^k divided by M^{k+2}/(k+2)!.
inline Rational technical2_check(unsigned k, unsigned M) {
  if (k % 2 == 0) throw DomainError("technical2_check requires odd k");
  if (M < 1) throw DomainError("technical2_check requires M >= 1");
  BigInt s(0);
  for (unsigned i = 0; i <= M; ++i) s += BigInt(i) * ipow(BigInt(M - i), k);
  return Rational(s * factorial(k + 2), factorial(k) * ipow(BigInt(M), k + 2));
}

/// sum_{i=0}^{M} i^{rV-1} (M-i)^{rW-1} divided by M^{rV+rW-1} (rV-1)!(rW-1)!/(rV+rW-1)!.
inline Rational product_main_term_check(unsigned rV, unsigned rW, unsigned M) {
  if (!(rV >= rW && rW >= 1)) throw DomainError("product_main_term_check requires rV >= rW >= 1");
  if (M < 1) throw DomainError("product_main_term_check requires M >= 1");
  BigInt s(0);
  for (unsigned i = 0; i <= M; ++i) s += ipow(BigInt(i), rV - 1) * ipow(BigInt(M - i), rW - 1);
  const unsigned r = rV + rW;
  return Rational(s * factorial(r - 1), ipow(BigInt(M), r - 1) * factorial(rV - 1) * factorial(rW - 1));
}

/// c (log q)^r / (r-1)! q^M M^{r-1}.
inline Real manin_main_term(const Real& c, unsigned r, std::uint64_t q, unsigned M) {
  if (r < 1) throw DomainError("rank must be >= 1");
  if (c <= 0) throw DomainError("constant must be positive");
  const Real lq = log(Real(q));
  return c * pow(lq, Real(r)) / Real(factorial(r - 1)) * pow(Real(q), Real(M)) * pow(Real(M), Real(r - 1));
}

/// Exact form when c (log q)^r is rational. A height H with H^d anticanonical is supported on
/// multiples of d, so counting at H = q^M picks up d^r: d^r c_log / (r-1)! q^{dM} M^{r-1}.
inline Rational manin_main_term_rational(const Rational& c_log, unsigned r, std::uint64_t q, unsigned M,
                                         unsigned d = 1) {
  if (r < 1 || d < 1) throw DomainError("rank and height power must be >= 1");
  if (c_log <= 0) throw DomainError("constant must be positive");
  return Rational(ipow(BigInt(d), r)) * c_log / Rational(factorial(r - 1)) * Rational(ipow(BigInt(q), d * M)) *
         Rational(ipow(BigInt(M), r - 1));
}

/// coefficient / (log q)^log_power * q^M * M^M_power.
struct MainTerm {
  Rational coefficient;
  unsigned log_power = 0;
  unsigned M_power = 0;

  Real value(std::uint64_t q, unsigned M) const {
    return to_real(coefficient) / pow(log(Real(q)), Real(log_power)) * pow(Real(q), Real(M)) *
           pow(Real(M), Real(M_power));
  }
};

struct SymmMainTerms {
  unsigned m = 0;
  MainTerm reducible;                  // distinct rational points
  std::optional<MainTerm> irreducible;  // m = 2 only
  std::optional<MainTerm> diagonal;     // m >= 3, lower order
  std::optional<MainTerm> two_cycle;    // m >= 3, one conjugate pair, lower order
  MainTerm total;
};

/// Main-term bookkeeping for N_{Sym^m P^2}(M) over K.
inline SymmMainTerms symm_main_terms(const GlobalFieldParams& K, unsigned m) {
  if (m < 2) throw DomainError("symm_main_terms requires m >= 2");
  const Rational S = schanuel_constant(2, K);
  SymmMainTerms out;
  out.m = m;
  if (m == 2) {
    out.irreducible = MainTerm{S * S / 9, 0, 1};
    out.reducible = MainTerm{S * S / 18, 0, 1};
    out.total = MainTerm{out.irreducible->coefficient + out.reducible.coefficient, 0, 1};
    return out;
  }
  const Rational Sm = rpow(S, m);
  const Rational three_m = Rational(ipow(BigInt(3), m));
  out.reducible = MainTerm{Sm / (three_m * Rational(factorial(m) * factorial(m - 1))), 0, m - 1};
  out.diagonal = MainTerm{2 * rpow(S, m - 1) / (Rational(ipow(BigInt(3), m - 1)) * Rational(factorial(m) * factorial(m - 3))),
                          2, m - 3};
  out.two_cycle = MainTerm{4 * Sm / (three_m * Rational(factorial(m) * factorial(m - 3))), 2, m - 3};
  out.total = out.reducible;
  return out;
}

/// sum_{j=0}^{2k-1} binom(2k-1, j) (-1)^j.
inline BigInt binomial_cancellation(unsigned k) {
  if (k < 1) throw DomainError("binomial_cancellation requires k >= 1");
  BigInt s(0);
  for (unsigned j = 0; j <= 2 * k - 1; ++j) s += (j % 2 == 0 ? 1 : -1) * binomial(2 * k - 1, j);
  return s;
}

}  // namespace acl
