#pragma once

#include "acl/errors.hpp"
#include "acl/genfun.hpp"
#include "acl/global_field.hpp"
#include "acl/numeric.hpp"

#include <optional>
#include <vector>

namespace acl {

inline constexpr unsigned kMaxDegCut = 128;
/// Exact truncated products are limited to roughly this many bits of numerator.
inline constexpr double kExactEulerBits = 4e7;

/// Local density omega_v(x) = |Hilb^m P^2(F_{q_v})| / q_v^{2m} as a polynomial in x = q_v^{-1},
/// with convergence factor (1 - x)^2.
struct LocalDensityModel {
  unsigned m = 0;
  std::vector<Rational> omega;  // coefficients in x, lowest first

  static LocalDensityModel hilb(unsigned m) {
    if (m < 1) throw DomainError("Hilbert scheme index must be >= 1");
    LocalDensityModel model;
    model.m = m;
    const auto h = hilb_count_polynomial(m);
    for (std::size_t j = h.size(); j-- > 0;) model.omega.emplace_back(h[j]);
    return model;
  }

  /// (1 - x)^2 omega(x).
  std::vector<Rational> factor() const {
    std::vector<Rational> f(omega.size() + 2, Rational(0));
    for (std::size_t j = 0; j < omega.size(); ++j) {
      f[j] += omega[j];
      f[j + 1] -= 2 * omega[j];
      f[j + 2] += omega[j];
    }
    while (f.size() > 1 && f.back() == 0) f.pop_back();
    return f;
  }

  /// The factor is 1 + O(x^2) exactly when omega = 1 + 2x + O(x^2).
  bool converges() const {
    const auto f = factor();
    return f[0] == 1 && (f.size() < 2 || f[1] == 0);
  }
};

namespace detail {

template <class T>
T eval_poly(const std::vector<Rational>& c, const T& x) {
  T out(0);
  for (std::size_t i = c.size(); i-- > 0;) {
    if constexpr (std::is_same_v<T, Real>)
      out = out * x + to_real(c[i]);
    else
      out = out * x + c[i];
  }
  return out;
}

inline void check_deg_cut(unsigned deg_cut) {
  if (deg_cut < 1) throw DomainError("deg_cut must be >= 1");
  if (deg_cut > kMaxDegCut) throw SizeError("deg_cut exceeds " + std::to_string(kMaxDegCut));
}

// Bound on (number of places of degree d) * d / q^d for d >= 2.
inline Real place_count_constant(const GlobalFieldParams& K) { return Real(2 + 2 * K.genus); }

}  // namespace detail

/// Number of places of K of degree d for d = 1..deg_cut (index 0 unused), from the
/// L-polynomial: |C(F_{q^d})| = q^d + 1 - sum alpha_i^d and Moebius inversion.
inline std::vector<BigInt> place_counts(const GlobalFieldParams& K, unsigned deg_cut) {
  K.validate();
  detail::check_deg_cut(deg_cut);
  // power sums p_d = sum alpha_i^d from L(u) = prod (1 - alpha_i u) via Newton's identities
  const std::size_t n = K.lpoly.size() - 1;
  std::vector<BigInt> e(n + 1, BigInt(0));  // elementary symmetric functions
  for (std::size_t i = 0; i <= n; ++i) e[i] = (i % 2 == 0 ? 1 : -1) * K.lpoly[i];
  std::vector<BigInt> p(deg_cut + 1, BigInt(0));
  for (unsigned d = 1; d <= deg_cut; ++d) {
    BigInt acc(0);
    for (unsigned i = 1; i < d && i <= n; ++i) acc += (i % 2 == 1 ? 1 : -1) * e[i] * p[d - i];
    if (d <= n) acc += (d % 2 == 1 ? 1 : -1) * BigInt(d) * e[d];
    p[d] = acc;
  }
  std::vector<BigInt> N(deg_cut + 1, BigInt(0));
  for (unsigned d = 1; d <= deg_cut; ++d) N[d] = ipow(BigInt(K.q), d) + 1 - p[d];
  std::vector<BigInt> B(deg_cut + 1, BigInt(0));
  for (unsigned d = 1; d <= deg_cut; ++d) {
    BigInt acc(0);
    for (auto k : divisors(d)) acc += mobius(d / k) * N[k];
    if (acc < 0 || acc % d != 0) throw DomainError("L-polynomial does not give integral place counts");
    B[d] = acc / d;
  }
  return B;
}

struct TruncatedEuler {
  Real value;
  Real residual_bound;  // |full product - value|
  unsigned deg_cut = 0;
};

/// Truncated Euler product of zeta_K(s) over places of degree <= deg_cut, with tail bound.
inline TruncatedEuler zeta_euler_truncated(long s, const GlobalFieldParams& K, unsigned deg_cut,
                                           unsigned digits = kDefaultDigits) {
  if (s < 2) throw DomainError("zeta Euler product requires s >= 2");
  const auto B = place_counts(K, deg_cut);
  PrecisionGuard guard(digits + 10);
  const Real qq(K.q);
  Real log_sum(0);
  for (unsigned d = 1; d <= deg_cut; ++d) log_sum -= Real(B[d]) * log1p(-pow(qq, -Real(d) * s));
  TruncatedEuler out;
  out.value = exp(log_sum);
  out.deg_cut = deg_cut;
  const Real D1(deg_cut + 1);
  const Real x0 = pow(qq, -D1 * s);
  const Real tail = detail::place_count_constant(K) / D1 * pow(qq, D1 * (1 - s)) /
                    ((1 - pow(qq, Real(1 - s))) * (1 - x0));
  out.residual_bound = out.value * expm1(tail);
  return out;
}

struct EulerProduct {
  Real value;
  Real residual_bound;
  std::optional<Rational> closed_form;  // the full product when known exactly
  unsigned deg_cut = 0;
};

/// prod over places v of degree <= deg_cut of (1 - q_v^{-1})^2 omega_v, plus a rigorous tail
/// bound from the factor being 1 + O(q_v^{-2}).
inline EulerProduct euler_product_density(const GlobalFieldParams& K, const LocalDensityModel& model,
                                          unsigned deg_cut, unsigned digits = kDefaultDigits) {
  if (!model.converges()) throw DomainError("local density is not 1 + 2x + O(x^2)");
  const auto B = place_counts(K, deg_cut);
  const auto f = model.factor();
  PrecisionGuard guard(digits + 10);
  const Real qq(K.q);
  Real log_sum(0);
  for (unsigned d = 1; d <= deg_cut; ++d) {
    const Real x = pow(qq, -Real(d));
    log_sum += Real(B[d]) * log(detail::eval_poly(f, x));
  }
  EulerProduct out;
  out.value = exp(log_sum);
  out.deg_cut = deg_cut;
  // |f(x) - 1| <= C x^2 for x <= x0, |log(1 + y)| <= |y| / (1 - |y|), places of degree d <= c q^d / d
  const Real x0 = pow(qq, -Real(deg_cut + 1));
  Real C(0);
  for (std::size_t k = 2; k < f.size(); ++k) C += abs(to_real(f[k])) * pow(x0, Real(k - 2));
  const Real y0 = C * x0 * x0;
  check_invariant(y0 < 1, "Euler tail estimate out of range");
  const Real tail =
      detail::place_count_constant(K) * C / (1 - y0) / Real(deg_cut + 1) * x0 / (1 - 1 / qq);
  out.residual_bound = out.value * expm1(tail);
  if (model.m == 2) out.closed_form = 1 / (zeta_global(3, K) * zeta_global(3, K));
  return out;
}

namespace detail {

inline void check_exact_size(const std::vector<BigInt>& B, std::uint64_t q, std::size_t factor_degree) {
  double bits = 0;
  for (std::size_t d = 1; d < B.size(); ++d)
    bits += B[d].convert_to<double>() * static_cast<double>(d * factor_degree) * std::log2(static_cast<double>(q));
  if (bits > kExactEulerBits) throw SizeError("exact Euler product too large; lower deg_cut");
}

inline Rational truncated_product(const GlobalFieldParams& K, const std::vector<Rational>& f, unsigned deg_cut) {
  const auto B = place_counts(K, deg_cut);
  check_exact_size(B, K.q, f.size());
  Rational out(1);
  for (unsigned d = 1; d <= deg_cut; ++d) {
    const Rational v = eval_poly(f, rpow(Rational(K.q), -static_cast<long>(d)));
    const unsigned k = B[d].convert_to<unsigned>();
    out *= Rational(ipow(boost::multiprecision::numerator(v), k), ipow(boost::multiprecision::denominator(v), k));
  }
  return out;
}

}  // namespace detail

/// The same truncated product computed exactly.
inline Rational euler_product_exact(const GlobalFieldParams& K, const LocalDensityModel& model, unsigned deg_cut) {
  return detail::truncated_product(K, model.factor(), deg_cut);
}

/// Truncation of prod_v (1 - q_v^{-3})^2 = zeta_K(3)^{-2}, computed exactly.
inline Rational zeta3_inverse_square_exact(const GlobalFieldParams& K, unsigned deg_cut) {
  return detail::truncated_product(K, {Rational(1), Rational(0), Rational(0), Rational(-2), Rational(0),
                                       Rational(0), Rational(1)},
                                   deg_cut);
}

/// Effective-cone slope for Hilb^m P^2 where it follows from the built-in rules:
/// m = 2 gives 1, m = binom(r + 2, 2) gives r.
inline std::optional<Rational> mu_table(unsigned m) {
  if (m == 2) return Rational(1);
  for (unsigned r = 1; (r + 2) * (r + 1) / 2 <= m; ++r)
    if ((r + 2) * (r + 1) / 2 == m) return Rational(r);
  return std::nullopt;
}

inline Rational alpha_star_hilbm(const Rational& mu) {
  if (mu <= 0) throw DomainError("mu must be positive");
  return mu / 9;
}

/// value = exact_prefactor * (transcendental part); residual_bound covers Euler-product truncation.
struct PeyreResult {
  Real value;
  Real residual_bound;
  Rational exact_prefactor;
};

/// S_K(n+1, 1) / ((n + 1) log q).
inline PeyreResult peyre_constant_pn(unsigned n, const GlobalFieldParams& K, unsigned digits = kDefaultDigits) {
  PeyreResult r;
  r.exact_prefactor = schanuel_constant(n, K) / (n + 1);
  PrecisionGuard guard(digits + 10);
  r.value = to_real(r.exact_prefactor) / log(Real(K.q));
  r.residual_bound = 0;
  return r;
}

/// S_K(3, 1)^2 / (9 log^2 q).
inline PeyreResult peyre_constant_hilb2(const GlobalFieldParams& K, unsigned digits = kDefaultDigits) {
  PeyreResult r;
  const Rational S = schanuel_constant(2, K);
  r.exact_prefactor = S * S / 9;
  PrecisionGuard guard(digits + 10);
  const Real lq = log(Real(K.q));
  r.value = to_real(r.exact_prefactor) / (lq * lq);
  r.residual_bound = 0;
  return r;
}

/// mu J^2 / (9 (q-1)^2 q^{2(m+1)(g-1)} log^2 q) times the Euler product of local densities.
inline PeyreResult peyre_constant_hilbm(unsigned m, const Rational& mu, const GlobalFieldParams& K, unsigned deg_cut,
                                        unsigned digits = kDefaultDigits) {
  if (m < 2) throw DomainError("peyre_constant_hilbm requires m >= 2");
  if (mu <= 0) throw DomainError("mu must be positive");
  K.validate();
  const Rational qq(K.q);
  const long e = 2 * static_cast<long>(m + 1) * (static_cast<long>(K.genus) - 1);
  PeyreResult r;
  r.exact_prefactor = mu * Rational(K.class_number * K.class_number) / (9 * (qq - 1) * (qq - 1) * rpow(qq, e));
  const EulerProduct ep = euler_product_density(K, LocalDensityModel::hilb(m), deg_cut, digits);
  PrecisionGuard guard(digits + 10);
  const Real lq = log(Real(K.q));
  const Real pre = to_real(r.exact_prefactor) / (lq * lq);
  r.value = pre * ep.value;
  r.residual_bound = pre * ep.residual_bound;
  return r;
}

/// Limit constant c_m of (prime 0-cycles) / (effective 0-cycles) * M^{m-2}.
inline PeyreResult cm_constant(unsigned m, const Rational& mu, const GlobalFieldParams& K, unsigned deg_cut,
                               unsigned digits = kDefaultDigits) {
  if (m < 2) throw DomainError("cm_constant requires m >= 2");
  K.validate();
  PeyreResult r;
  if (m == 2) {
    r.exact_prefactor = Rational(2, 3);
    PrecisionGuard guard(digits + 10);
    r.value = to_real(r.exact_prefactor);
    r.residual_bound = 0;
    return r;
  }
  if (!K.is_rational()) throw UnsupportedError("cm_constant for m >= 3 is only defined for genus 0");
  if (mu <= 0) throw DomainError("mu must be positive");
  const Rational z3 = zeta_global(3, K);
  const Rational S = schanuel_constant(2, K);
  r.exact_prefactor = mu * Rational(ipow(BigInt(3), m - 2)) * z3 * z3 * Rational(factorial(m) * factorial(m - 1)) /
                      rpow(S, static_cast<long>(m) - 2);
  const EulerProduct ep = euler_product_density(K, LocalDensityModel::hilb(m), deg_cut, digits);
  PrecisionGuard guard(digits + 10);
  const Real pre = to_real(r.exact_prefactor);
  r.value = pre * ep.value;
  r.residual_bound = pre * ep.residual_bound;
  return r;
}

}  // namespace acl
