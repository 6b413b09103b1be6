#pragma once

#include "acl/errors.hpp"
#include "acl/numeric.hpp"

#include <vector>

namespace acl {

/// Power series c_0 + c_1 t + ... + c_N t^N + O(t^{N+1}) with exact rational coefficients.
class TruncSeries {
 public:
  explicit TruncSeries(unsigned order) : c_(order + 1, Rational(0)) {}
  TruncSeries(unsigned order, std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    c_.resize(order + 1, Rational(0));
  }

  static TruncSeries constant(unsigned order, const Rational& c) {
    TruncSeries s(order);
    s.c_[0] = c;
    return s;
  }

  /// 1 / (1 - a t^k).
  static TruncSeries geometric(unsigned order, const Rational& a, unsigned k = 1) {
    if (k == 0) throw DomainError("geometric series step must be >= 1");
    TruncSeries s(order);
    Rational p(1);
    for (unsigned n = 0; n <= order; n += k, p *= a) s.c_[n] = p;
    return s;
  }

  unsigned order() const { return static_cast<unsigned>(c_.size() - 1); }
  const Rational& operator[](unsigned n) const { return c_.at(n); }
  Rational& operator[](unsigned n) { return c_.at(n); }
  const std::vector<Rational>& coeffs() const { return c_; }

  friend bool operator==(const TruncSeries&, const TruncSeries&) = default;

  friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
    check_same_order(a, b);
    TruncSeries s(a.order());
    for (unsigned n = 0; n <= a.order(); ++n) s.c_[n] = a.c_[n] + b.c_[n];
    return s;
  }
  friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
    check_same_order(a, b);
    TruncSeries s(a.order());
    for (unsigned n = 0; n <= a.order(); ++n) s.c_[n] = a.c_[n] - b.c_[n];
    return s;
  }
  friend TruncSeries operator*(const Rational& k, const TruncSeries& a) {
    TruncSeries s(a.order());
    for (unsigned n = 0; n <= a.order(); ++n) s.c_[n] = k * a.c_[n];
    return s;
  }
  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
    check_same_order(a, b);
    TruncSeries s(a.order());
    for (unsigned i = 0; i <= a.order(); ++i) {
      if (a.c_[i] == 0) continue;
      for (unsigned j = 0; i + j <= a.order(); ++j) s.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return s;
  }

  TruncSeries derivative() const {
    TruncSeries s(order());
    for (unsigned n = 1; n <= order(); ++n) s.c_[n - 1] = c_[n] * n;
    return s;
  }

  /// Antiderivative with zero constant term; the t^{N+1} term is dropped.
  TruncSeries integral() const {
    TruncSeries s(order());
    for (unsigned n = 1; n <= order(); ++n) s.c_[n] = c_[n - 1] / n;
    return s;
  }

 private:
  static void check_same_order(const TruncSeries& a, const TruncSeries& b) {
    if (a.order() != b.order()) throw DomainError("series orders differ");
  }
  std::vector<Rational> c_;
};

/// 1 / a; requires a_0 != 0.
inline TruncSeries inverse(const TruncSeries& a) {
  if (a[0] == 0) throw DomainError("series inverse requires a nonzero constant term");
  TruncSeries b(a.order());
  const Rational inv0 = 1 / a[0];
  b[0] = inv0;
  for (unsigned n = 1; n <= a.order(); ++n) {
    Rational acc(0);
    for (unsigned k = 1; k <= n; ++k) acc += a[k] * b[n - k];
    b[n] = -acc * inv0;
  }
  return b;
}

/// exp(a); requires a_0 = 0. Uses n b_n = sum_k k a_k b_{n-k}.
inline TruncSeries exp(const TruncSeries& a) {
  if (a[0] != 0) throw DomainError("series exp requires a zero constant term");
  TruncSeries b(a.order());
  b[0] = 1;
  for (unsigned n = 1; n <= a.order(); ++n) {
    Rational acc(0);
    for (unsigned k = 1; k <= n; ++k)
      if (a[k] != 0) acc += a[k] * k * b[n - k];
    b[n] = acc / n;
  }
  return b;
}

/// log(a); requires a_0 = 1.
inline TruncSeries log(const TruncSeries& a) {
  if (a[0] != 1) throw DomainError("series log requires constant term 1");
  return (a.derivative() * inverse(a)).integral();
}

}  // namespace acl
