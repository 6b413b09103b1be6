#pragma once

#include "acl/errors.hpp"
#include "acl/fq_arith.hpp"
#include "acl/global_field.hpp"
#include "acl/numeric.hpp"
#include "acl/poly.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <future>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace acl {

/// A point of P^n(F_q(t)) in canonical form: polynomial coordinates with gcd 1
/// whose first nonzero coordinate is monic. Height is q^{height_exponent()}.
class ProjPoint {
 public:
  const std::vector<Poly>& coords() const { return coords_; }
  unsigned dimension() const { return static_cast<unsigned>(coords_.size() - 1); }
  /// max_i deg x_i
  unsigned height_exponent() const {
    int m = 0;
    for (const auto& c : coords_) m = std::max(m, c.degree());
    return static_cast<unsigned>(m);
  }

  friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
  friend auto operator<=>(const ProjPoint& a, const ProjPoint& b) { return a.coords_ <=> b.coords_; }

 private:
  explicit ProjPoint(std::vector<Poly> coords) : coords_(std::move(coords)) {}
  friend ProjPoint canonicalize(const Field& F, std::vector<Poly> coords);
  std::vector<Poly> coords_;
};

/// Divides out the gcd of the coordinates and makes the first nonzero coordinate monic.
inline ProjPoint canonicalize(const Field& F, std::vector<Poly> coords) {
  if (coords.size() < 2) throw DomainError("a projective point needs at least two coordinates");
  Poly g;
  for (const auto& c : coords) g = gcd(F, g, c);
  if (g.is_zero()) throw DomainError("all coordinates are zero");
  Elem lead = 0;
  for (auto& c : coords) {
    if (!g.is_one()) c = quo(F, c, g);
    if (lead == 0 && !c.is_zero()) lead = c.lead();
  }
  if (lead != 1) {
    const Elem li = F.inv(lead);
    for (auto& c : coords) c = scale(F, c, li);
  }
  return ProjPoint(std::move(coords));
}

/// Exponent M with H(P) = q^M.
inline unsigned height_rational(const ProjPoint& P) { return P.height_exponent(); }

/// The height exponent computed as a sum over places: every finite place p with
/// deg p <= max coordinate degree contributes -deg(p) * min_i v_p(x_i), the infinite
/// place contributes max_i deg x_i. Coordinates need not be coprime.
inline long height_exponent_from_places(const Field& F, std::span<const Poly> coords) {
  int max_deg = kDegreeOfZero;
  for (const auto& c : coords) max_deg = std::max(max_deg, c.degree());
  if (max_deg == kDegreeOfZero) throw DomainError("all coordinates are zero");
  long total = max_deg;
  for (int d = 1; d <= max_deg; ++d) {
    for (const Poly& p : irreducibles_of_degree(F, static_cast<unsigned>(d))) {
      unsigned v = ~0u;
      for (const auto& c : coords)
        if (!c.is_zero()) v = std::min(v, multiplicity(F, c, p));
      total -= static_cast<long>(v) * d;
    }
  }
  return total;
}

/// "c0,c1,.../c0,.../..." with coefficient codes lowest degree first.
inline std::string serialize(const ProjPoint& P) {
  std::string out;
  for (std::size_t i = 0; i < P.coords().size(); ++i) {
    if (i) out += '/';
    out += serialize(P.coords()[i]);
  }
  return out;
}

/// Largest number of coordinate tuples an exact-height enumeration may scan.
inline constexpr std::uint64_t kEnumerationGuard = 1'000'000'000;

/// q^{(n+1)(M+1)} within kEnumerationGuard.
inline bool enumeration_feasible(std::uint64_t q, unsigned n, unsigned M) {
  return detail::checked_power(q, (n + 1) * (M + 1), kEnumerationGuard) <= kEnumerationGuard;
}

/// Exact count predicted for points of height exactly q^M: |P^n(F_q)| for M = 0,
/// S(n+1,1) q^{(n+1)M} for M >= 1.
inline BigInt count_exact_height_formula(unsigned n, std::uint64_t q, unsigned M) {
  if (M == 0) return count_points_pn(n, q, 1);
  const Rational v = schanuel_constant(n, q) * Rational(ipow(q, (n + 1) * M));
  check_invariant(is_integer(v), "Schanuel count is not an integer");
  return boost::multiprecision::numerator(v);
}

struct EnumerationOptions {
  unsigned jobs = 1;
};

namespace detail {

// Enumerates coprime tuples whose first coordinate of degree M (the pivot) has
// leading coefficient 1, earlier coordinates have degree < M and later ones <= M.
// This is a bijection with the F_q^*-orbits of coprime tuples of max degree M.
class ExactHeightScanner {
 public:
  ExactHeightScanner(const Field& F, unsigned n, unsigned M) : F_(F), n_(n), M_(M) {
    const std::uint64_t q = F.order();
    const std::uint64_t count = checked_power(q, M + 1, kEnumerationGuard);
    all_.reserve(count);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<Elem> c(M + 1);
      std::uint64_t r = idx;
      for (unsigned i = 0; i <= M; ++i) {
        c[i] = static_cast<Elem>(r % q);
        r /= q;
      }
      all_.emplace_back(std::move(c));
    }
    below_ = checked_power(q, M, kEnumerationGuard);  // indices < below_ have degree < M
  }

  std::uint64_t pivot_choices() const { return below_; }

  /// Counts (and optionally collects) the tuples with the given pivot index and
  /// pivot polynomial t^M + (lower part indexed by pivot_low).
  std::uint64_t scan(unsigned pivot, std::uint64_t pivot_low, std::vector<std::vector<Poly>>* sink) const {
    std::vector<unsigned> order{pivot};
    for (unsigned j = 0; j <= n_; ++j)
      if (j != pivot) order.push_back(j);
    std::vector<std::uint64_t> choices(n_ + 1);
    for (unsigned j = 0; j <= n_; ++j) choices[j] = j < pivot ? below_ : all_.size();
    std::vector<std::uint64_t> suffix(n_ + 2, 1);
    for (std::size_t k = n_ + 1; k-- > 1;) suffix[k] = suffix[k + 1] * choices[order[k]];
    std::vector<Poly> tuple(n_ + 1);
    tuple[pivot] = all_[below_ + pivot_low];
    std::uint64_t count = 0;
    recurse(1, tuple[pivot], order, choices, suffix, tuple, count, sink);
    return count;
  }

 private:
  void recurse(std::size_t k, const Poly& g, const std::vector<unsigned>& order,
               const std::vector<std::uint64_t>& choices, const std::vector<std::uint64_t>& suffix,
               std::vector<Poly>& tuple, std::uint64_t& count, std::vector<std::vector<Poly>>* sink) const {
    if (k == order.size()) {
      if (g.is_one()) {
        ++count;
        if (sink) sink->push_back(tuple);
      }
      return;
    }
    if (g.is_one() && !sink) {
      count += suffix[k];
      return;
    }
    const unsigned j = order[k];
    for (std::uint64_t idx = 0; idx < choices[j]; ++idx) {
      tuple[j] = all_[idx];
      const Poly g2 = g.is_one() ? g : gcd(F_, g, tuple[j]);
      recurse(k + 1, g2, order, choices, suffix, tuple, count, sink);
    }
  }

  const Field& F_;
  unsigned n_, M_;
  std::vector<Poly> all_;
  std::uint64_t below_ = 0;
};

}  // namespace detail

/// Enumerates every canonical point of P^n(F_q(t)) with height exactly q^M.
/// Points reach the sink grouped by partition (the index of the first coordinate of
/// degree M), lexicographically ordered within each partition. Returns the count.
inline BigInt enumerate_exact_height(const Field& F, unsigned n, unsigned M,
                                     const std::function<void(const ProjPoint&)>& sink = {},
                                     EnumerationOptions opts = {}) {
  if (n < 1) throw DomainError("dimension must be >= 1");
  if (!enumeration_feasible(F.order(), n, M))
    throw SizeError("enumeration guard exceeded: q^{(n+1)(M+1)} > " + std::to_string(kEnumerationGuard));
  const detail::ExactHeightScanner scanner(F, n, M);
  const std::uint64_t per_pivot = scanner.pivot_choices();
  BigInt total(0);
  if (sink) {
    for (unsigned pivot = 0; pivot <= n; ++pivot) {
      std::vector<std::vector<Poly>> raw;
      for (std::uint64_t low = 0; low < per_pivot; ++low) scanner.scan(pivot, low, &raw);
      std::vector<ProjPoint> pts;
      pts.reserve(raw.size());
      for (auto& t : raw) pts.push_back(canonicalize(F, std::move(t)));
      std::sort(pts.begin(), pts.end());
      for (const auto& p : pts) sink(p);
      total += pts.size();
    }
    return total;
  }
  // count-only: work items (pivot, pivot_low) are independent; summation order is irrelevant
  const std::uint64_t items = per_pivot * (n + 1);
  const unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(std::min<std::uint64_t>(items, 256))));
  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    std::uint64_t local = 0;
    for (std::uint64_t it = next++; it < items; it = next++)
      local += scanner.scan(static_cast<unsigned>(it / per_pivot), it % per_pivot, nullptr);
    return local;
  };
  std::vector<std::future<std::uint64_t>> futures;
  for (unsigned j = 1; j < jobs; ++j) futures.push_back(std::async(std::launch::async, worker));
  total += worker();
  for (auto& f : futures) total += f.get();
  return total;
}

/// A(N) = #{x in P^2(F_q(t)) : H(x) = q^N}, N = 0..M, by enumeration or by formula.
enum class CountSource { enumeration, formula };

inline std::vector<BigInt> exact_height_counts(const Field& F, unsigned n, unsigned M, CountSource source,
                                               EnumerationOptions opts = {}) {
  std::vector<BigInt> out;
  for (unsigned N = 0; N <= M; ++N)
    out.push_back(source == CountSource::enumeration ? enumerate_exact_height(F, n, N, {}, opts)
                                                     : count_exact_height_formula(n, F.order(), N));
  return out;
}

struct PairCount {
  Rational observed;     // (1/2) sum_N A(N) A(M-N)
  Rational closed_form;  // displayed closed form in terms of S(3,1)
  bool match() const { return observed == closed_form; }
};

/// Halved count of ordered pairs (x, y) in P^2 x P^2 with H(x)H(y) = q^M.
inline PairCount count_reducible_pairs(const Field& F, unsigned M, CountSource source = CountSource::formula,
                                       EnumerationOptions opts = {}) {
  if (M < 1) throw DomainError("count_reducible_pairs requires M >= 1");
  const auto A = exact_height_counts(F, 2, M, source, opts);
  Rational sum(0);
  for (unsigned N = 0; N <= M; ++N) sum += Rational(A[N] * A[M - N]);
  const std::uint64_t q = F.order();
  const Rational S = schanuel_constant(2, q);
  const Rational q3M(ipow(q, 3 * M));
  const Rational q2(q * q);
  const Rational closed = S * S / 2 * q3M * M + (q2 + 1) / (2 * (q2 - 1)) * S * S * q3M;
  return {sum / 2, closed};
}

/// Halved count of pairs (x, y) in P^1 x P^2 with H(x)H(y) = q^M: the majorant for
/// pairs lying on a proper closed subset.
inline PairCount count_pairs_closed_subset(const Field& F, unsigned M, CountSource source = CountSource::formula,
                                           EnumerationOptions opts = {}) {
  if (M < 1) throw DomainError("count_pairs_closed_subset requires M >= 1");
  const auto A1 = exact_height_counts(F, 1, M, source, opts);
  const auto A2 = exact_height_counts(F, 2, M, source, opts);
  Rational sum(0);
  for (unsigned N = 0; N <= M; ++N) sum += Rational(A1[N] * A2[M - N]);
  const std::uint64_t q = F.order();
  const Rational qq(q);
  const Rational S2 = schanuel_constant(1, q), S3 = schanuel_constant(2, q);
  Rational geometric(0);
  for (unsigned N = 1; N + 1 <= M; ++N) geometric += rpow(qq, -static_cast<long>(N));
  const Rational q3M(ipow(q, 3 * M)), q2M(ipow(q, 2 * M));
  const Rational closed = (qq * qq - 1) / (2 * (qq - 1)) * S3 * q3M + S2 * S3 * q3M * geometric / 2 +
                          (qq * qq * qq - 1) / (2 * (qq - 1)) * S2 * q2M;
  return {sum / 2, closed};
}

}  // namespace acl
