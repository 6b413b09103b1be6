#pragma once

#include "acl/asympt.hpp"
#include "acl/cli/config.hpp"
#include "acl/cli/table.hpp"
#include "acl/genfun.hpp"
#include "acl/peyre.hpp"
#include "acl/quadfield.hpp"
#include "acl/ratpoints.hpp"

#include <functional>
#include <map>
#include <string>

namespace acl::cli {

inline constexpr unsigned kMinDigits = 10;
inline constexpr unsigned kMaxDigits = 1000;
inline constexpr unsigned kMaxJobs = 256;

namespace detail {

inline std::string params(std::initializer_list<std::pair<const char*, std::string>> kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    if (!out.empty()) out += ';';
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

inline GlobalFieldParams rational_field(const RunConfig& cfg) { return GlobalFieldParams::rational(cfg.q); }

inline Rational resolve_mu(const RunConfig& cfg) {
  if (!cfg.mu.empty()) {
    Rational mu;
    try {
      mu = parse_rational(cfg.mu);
    } catch (const std::exception&) {
      throw UsageError("--mu is not a rational number: " + cfg.mu);
    }
    if (mu <= 0) throw UsageError("--mu must be positive");
    return mu;
  }
  if (auto mu = mu_table(cfg.m)) return *mu;
  throw UsageError("no built-in slope for m=" + std::to_string(cfg.m) + "; pass --mu");
}

}  // namespace detail

/// Checks shared by every command; producer-specific guards run again inside the producers.
inline void validate(const RunConfig& cfg) {
  if (!is_prime_power(cfg.q) || cfg.q > Field::kMaxOrder) throw UsageError("--q must be a prime power <= 65536");
  if (cfg.M_max && *cfg.M_max < cfg.M) throw UsageError("--M-max must be >= --M");
  if (cfg.digits < kMinDigits || cfg.digits > kMaxDigits) throw UsageError("--digits must lie in [10, 1000]");
  if (cfg.jobs < 1 || cfg.jobs > kMaxJobs) throw UsageError("--jobs must lie in [1, 256]");
  if (cfg.format != "csv" && cfg.format != "json") throw UsageError("--format must be csv or json");
}

inline Table count_rational(const RunConfig& cfg) {
  if (cfg.n < 1) throw UsageError("--n must be >= 1");
  for (unsigned M = cfg.M; M <= cfg.last_M(); ++M)
    if (!enumeration_feasible(cfg.q, cfg.n, M))
      throw SizeError("enumeration guard exceeded for q=" + std::to_string(cfg.q) + " n=" + std::to_string(cfg.n) +
                      " M=" + std::to_string(M));
  const Field F = Field::of_order(cfg.q);
  Table t{CountRecord::header(), {}};
  for (unsigned M = cfg.M; M <= cfg.last_M(); ++M) {
    const CountRecord rec{
        "rational",
        detail::params({{"q", std::to_string(cfg.q)}, {"n", std::to_string(cfg.n)}, {"M", std::to_string(M)}}),
        Rational(enumerate_exact_height(F, cfg.n, M, {}, {cfg.jobs})),
        Rational(count_exact_height_formula(cfg.n, cfg.q, M)),
        Rational(0)};
    t.add(rec.row());
  }
  return t;
}

inline Table count_pairs(const RunConfig& cfg) {
  if (cfg.M < 1) throw UsageError("--M must be >= 1");
  if (!enumeration_feasible(cfg.q, 2, cfg.last_M()))
    throw SizeError("enumeration guard exceeded for q=" + std::to_string(cfg.q) + " M=" + std::to_string(cfg.last_M()));
  const Field F = Field::of_order(cfg.q);
  Table t{CountRecord::header(), {}};
  for (unsigned M = cfg.M; M <= cfg.last_M(); ++M) {
    const std::string p = detail::params({{"q", std::to_string(cfg.q)}, {"M", std::to_string(M)}});
    const PairCount red = count_reducible_pairs(F, M, CountSource::enumeration, {cfg.jobs});
    t.add(CountRecord{"reducible_pairs", p, red.observed, red.closed_form, Rational(0)}.row());
    const PairCount sub = count_pairs_closed_subset(F, M, CountSource::enumeration, {cfg.jobs});
    t.add(CountRecord{"closed_subset", p, sub.observed, sub.closed_form, Rational(0)}.row());
  }
  return t;
}

inline Table count_quadratic(const RunConfig& cfg) {
  if (cfg.M < 1) throw UsageError("--M must be >= 1");
  if (cfg.q % 2 == 0) throw UnsupportedError("count quadratic requires odd q");
  for (unsigned M = cfg.M; M <= cfg.last_M(); ++M)
    if (degree2_work(cfg.q, M) > kDegree2Guard)
      throw SizeError("degree-2 enumeration guard exceeded for q=" + std::to_string(cfg.q) +
                      " M=" + std::to_string(M));
  const Field F = Field::of_order(cfg.q);
  Table t{{"q", "M", "count", "stable", "main_term", "ratio"}, {}};
  for (unsigned M = cfg.M; M <= cfg.last_M(); ++M) {
    const Degree2Count r = enumerate_degree2(F, M, {.jobs = cfg.jobs});
    if (!r.stable && !cfg.allow_unstable)
      throw UnstableError("degree-2 count for q=" + std::to_string(cfg.q) + " M=" + std::to_string(M) +
                          " changed when the search bound grew; rerun with --allow-unstable to emit it");
    t.add({Cell::integer(static_cast<long long>(cfg.q)), Cell::integer(static_cast<long long>(M)),
           Cell::integer(r.count), Cell::boolean(r.stable), Cell::rational(r.main_term),
           Cell::real(to_real(r.ratio()), cfg.digits)});
  }
  return t;
}

inline Table cycles(const RunConfig& cfg) {
  if (cfg.m_max < 2) throw UsageError("--m-max must be >= 2");
  if (cfg.q > kMaxSeriesQ || cfg.m_max > kMaxSeriesOrder)
    throw SizeError("series guard exceeded: q <= " + std::to_string(kMaxSeriesQ) +
                    " and m-max <= " + std::to_string(kMaxSeriesOrder) + " required");
  const auto sym = sym_counts(cfg.q, cfg.m_max);
  const auto hilb = hilb_counts(cfg.q, cfg.m_max);
  const auto primes = closed_point_counts(cfg.q, cfg.m_max);
  Table t{{"m", "sym", "hilb", "primes", "chen7", "chen8", "chen8_valid", "ratio_error"}, {}};
  for (unsigned m = 2; m <= cfg.m_max; ++m) {
    const Chen8Result c8 = chen8_closed(cfg.q, m);
    const Chen1Result c1 = chen1_ratio(cfg.q, m);
    t.add({Cell::integer(static_cast<long long>(m)), Cell::integer(sym[m]), Cell::integer(hilb[m]),
           Cell::integer(primes[m]), Cell::integer(chen7_closed(cfg.q, m)), Cell::rational(c8.value),
           Cell::boolean(c8.valid), Cell::rational(c1.normalized_error)});
  }
  return t;
}

inline Table peyre(const std::string& which, const RunConfig& cfg) {
  const GlobalFieldParams K = detail::rational_field(cfg);
  PeyreResult r;
  if (which == "pn") {
    if (cfg.n < 1) throw UsageError("--n must be >= 1");
    r = peyre_constant_pn(cfg.n, K, cfg.digits);
  } else if (which == "hilb2") {
    r = peyre_constant_hilb2(K, cfg.digits);
  } else if (which == "hilbm") {
    if (cfg.m < 2) throw UsageError("--m must be >= 2");
    r = peyre_constant_hilbm(cfg.m, detail::resolve_mu(cfg), K, cfg.deg_cut, cfg.digits);
  } else if (which == "cm") {
    if (cfg.m < 2) throw UsageError("--m must be >= 2");
    const Rational mu = cfg.m == 2 ? Rational(1) : detail::resolve_mu(cfg);
    r = cm_constant(cfg.m, mu, K, cfg.deg_cut, cfg.digits);
  } else {
    throw UsageError("unknown peyre target " + which);
  }
  Table t{{"value", "residual_bound", "exact_prefactor"}, {}};
  t.add({Cell::real(r.value, cfg.digits), Cell::real(r.residual_bound, 6), Cell::rational(r.exact_prefactor)});
  return t;
}

inline Table verify_lemmas(const RunConfig& cfg) {
  Table t{{"lemma", "params", "M", "ratio_or_dev", "pass"}, {}};
  auto integer = [](unsigned M) { return Cell::integer(static_cast<long long>(M)); };

  const auto sweep = technical_lemma_sweep(cfg.q, 2, 1, 5);
  const std::string tp = detail::params({{"q", std::to_string(cfg.q)}, {"t", "2"}, {"j", "1"}, {"m", "5"}});
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    const auto& row = sweep.rows[i];
    const bool ok = i == 0 || row.dev <= kDevGrowthTolerance * sweep.rows[i - 1].dev;
    t.add({Cell::str("technical"), Cell::str(tp), integer(row.M), Cell::real(row.dev, 12), Cell::boolean(ok)});
  }
  for (unsigned M : {10u, 100u, 1000u}) {
    const Rational r = technical2_check(1, M);
    const BigInt b(M);
    t.add({Cell::str("technical2"), Cell::str("k=1"), integer(M), Cell::rational(r),
           Cell::boolean(r == Rational(b * b - 1, b * b))});
  }
  {
    const Rational r = technical2_check(3, 100);
    t.add({Cell::str("technical2"), Cell::str("k=3"), integer(100), Cell::real(to_real(r), 12),
           Cell::boolean(abs(r - 1) < Rational(2, 100))});
  }
  for (unsigned M : {10u, 100u, 1000u}) {
    const Rational r = product_main_term_check(2, 2, M);
    const BigInt b(M);
    t.add({Cell::str("product"), Cell::str("rV=2;rW=2"), integer(M), Cell::rational(r),
           Cell::boolean(r == Rational(b * b - 1, b * b))});
  }
  for (unsigned k = 1; k <= 8; ++k) {
    const BigInt v = binomial_cancellation(k);
    t.add({Cell::str("binomial"), Cell::str("k=" + std::to_string(k)), Cell::str(""), Cell::integer(v),
           Cell::boolean(v == 0)});
  }
  return t;
}

/// Command path (e.g. "count rational") to its table builder.
inline const std::map<std::string, std::function<Table(const RunConfig&)>>& command_table() {
  static const std::map<std::string, std::function<Table(const RunConfig&)>> table = {
      {"count rational", count_rational},
      {"count pairs", count_pairs},
      {"count quadratic", count_quadratic},
      {"cycles", cycles},
      {"peyre pn", [](const RunConfig& c) { return peyre("pn", c); }},
      {"peyre hilb2", [](const RunConfig& c) { return peyre("hilb2", c); }},
      {"peyre hilbm", [](const RunConfig& c) { return peyre("hilbm", c); }},
      {"peyre cm", [](const RunConfig& c) { return peyre("cm", c); }},
      {"verify lemmas", verify_lemmas},
  };
  return table;
}

}  // namespace acl::cli
