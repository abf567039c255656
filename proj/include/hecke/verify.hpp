#pragma once

// Built-in property suites behind `hecke verify`.

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hecke/charsum.hpp"
#include "hecke/gauss_sum.hpp"
#include "hecke/gint.hpp"
#include "hecke/series.hpp"
#include "hecke/smooth.hpp"
#include "hecke/symbols.hpp"

namespace hecke {

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  double measured = 0.0;   // worst error seen
  double tolerance = 0.0;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double seconds = 0.0;
  std::string detail;
};

namespace detail {

template <typename F>
CheckResult timed(std::string suite, std::string name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r = body();
  r.suite = std::move(suite);
  r.name = std::move(name);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::vector<GaussianInt> oracle_frequencies(GaussianInt n) {
  const auto nf = factor(n);
  const GaussianInt p1 = nf.factors.empty() ? GaussianInt{1, 0} : nf.factors.front().prime;
  return {0, 1, -1, kI, -kI, 2, -2, kOnePlusI, GaussianInt{2, 3}, p1, kI * p1 * p1, n};
}

}  // namespace detail

// |g2_naive - g2_closed| <= 1e-6 N(n) for all primary n up to max_norm.
inline CheckResult check_gauss_oracle(i64 max_norm = 1500) {
  return detail::timed("gauss", "gauss_sum_oracle", [&] {
    CheckResult r;
    r.tolerance = 1e-6;
    for (const auto& n : primary_up_to(max_norm)) {
      const double nn = static_cast<double>(norm(n));
      for (const auto& k : detail::oracle_frequencies(n)) {
        const double err = std::abs(g2_naive(k, n).value - g2_closed(k, n).value) / nn;
        ++r.cases;
        r.measured = std::max(r.measured, err);
        if (!(err <= r.tolerance)) {
          if (r.failures++ == 0) r.detail = "first failure at k=" + to_string(k) + " n=" + to_string(n);
        }
      }
    }
    r.pass = r.failures == 0;
    return r;
  });
}

// g2(r s, n) = (s/n) g2(r, n) exactly, on random triples with (s, n) = 1.
inline CheckResult check_twist_identity(std::size_t triples = 300, std::uint64_t seed = 20240611) {
  return detail::timed("gauss", "twist_identity", [&] {
    CheckResult r;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<i64> coord(-40, 40);
    const auto ns = primary_up_to(2000);
    std::uniform_int_distribution<std::size_t> pick(0, ns.size() - 1);
    while (r.cases < triples) {
      const GaussianInt n = ns[pick(rng)];
      const GaussianInt a{coord(rng), coord(rng)}, s{coord(rng), coord(rng)};
      if (s.is_zero() || !is_unit(gcd(s, n))) continue;
      ++r.cases;
      const auto lhs = g2_closed(a * s, n).exact.value();
      const auto rhs = g2_closed(a, n).exact.value() * SurdValue(quadratic_symbol(s, n));
      if (!(lhs == rhs) && r.failures++ == 0)
        r.detail = "a=" + to_string(a) + " s=" + to_string(s) + " n=" + to_string(n);
    }
    r.pass = r.failures == 0;
    return r;
  });
}

// sum_m (m/n) W(N(m)/X) directly and through the dual sum, for the first
// `count` primary n. The error is measured relative to max(|lhs|, sum_m W),
// since the left side vanishes identically when (i/n) = -1.
inline CheckResult check_poisson_identity(std::size_t count = 20, std::vector<double> xs = {10.0, 100.0},
                                          double tol = 1e-8) {
  return detail::timed("poisson", "poisson_identity", [&] {
    CheckResult r;
    r.tolerance = tol;
    const SmoothWeight w;
    TruncationPolicy policy;
    policy.eps_tail = 1e-14;
    auto ns = primary_up_to(200);
    ns.resize(std::min(count, ns.size()));
    for (double x : xs) {
      double mass_terms = 0.0;
      for (const auto& m : gaussian_ints_up_to(static_cast<i64>(w.support_hi * x)))
        if (norm(m) % 2) mass_terms += eval(w, static_cast<double>(norm(m)) / x);
      for (const auto& n : ns) {
        const double lhs = m_sum_direct(n, x, w);
        const double rhs = m_sum_poisson(n, x, w, policy);
        const double err = std::abs(lhs - rhs) / std::max(std::abs(lhs), mass_terms);
        ++r.cases;
        r.measured = std::max(r.measured, err);
        if (!(err <= tol) && r.failures++ == 0)
          r.detail = "n=" + to_string(n) + " X=" + std::to_string(x);
      }
    }
    r.pass = r.failures == 0;
    return r;
  });
}

inline const std::vector<GaussianInt>& factorization_k1_set() {
  static const std::vector<GaussianInt> ks{{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {-1, 2}, {-3, 0}, GaussianInt{-1, 2} * -3};
  return ks;
}

inline CheckResult check_series_factorization(unsigned threads = default_threads()) {
  return detail::timed("series", "factorization", [&] {
    CheckResult r;
    r.tolerance = kFactorizationRelTol;
    for (double s : {2.0, 1.5}) {
      for (const auto& k1 : factorization_k1_set()) {
        const auto rep = verify_factorization(k1, s, s, default_caps(s, s), threads);
        ++r.cases;
        r.measured = std::max(r.measured, rep.rel_delta);
        if (!rep.pass() && r.failures++ == 0)
          r.detail = "k1=" + to_string(k1) + " v=w=" + std::to_string(s);
      }
    }
    r.pass = r.failures == 0;
    return r;
  });
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"gauss", "poisson", "series", "all"};
  return names;
}

inline bool is_suite(const std::string& s) {
  for (const auto& n : suite_names())
    if (n == s) return true;
  return false;
}

inline std::vector<CheckResult> run_suite(const std::string& suite, unsigned threads = default_threads()) {
  if (!is_suite(suite)) throw DomainError("unknown suite: " + suite);
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  if (all || suite == "gauss") {
    out.push_back(check_gauss_oracle());
    out.push_back(check_twist_identity());
  }
  if (all || suite == "poisson") out.push_back(check_poisson_identity());
  if (all || suite == "series") out.push_back(check_series_factorization(threads));
  return out;
}

}  // namespace hecke
