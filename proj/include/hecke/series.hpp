#pragma once

// The double series
//
//   J_{k1}(v, w) = sum_{n primary} sum_{k2 in G} N(n)^-w N(k2)^-v g2(k1 k2^2, n) / N(n),
//
// the L-series of chi_{i k1} : n -> (i k1 / n), and the Euler product J2 with
// J_{k1}(v, w) = L(1/2 + w, chi_{i k1}) J2(v, w). Everything is restricted to
// Re v, Re w > 1, where all three converge absolutely.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "hecke/charsum.hpp"
#include "hecke/gauss_sum.hpp"
#include "hecke/gint.hpp"
#include "hecke/parallel.hpp"
#include "hecke/symbols.hpp"

namespace hecke {

using cplx = std::complex<double>;

struct SeriesCaps {
  i64 n_norm_cap = 1000;
  i64 k2_norm_cap = 20'000;
  i64 prime_norm_cap = 1'000'000;
  i64 l_norm_cap = 100'000;
};

struct SeriesPoint {
  GaussianInt k1;
  cplx v;
  cplx w;
  SeriesCaps caps;
};

struct TruncatedValue {
  cplx value;
  double tail = 0.0;  // |exact - value| <= tail
};

// kPrimary: odd prime generators are the primary ones. kRotated: each odd
// prime generator is replaced by -i times it.
enum class GeneratorChoice { kPrimary, kRotated };

inline bool is_squarefree(GaussianInt k) {
  const auto f = factor(k);
  if (f.ramified_exp > 1) return false;
  return std::all_of(f.factors.begin(), f.factors.end(), [](const PrimePower& p) { return p.exp == 1; });
}

// N^-s for complex s.
inline cplx norm_power(double n, cplx s) { return std::exp(-s * std::log(n)); }

namespace detail {

inline void require_half_plane(cplx s, double bound, const char* what) {
  if (!(s.real() >= bound)) throw DomainError(std::string(what) + ": real part below " + std::to_string(bound));
}

// Upper bound for sum_{primary n, N(n) > c} N(n)^-sigma, from
// #{primary n : N(n) <= x} <= (pi/8)(sqrt x + 2)^2.
inline double primary_tail(double c, double sigma) {
  if (!(sigma > 1.0)) throw DomainError("primary_tail: sigma must exceed 1");
  c = std::max(c, 1.0);
  return sigma * std::numbers::pi / 8.0 *
         (std::pow(c, 1.0 - sigma) / (sigma - 1.0) + 4.0 * std::pow(c, 0.5 - sigma) / (sigma - 0.5) +
          4.0 * std::pow(c, -sigma) / sigma);
}

// Same over nonzero ideals, from #{z : 0 < N(z) <= x} / 4 <= (pi/4)(sqrt x + 1)^2.
inline double ideal_tail(double c, double sigma) {
  if (!(sigma > 1.0)) throw DomainError("ideal_tail: sigma must exceed 1");
  c = std::max(c, 1.0);
  return sigma * std::numbers::pi / 4.0 *
         (std::pow(c, 1.0 - sigma) / (sigma - 1.0) + 2.0 * std::pow(c, 0.5 - sigma) / (sigma - 0.5) +
          std::pow(c, -sigma) / sigma);
}

// Generator in G of the ideal (z), z != 0.
inline GaussianInt generator_of(GaussianInt z, GeneratorChoice choice) {
  GaussianInt g = canonical_associate(z);
  if (choice == GeneratorChoice::kRotated) {
    unsigned count = 0;
    for (const auto& pp : factor(g).factors) count += pp.exp;
    g = g * pow(GaussianInt{0, -1}, count % 4);
  }
  return g;
}

// One representative per nonzero ideal of norm <= cap, in NormOrder.
inline std::vector<GaussianInt> ideal_generators(i64 cap, GeneratorChoice choice) {
  std::vector<GaussianInt> out;
  for (const auto& z : gaussian_ints_up_to(cap))
    if (z.re > 0 && z.im >= 0) out.push_back(generator_of(z, choice));
  std::stable_sort(out.begin(), out.end(), NormOrder{});
  return out;
}

}  // namespace detail

// Value of chi_{i k1} at an odd primary prime.
inline int chi_ik1(GaussianInt k1, GaussianInt varpi) { return quadratic_prime(kI * k1, varpi).as_int(); }

// True when chi_{i k1} is trivial on odd ideals.
inline bool chi_is_principal(GaussianInt k1) {
  const GaussianInt m = kI * k1;
  return m == GaussianInt{1, 0} || m == GaussianInt{-1, 0};
}

inline TruncatedValue j_truncated(const SeriesPoint& p, GeneratorChoice choice = GeneratorChoice::kPrimary,
                                  unsigned threads = default_threads()) {
  detail::require_half_plane(p.v, 1.25, "j_truncated v");
  detail::require_half_plane(p.w, 1.25, "j_truncated w");
  if (p.k1.is_zero() || !is_squarefree(p.k1)) throw DomainError("j_truncated: k1 must be square-free");
  const auto ns = primary_up_to(p.caps.n_norm_cap);
  const auto k2s = detail::ideal_generators(p.caps.k2_norm_cap, choice);
  std::vector<GaussianInt> ks(k2s.size());
  std::vector<cplx> weights(k2s.size());
  for (std::size_t j = 0; j < k2s.size(); ++j) {
    ks[j] = p.k1 * k2s[j] * k2s[j];
    weights[j] = norm_power(static_cast<double>(norm(k2s[j])), p.v);
  }
  // g2(k, n) depends on k mod n only, so tabulate it over residues(n).
  const auto partials = parallel_map<cplx>(ns.size(), threads, [&](std::size_t i) {
    const auto& n = ns[i];
    const auto nf = factor(n);
    const double nn = static_cast<double>(norm(n));
    std::unordered_map<GaussianInt, double, GaussianIntHash> table;
    for (const auto& r : residues(n, INT64_MAX)) table.emplace(r, g2_closed(r, nf).value / nn);
    std::vector<cplx> terms;
    terms.reserve(ks.size());
    for (std::size_t j = 0; j < ks.size(); ++j) {
      const double g = table.at(mod(ks[j], n));
      if (g != 0.0) terms.push_back(g * weights[j]);
    }
    return norm_power(nn, p.w) * pairwise_sum(terms);
  });
  const double sv = p.v.real(), sw = p.w.real();
  const double all_k2 = zeta_K(sv) * (1.0 + 1e-9);
  const double all_n = zeta_K(sw) * (1.0 - std::pow(2.0, -sw)) * (1.0 + 1e-9);
  const double tail = detail::primary_tail(static_cast<double>(p.caps.n_norm_cap), sw) * all_k2 +
                      all_n * detail::ideal_tail(static_cast<double>(p.caps.k2_norm_cap), sv);
  return {pairwise_sum(partials), tail};
}

// sum over primary n with N(n) <= cap of chi_{i k1}(n) N(n)^-s.
inline TruncatedValue l_hecke_truncated(cplx s, GaussianInt k1, i64 cap, unsigned threads = default_threads()) {
  detail::require_half_plane(s, 1.25, "l_hecke_truncated");
  const auto ns = primary_up_to(cap);
  const GaussianInt m = kI * k1;
  const auto terms = parallel_map<cplx>(ns.size(), threads, [&](std::size_t i) {
    const int c = quadratic_symbol(m, factor(ns[i]));
    return c ? static_cast<double>(c) * norm_power(static_cast<double>(norm(ns[i])), s) : cplx{};
  });
  return {pairwise_sum(terms), detail::primary_tail(static_cast<double>(cap), s.real())};
}

namespace detail {

inline constexpr double kLocalTol = 1e-15;

// g2(k, varpi^l) / N^l where varpi^h exactly divides k, in floating point
// (the exact value overflows for the l needed here). sym = (i k varpi^-h / varpi).
inline double g2_local_scaled(unsigned l, unsigned h, double nd, int sym) {
  if (l == 0) return 1.0;
  if (l <= h) return l % 2 ? 0.0 : 1.0 - 1.0 / nd;
  if (l == h + 1) return l % 2 ? sym / std::sqrt(nd) : -1.0 / nd;
  return 0.0;
}

// sum_j N^{-j v} sum_l N^{-l w} g2(k1 varpi^{2j}, varpi^l)/N^l, summed term by
// term; l runs to h+1 beyond which g2 = 0.
inline cplx j_local_direct(GaussianInt varpi, GaussianInt k1, cplx v, cplx w) {
  const double nd = static_cast<double>(norm(varpi));
  const unsigned h0 = valuation(k1, varpi);
  const int sym = chi_ik1(exact_div(k1, pow(varpi, h0)), varpi);
  const cplx nv = norm_power(nd, v), nw = norm_power(nd, w);
  cplx total = 0.0, vj = 1.0;
  for (unsigned j = 0;; ++j) {
    const unsigned h = h0 + 2 * j;
    cplx inner = 0.0, wl = 1.0;
    for (unsigned l = 0; l <= h + 1; ++l) {
      const double g = g2_local_scaled(l, h, nd, sym);
      if (g != 0.0) inner += wl * g;
      wl *= nw;
    }
    total += vj * inner;
    vj *= nv;
    if (std::abs(vj) / (1.0 - std::abs(nv)) * (1.0 / (1.0 - std::norm(nw)) + 1.0) < kLocalTol) break;
    if (j > 4096) throw ConvergenceError("j_local_direct: no convergence");
  }
  return total;
}

}  // namespace detail

// Euler factor at odd varpi not dividing k1, summed in closed form per j.
inline cplx j_gen_factor(GaussianInt varpi, GaussianInt k1, cplx v, cplx w) {
  detail::require_half_plane(v, 0.75, "j_gen_factor v");
  detail::require_half_plane(w, 0.25, "j_gen_factor w");
  if (norm(varpi) % 2 == 0) throw DomainError("j_gen_factor: prime must be odd");
  if (divides(varpi, k1)) throw DomainError("j_gen_factor: prime divides k1");
  const double nd = static_cast<double>(norm(varpi));
  const int c = chi_ik1(k1, varpi);
  const cplx nv = norm_power(nd, v), nw = norm_power(nd, w), n2w = nw * nw;
  const double local_phi = 1.0 - 1.0 / nd;  // phi(varpi^l)/N^l for l >= 1
  const cplx odd_base = static_cast<double>(c) * nw / std::sqrt(nd);
  cplx total = 0.0, vj = 1.0, even_sum = 1.0, even_pow = 1.0, odd_pow = 1.0;
  for (unsigned j = 0;; ++j) {
    if (j > 0) {
      even_pow *= n2w;
      even_sum += local_phi * even_pow;
      odd_pow *= n2w;
    }
    total += vj * (even_sum + odd_base * odd_pow);
    vj *= nv;
    const double bound = std::abs(vj) / (1.0 - std::abs(nv)) * (1.0 / (1.0 - std::abs(n2w)) + 1.0);
    if (bound < detail::kLocalTol) break;
    if (j > 4096) throw ConvergenceError("j_gen_factor: no convergence");
  }
  return total;
}

// 2-part of J: g2(k1 (1+i)^{2j} k2'^2, n) does not depend on j.
inline cplx j_ramified_factor(cplx v) { return 1.0 / (1.0 - std::pow(2.0, -v)); }

struct EulerProduct {
  cplx value;
  double rel_tail = 0.0;  // |exact/value - 1| <= rel_tail
};

// Odd primary primes with norm <= cap, in NormOrder.
inline std::vector<GaussianInt> odd_primes_up_to(i64 cap) {
  std::vector<GaussianInt> out;
  for (u64 p : arith::primes_up_to(static_cast<u64>(std::max<i64>(cap, 2)))) {
    if (p == 2) continue;
    if (p % 4 == 3) {
      if (static_cast<i64>(p) <= cap / static_cast<i64>(p)) out.push_back({-static_cast<i64>(p), 0});
    } else {
      const GaussianInt pi = detail::split_prime_over(p);
      out.push_back(pi);
      out.push_back(conj(pi));
    }
  }
  std::sort(out.begin(), out.end(), NormOrder{});
  return out;
}

inline EulerProduct j2(GaussianInt k1, cplx v, cplx w, i64 prime_norm_cap, unsigned threads = default_threads()) {
  detail::require_half_plane(v, 0.75, "j2 v");
  detail::require_half_plane(w, 0.25, "j2 w");
  if (k1.is_zero() || !is_squarefree(k1)) throw DomainError("j2: k1 must be square-free");
  if (prime_norm_cap < 5) throw DomainError("j2: prime cap too small");
  const auto primes = odd_primes_up_to(prime_norm_cap);
  const auto k1f = factor(k1);
  const auto factors = parallel_map<cplx>(primes.size(), threads, [&](std::size_t i) {
    const auto& q = primes[i];
    if (divides(q, k1)) return cplx(1.0);
    const double nd = static_cast<double>(norm(q));
    return (1.0 - static_cast<double>(chi_ik1(k1, q)) * norm_power(nd, 0.5 + w)) * j_gen_factor(q, k1, v, w);
  });
  // Fixed-order product in log form.
  std::vector<cplx> logs(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) logs[i] = std::log(factors[i]);
  cplx value = std::exp(pairwise_sum(logs)) * j_ramified_factor(v);
  // Primes dividing k1: chi vanishes there, so the factor is J_varpi itself.
  for (const auto& pp : k1f.factors) value *= detail::j_local_direct(pp.prime, k1, v, w);

  // For N > cap: |factor - 1| <= N^{-1-2 Re w} + c N^{-Re v}.
  const double sv = v.real(), sw = w.real();
  double rel_tail = std::numeric_limits<double>::infinity();
  if (sv > 1.0) {
    const double n0 = std::max(5.0, static_cast<double>(prime_norm_cap));
    const double a = std::pow(n0, -0.5 - sw);
    const double c = (1.0 + a) * (1.0 + 1.0 / (std::pow(n0, 2.0 * sw) - 1.0) + std::pow(n0, -0.5)) /
                     (1.0 - std::pow(n0, -sv));
    const double cap = static_cast<double>(prime_norm_cap);
    const double b = detail::primary_tail(cap, 1.0 + 2.0 * sw) + c * detail::primary_tail(cap, sv);
    rel_tail = std::expm1(b);
  }
  return {value, rel_tail};
}

struct FactorizationReport {
  GaussianInt k1;
  cplx v, w;
  SeriesCaps caps;
  TruncatedValue j;
  TruncatedValue l;
  EulerProduct j2;
  double delta = 0.0;
  double budget = 0.0;
  double rel_delta = 0.0;
  bool within_budget = false;
  bool within_rel = false;
  bool pass() const { return within_budget && within_rel; }
};

inline constexpr double kFactorizationRelTol = 1e-2;

inline FactorizationReport verify_factorization(GaussianInt k1, cplx v, cplx w, const SeriesCaps& caps,
                                                unsigned threads = default_threads()) {
  detail::require_half_plane(v, 1.25, "verify_factorization v");
  detail::require_half_plane(w, 1.25, "verify_factorization w");
  FactorizationReport r;
  r.k1 = k1;
  r.v = v;
  r.w = w;
  r.caps = caps;
  r.j = j_truncated({k1, v, w, caps}, GeneratorChoice::kPrimary, threads);
  r.l = l_hecke_truncated(0.5 + w, k1, caps.l_norm_cap, threads);
  r.j2 = j2(k1, v, w, caps.prime_norm_cap, threads);
  const cplx rhs = r.l.value * r.j2.value;
  r.delta = std::abs(r.j.value - rhs);
  const double aj2 = std::abs(r.j2.value), al = std::abs(r.l.value);
  const double rounding = 1e-10 * (1.0 + std::abs(r.j.value) + std::abs(rhs));
  r.budget = r.j.tail + r.l.tail * aj2 * (1.0 + r.j2.rel_tail) + al * aj2 * r.j2.rel_tail + rounding;
  r.rel_delta = r.delta / std::abs(r.j.value);
  r.within_budget = r.delta <= r.budget;
  r.within_rel = r.rel_delta <= kFactorizationRelTol;
  return r;
}

// Caps used by the built-in checks.
inline SeriesCaps default_caps(cplx v, cplx w) {
  SeriesCaps c;
  if (std::min(v.real(), w.real()) < 1.75) {
    c.n_norm_cap = 500;
    c.k2_norm_cap = 100'000;
  }
  return c;
}

}  // namespace hecke
