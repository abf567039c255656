#pragma once

// The smoothed quadratic character sum
//
//   S2(X, Y; Phi, W) = sum_{n primary} sum_{(m, 1+i) = 1} ((1+i)m / n) Phi(N(n)/Y) W(N(m)/X)
//
// evaluated directly and through its Poisson dual
//
//   S2 = (X/2) sum_k (-1)^{N(k)} sum_n g2(k, n)/N(n) Phi(N(n)/Y) W~_i(sqrt(N(k) X / (2 N(n)))),
//
// together with the k = 0 main term M0 and the closed-form candidates for it.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hecke/gauss_sum.hpp"
#include "hecke/gint.hpp"
#include "hecke/parallel.hpp"
#include "hecke/smooth.hpp"
#include "hecke/symbols.hpp"

namespace hecke {

struct TruncationPolicy {
  double eps_tail = 1e-10;        // W~_i cutoff defining the dual k range
  i64 n_norm_cap = 100'000'000;   // largest N(n) either path will enumerate
  double k_cap_scale = 1.0;       // multiplies the k-norm cap (stability checks)
  double work_budget = 2e8;       // max (m, n) pairs for the direct path
  bool parity_sign = true;        // (-1)^{N(k)}; off only for negative controls
  unsigned threads = default_threads();
};

struct Rational {
  i64 num;
  i64 den;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Gauss circle exponent used in the error envelope.
constexpr Rational theta() { return {131, 416}; }

// Display-only envelope X Y^{theta/2} + X Y^{1/2} (Y/X)^{1.01}, constants taken as 1.
inline double error_envelope(double x, double y) {
  const double th = theta().value();
  return x * std::pow(y, th / 2.0) + x * std::sqrt(y) * std::pow(y / x, 1.01);
}

struct PathResult {
  double value = 0.0;
  std::uint64_t terms = 0;
  double seconds = 0.0;
};

namespace detail {

inline void check_scales(double x, double y) {
  if (!(x >= 1.0) || !(y >= 1.0)) throw DomainError("X and Y must be >= 1");
}

// Primary n with Phi(N(n)/Y) != 0, in NormOrder.
inline std::vector<GaussianInt> moduli_in_support(double y, const SmoothWeight& phi, const TruncationPolicy& policy) {
  const double hi = phi.support_hi * y;
  if (hi > static_cast<double>(policy.n_norm_cap)) throw BudgetError("n range exceeds the enumeration cap");
  std::vector<GaussianInt> out;
  for (const auto& n : primary_up_to(static_cast<i64>(std::floor(hi))))
    if (eval(phi, static_cast<double>(norm(n)) / y) != 0.0) out.push_back(n);
  return out;
}

struct WeightedPoint {
  GaussianInt z;
  double weight;
};

// m coprime to 1+i with W(N(m)/X) != 0.
inline std::vector<WeightedPoint> odd_points_in_support(double x, const SmoothWeight& w) {
  std::vector<WeightedPoint> out;
  for (const auto& m : gaussian_ints_up_to(static_cast<i64>(std::floor(w.support_hi * x)))) {
    if (norm(m) % 2 == 0) continue;
    const double wt = eval(w, static_cast<double>(norm(m)) / x);
    if (wt != 0.0) out.push_back({m, wt});
  }
  return out;
}

// sum_m (m/n) W(N(m)/X) for one modulus, via a character table over a
// residue system or via the Euler criterion at each prime of n.
inline double inner_m_sum(GaussianInt n, const Factorization& nf, const std::vector<WeightedPoint>& ms) {
  std::vector<double> terms;
  terms.reserve(ms.size());
  if (4 * static_cast<double>(norm(n)) < static_cast<double>(ms.size())) {
    std::unordered_map<GaussianInt, int, GaussianIntHash> table;
    for (const auto& r : residues(n, INT64_MAX)) table.emplace(r, quadratic_symbol(r, nf));
    for (const auto& p : ms) {
      const int s = table.at(mod(p.z, n));
      if (s) terms.push_back(s * p.weight);
    }
  } else {
    for (const auto& p : ms) {
      const int s = quadratic_symbol(p.z, nf);
      if (s) terms.push_back(s * p.weight);
    }
  }
  return pairwise_sum(terms);
}

inline double kernel_cutoff(const SmoothWeight& w, const TruncationPolicy& policy) {
  return decay_threshold(w, policy.eps_tail) * std::sqrt(std::max(1.0, policy.k_cap_scale));
}

inline std::shared_ptr<const TransformTable> kernel_table(const SmoothWeight& w, const TruncationPolicy& policy) {
  const double t_cut = kernel_cutoff(w, policy);
  return cached_transform_table(w, std::max(2.0 * decay_threshold(w, policy.eps_tail), t_cut), policy.threads);
}

// sum_k (-1)^{N(k)} g2(k, n)/N(n) W~_i(sqrt(N(k) X / (2 N(n)))) over the k
// prefix (in NormOrder) whose transform argument stays below t_cut.
inline double dual_k_sum(const Factorization& nf, i64 nn, double x, const std::vector<GaussianInt>& ks,
                         const TransformTable& table, double t_cut, const TruncationPolicy& policy,
                         std::uint64_t& terms) {
  std::vector<double> parts;
  const double scale = x / (2.0 * static_cast<double>(nn));
  for (const auto& k : ks) {
    const i64 nk = norm(k);
    const double t = std::sqrt(static_cast<double>(nk) * scale);
    if (t > t_cut) break;
    ++terms;
    const double g = g2_closed(k, nf).value;
    if (g == 0.0) continue;
    const double sign = (policy.parity_sign && (nk & 1)) ? -1.0 : 1.0;
    parts.push_back(sign * g / static_cast<double>(nn) * table(t));
  }
  return pairwise_sum(parts);
}

inline std::vector<GaussianInt> dual_frequencies(double x, i64 max_modulus_norm, double t_cut) {
  const double cap = t_cut * t_cut * 2.0 * static_cast<double>(max_modulus_norm) / x;
  if (cap > 4e8) throw BudgetError("dual k range too large; raise X or eps_tail");
  return gaussian_ints_up_to(static_cast<i64>(std::floor(cap)));
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace detail

// sum_{(m,1+i)=1} (m/n) W(N(m)/X) for primary n, by direct summation.
inline double m_sum_direct(GaussianInt n, double x, const SmoothWeight& w) {
  if (!is_primary(n)) throw DomainError("m_sum_direct: modulus must be primary");
  const auto ms = detail::odd_points_in_support(x, w);
  return detail::inner_m_sum(n, factor(n), ms);
}

// The same quantity through Poisson summation, truncated at W~_i <= eps_tail.
inline double m_sum_poisson(GaussianInt n, double x, const SmoothWeight& w, const TruncationPolicy& policy = {}) {
  if (!is_primary(n)) throw DomainError("m_sum_poisson: modulus must be primary");
  const auto nf = factor(n);
  const i64 nn = norm(n);
  const double t_cut = detail::kernel_cutoff(w, policy);
  const auto table = detail::kernel_table(w, policy);
  const auto ks = detail::dual_frequencies(x, nn, t_cut);
  std::uint64_t terms = 0;
  const double dual = detail::dual_k_sum(nf, nn, x, ks, *table, t_cut, policy, terms);
  return x / 2.0 * quadratic_symbol(kOnePlusI, nf) * dual;
}

inline PathResult s2_direct(double x, double y, const SmoothWeight& phi, const SmoothWeight& w,
                            const TruncationPolicy& policy = {}) {
  detail::check_scales(x, y);
  validate(phi);
  validate(w);
  detail::Stopwatch clock;
  const auto ns = detail::moduli_in_support(y, phi, policy);
  if (ns.empty()) return {};
  const auto ms = detail::odd_points_in_support(x, w);
  const double pairs = static_cast<double>(ns.size()) * static_cast<double>(ms.size());
  if (pairs > policy.work_budget) throw BudgetError("direct evaluation exceeds the work budget; use the Poisson path");
  const auto partials = parallel_map<double>(ns.size(), policy.threads, [&](std::size_t i) {
    const auto& n = ns[i];
    const auto nf = factor(n);
    const double phi_n = eval(phi, static_cast<double>(norm(n)) / y);
    return phi_n * quadratic_symbol(kOnePlusI, nf) * detail::inner_m_sum(n, nf, ms);
  });
  return {pairwise_sum(partials), static_cast<std::uint64_t>(pairs), clock.seconds()};
}

inline PathResult s2_poisson(double x, double y, const SmoothWeight& phi, const SmoothWeight& w,
                             const TruncationPolicy& policy = {}) {
  detail::check_scales(x, y);
  validate(phi);
  validate(w);
  detail::Stopwatch clock;
  const auto ns = detail::moduli_in_support(y, phi, policy);
  if (ns.empty()) return {};
  const double t_cut = detail::kernel_cutoff(w, policy);
  const auto table = detail::kernel_table(w, policy);
  const auto ks = detail::dual_frequencies(x, norm(ns.back()), t_cut);
  std::vector<std::uint64_t> counts(ns.size(), 0);
  const auto partials = parallel_map<double>(ns.size(), policy.threads, [&](std::size_t i) {
    const auto& n = ns[i];
    const i64 nn = norm(n);
    const double phi_n = eval(phi, static_cast<double>(nn) / y);
    return phi_n * detail::dual_k_sum(factor(n), nn, x, ks, *table, t_cut, policy, counts[i]);
  });
  std::uint64_t terms = 0;
  for (auto c : counts) terms += c;
  return {x / 2.0 * pairwise_sum(partials), terms, clock.seconds()};
}

// k = 0 term: (X W~_i(0)/2) sum_{l primary} phi(l^2)/N(l)^2 Phi(N(l)^2/Y), since
// g2(0, n) vanishes unless n = l^2, where it equals phi(n).
inline double m0_term(double x, double y, const SmoothWeight& phi, const SmoothWeight& w) {
  detail::check_scales(x, y);
  validate(phi);
  validate(w);
  const double lmax = std::sqrt(phi.support_hi * y);
  std::vector<double> terms;
  for (const auto& l : primary_up_to(static_cast<i64>(std::floor(lmax)))) {
    const double nl2 = std::pow(static_cast<double>(norm(l)), 2);
    const double v = eval(phi, nl2 / y);
    if (v == 0.0) continue;
    const GaussianInt n = l * l;
    terms.push_back(static_cast<double>(hecke::phi(n)) / nl2 * v);
  }
  return x * w_tilde_radial(w, 0.0) / 2.0 * pairwise_sum(terms);
}

namespace detail {

struct ZetaPrimes {
  std::vector<u64> primes;
  u64 limit;
};

inline const ZetaPrimes& zeta_primes() {
  static const ZetaPrimes cache{arith::primes_up_to(20'000'000), 20'000'000};
  return cache;
}

}  // namespace detail

// Dedekind zeta of Q(i) for real s > 1: Euler product over Gaussian primes
// above p <= 2e7, with the tail sum_{p > P} (1 + chi_4(p)) p^-s ~
// P^{1-s} / ((s-1) log P) folded in.
inline double zeta_K(double s) {
  if (!(s > 1.0)) throw DomainError("zeta_K: s must exceed 1");
  const auto& zp = detail::zeta_primes();
  double log_sum = 0.0;
  for (u64 p : zp.primes) {
    const double ps = std::pow(static_cast<double>(p), -s);
    if (ps == 0.0) break;
    log_sum -= std::log1p(-ps);
    if (p % 4 == 1) log_sum -= std::log1p(-ps);
    else if (p % 4 == 3) log_sum -= std::log1p(ps);
  }
  const double pl = static_cast<double>(zp.limit);
  log_sum += std::pow(pl, 1.0 - s) / ((s - 1.0) * std::log(pl));
  return std::exp(log_sum);
}

struct MainTermCandidates {
  double paper_pointwise = 0.0;  // Phi(1/2) read as a point value
  double mellin_variant = 0.0;   // Phi(1/2) read as the Mellin value at 1/2
  double m0_direct = 0.0;

  std::map<std::string, double> as_map() const {
    return {{"paper_pointwise", paper_pointwise}, {"mellin_variant", mellin_variant}, {"m0_direct", m0_direct}};
  }
  // Which closed-form candidate is nearer to m0_direct.
  std::string closest() const {
    return std::abs(paper_pointwise - m0_direct) <= std::abs(mellin_variant - m0_direct) ? "paper_pointwise"
                                                                                         : "mellin_variant";
  }
};

// pi / (24 zeta_K(2)) * W~_i(0) * [Phi(1/2) or Phi^(1/2)] * X Y^{1/2}, and M0.
inline MainTermCandidates main_term_candidates(double x, double y, const SmoothWeight& phi, const SmoothWeight& w) {
  const double base =
      std::numbers::pi / (24.0 * zeta_K(2.0)) * w_tilde_radial(w, 0.0) * x * std::sqrt(y);
  MainTermCandidates c;
  c.paper_pointwise = base * eval(phi, 0.5);
  c.mellin_variant = base * mellin(phi, 0.5).real();
  c.m0_direct = m0_term(x, y, phi, w);
  return c;
}

enum class Method { kDirect, kPoisson, kBoth };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::kDirect: return "direct";
    case Method::kPoisson: return "poisson";
    case Method::kBoth: return "both";
  }
  return "";
}

inline Method method_from_string(const std::string& s) {
  if (s == "direct") return Method::kDirect;
  if (s == "poisson") return Method::kPoisson;
  if (s == "both") return Method::kBoth;
  throw DomainError("unknown method: " + s);
}

struct SumReport {
  double x = 0.0;
  double y = 0.0;
  SmoothWeight phi;
  SmoothWeight w;
  TruncationPolicy policy;
  Method method = Method::kPoisson;
  std::optional<PathResult> direct;
  std::optional<PathResult> poisson;
  double m0 = 0.0;
  MainTermCandidates candidates;

  // Poisson value when available.
  double s2() const { return poisson ? poisson->value : direct->value; }
  std::optional<double> discrepancy() const {
    if (!direct || !poisson) return std::nullopt;
    return std::abs(direct->value - poisson->value);
  }
  double ratio_s2_m0() const { return s2() / m0; }
  double envelope() const { return error_envelope(x, y); }
};

inline SumReport evaluate(double x, double y, const SmoothWeight& phi, const SmoothWeight& w, Method method,
                          const TruncationPolicy& policy = {}) {
  SumReport r;
  r.x = x;
  r.y = y;
  r.phi = phi;
  r.w = w;
  r.policy = policy;
  r.method = method;
  if (method != Method::kPoisson) r.direct = s2_direct(x, y, phi, w, policy);
  if (method != Method::kDirect) r.poisson = s2_poisson(x, y, phi, w, policy);
  r.candidates = main_term_candidates(x, y, phi, w);
  r.m0 = r.candidates.m0_direct;
  return r;
}

}  // namespace hecke
