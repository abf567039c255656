#pragma once

// Quadratic Gauss sums g2(r, n) for primary n: brute force over a residue
// system, and the exact prime-power closed form.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "hecke/gint.hpp"
#include "hecke/parallel.hpp"
#include "hecke/surd.hpp"
#include "hecke/symbols.hpp"

namespace hecke {

struct GaussSumValue {
  std::optional<SurdValue> exact;
  double value = 0.0;
};

// exp(2 pi i Im(num/den)) with the rational Im(num)/den reduced mod 1 first.
inline std::complex<double> e_tilde(GaussianInt num, i64 den) {
  if (den <= 0) throw DomainError("e_tilde: denominator must be positive");
  i64 r = num.im % den;
  if (r < 0) r += den;
  const double phase = 2.0 * std::numbers::pi * (static_cast<double>(r) / static_cast<double>(den));
  return {std::cos(phase), std::sin(phase)};
}

// Euler phi in Z[i]: size of (Z[i]/n)^*.
inline i64 phi(const Factorization& f) {
  i64 v = 1;
  if (f.ramified_exp > 0) v = arith::checked_pow(2, f.ramified_exp - 1);
  for (const auto& pp : f.factors) {
    const i64 np = norm(pp.prime);
    v = arith::checked_mul(v, arith::checked_mul(arith::checked_pow(np, pp.exp - 1), np - 1));
  }
  return v;
}

inline i64 phi(GaussianInt n) {
  if (n.is_zero()) throw DomainError("phi(0)");
  return phi(factor(n));
}

// g2(k, varpi^l) for l >= 1 where varpi^h exactly divides k (h empty means
// k = 0). `symbol` yields (i k varpi^-h / varpi) and is only called in the
// l = h+1 odd case.
template <typename SymbolFn>
SurdValue g2_prime_power(unsigned l, std::optional<unsigned> h, i64 prime_norm, SymbolFn&& symbol) {
  const bool inf = !h.has_value();
  const unsigned hv = inf ? 0 : *h;
  if (inf || l <= hv) {
    if (l % 2) return SurdValue();
    return SurdValue(arith::checked_mul(arith::checked_pow(prime_norm, l - 1), prime_norm - 1));
  }
  if (l == hv + 1) {
    const i64 base = arith::checked_pow(prime_norm, l - 1);
    if (l % 2 == 0) return SurdValue(-base);
    const int s = symbol();
    return SurdValue::make(arith::checked_mul(s, base), prime_norm);
  }
  return SurdValue();
}

// Closed form for primary n with known factorization.
inline GaussSumValue g2_closed(GaussianInt r, const Factorization& nf) {
  SurdValue v(1);
  for (const auto& pp : nf.factors) {
    std::optional<unsigned> h;
    if (!r.is_zero()) h = valuation(r, pp.prime);
    const SurdValue local = g2_prime_power(pp.exp, h, norm(pp.prime), [&] {
      GaussianInt unit_part = exact_div(r, pow(pp.prime, *h));
      return quadratic_prime(kI * unit_part, pp.prime).as_int();
    });
    v = v * local;
    if (v.is_zero()) break;
  }
  return {v, v.to_double()};
}

inline GaussSumValue g2_closed(GaussianInt r, GaussianInt n) {
  if (!is_primary(n)) throw DomainError("g2_closed: modulus must be primary");
  return g2_closed(r, factor(n));
}

// Definition: sum over x mod n of (x/n) e~(r x / n). Only the float part is set.
inline GaussSumValue g2_naive(GaussianInt r, GaussianInt n, i64 residue_bound = kDefaultResidueBound) {
  if (!is_primary(n)) throw DomainError("g2_naive: modulus must be primary");
  const auto nf = factor(n);
  const auto xs = residues(n, residue_bound);
  const i64 nn = norm(n);
  const GaussianInt nbar = conj(n);
  const GaussianInt rr = mod(r, n);  // e~ depends on r only mod n
  std::vector<std::complex<double>> terms;
  terms.reserve(xs.size());
  for (const auto& x : xs) {
    const int s = quadratic_symbol(x, nf);
    if (s == 0) continue;
    terms.push_back(static_cast<double>(s) * e_tilde(rr * x * nbar, nn));
  }
  const std::complex<double> total = pairwise_sum(terms);
  if (std::abs(total.imag()) > 1e-6 * static_cast<double>(nn))
    throw ConvergenceError("g2_naive: imaginary part is not negligible");
  return {std::nullopt, total.real()};
}

}  // namespace hecke
