#pragma once

// Exact arithmetic in Z[i] with checked 64-bit coordinates.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "hecke/arith.hpp"
#include "hecke/error.hpp"

namespace hecke {

using arith::i128;
using arith::i64;
using arith::u64;

struct GaussianInt {
  i64 re = 0;
  i64 im = 0;

  constexpr GaussianInt() = default;
  constexpr GaussianInt(i64 r, i64 i = 0) : re(r), im(i) {}  // NOLINT: implicit from integers

  friend constexpr bool operator==(const GaussianInt&, const GaussianInt&) = default;

  bool is_zero() const { return re == 0 && im == 0; }

  friend GaussianInt operator+(GaussianInt a, GaussianInt b) {
    return {arith::checked_add(a.re, b.re), arith::checked_add(a.im, b.im)};
  }
  friend GaussianInt operator-(GaussianInt a, GaussianInt b) {
    return {arith::checked_sub(a.re, b.re), arith::checked_sub(a.im, b.im)};
  }
  friend GaussianInt operator-(GaussianInt a) { return GaussianInt{0, 0} - a; }
  friend GaussianInt operator*(GaussianInt a, GaussianInt b) {
    i128 r = static_cast<i128>(a.re) * b.re - static_cast<i128>(a.im) * b.im;
    i128 i = static_cast<i128>(a.re) * b.im + static_cast<i128>(a.im) * b.re;
    return {arith::narrow(r), arith::narrow(i)};
  }
  GaussianInt& operator+=(GaussianInt o) { return *this = *this + o; }
  GaussianInt& operator-=(GaussianInt o) { return *this = *this - o; }
  GaussianInt& operator*=(GaussianInt o) { return *this = *this * o; }

  friend std::ostream& operator<<(std::ostream& os, const GaussianInt& z) {
    return os << '(' << z.re << (z.im < 0 ? "" : "+") << z.im << "i)";
  }
};

inline constexpr GaussianInt kI{0, 1};
inline constexpr GaussianInt kOnePlusI{1, 1};
inline constexpr std::array<GaussianInt, 4> kUnits{GaussianInt{1, 0}, GaussianInt{0, 1}, GaussianInt{-1, 0},
                                                   GaussianInt{0, -1}};

inline GaussianInt conj(GaussianInt z) { return {z.re, arith::checked_sub(0, z.im)}; }

inline i64 norm(GaussianInt z) {
  i128 n = static_cast<i128>(z.re) * z.re + static_cast<i128>(z.im) * z.im;
  return arith::narrow(n);
}

inline bool is_unit(GaussianInt z) { return norm(z) == 1; }

inline std::string to_string(GaussianInt z) {
  return std::to_string(z.re) + (z.im < 0 ? "" : "+") + std::to_string(z.im) + "i";
}

// Deterministic total order used for canonical listings: (norm, re, im).
struct NormOrder {
  bool operator()(const GaussianInt& a, const GaussianInt& b) const {
    i64 na = norm(a), nb = norm(b);
    if (na != nb) return na < nb;
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  }
};

struct GaussianIntHash {
  std::size_t operator()(const GaussianInt& z) const noexcept {
    return std::hash<i64>{}(z.re) * 0x9E3779B97F4A7C15ULL ^ std::hash<i64>{}(z.im);
  }
};

struct DivRem {
  GaussianInt quot;
  GaussianInt rem;
};

// a = q*b + r with q = floor(a*conj(b)/N(b) + 1/2) per coordinate, so N(r) <= N(b)/2.
inline DivRem divrem(GaussianInt a, GaussianInt b) {
  if (b.is_zero()) throw DomainError("divrem: division by zero");
  const i128 nb = norm(b);
  const i128 xr = static_cast<i128>(a.re) * b.re + static_cast<i128>(a.im) * b.im;
  const i128 xi = static_cast<i128>(a.im) * b.re - static_cast<i128>(a.re) * b.im;
  GaussianInt q{arith::narrow(arith::floor_div(2 * xr + nb, 2 * nb)),
                arith::narrow(arith::floor_div(2 * xi + nb, 2 * nb))};
  return {q, a - q * b};
}

// Canonical representative of a mod n (the divrem remainder). Congruent inputs
// map to the same value.
inline GaussianInt mod(GaussianInt a, GaussianInt n) { return divrem(a, n).rem; }

inline bool divides(GaussianInt d, GaussianInt a) {
  if (d.is_zero()) return a.is_zero();
  const i128 nd = norm(d);
  const i128 xr = static_cast<i128>(a.re) * d.re + static_cast<i128>(a.im) * d.im;
  const i128 xi = static_cast<i128>(a.im) * d.re - static_cast<i128>(a.re) * d.im;
  return xr % nd == 0 && xi % nd == 0;
}

// a / d, which must be exact.
inline GaussianInt exact_div(GaussianInt a, GaussianInt d) {
  if (d.is_zero()) throw DomainError("exact_div: division by zero");
  const i128 nd = norm(d);
  const i128 xr = static_cast<i128>(a.re) * d.re + static_cast<i128>(a.im) * d.im;
  const i128 xi = static_cast<i128>(a.im) * d.re - static_cast<i128>(a.re) * d.im;
  if (xr % nd != 0 || xi % nd != 0) throw DomainError("exact_div: not divisible");
  return {arith::narrow(xr / nd), arith::narrow(xi / nd)};
}

// Largest h with d^h | a; a must be nonzero and d a non-unit.
inline unsigned valuation(GaussianInt a, GaussianInt d) {
  if (a.is_zero()) throw DomainError("valuation of zero");
  unsigned h = 0;
  while (divides(d, a)) {
    a = exact_div(a, d);
    ++h;
  }
  return h;
}

inline GaussianInt pow(GaussianInt a, unsigned e) {
  GaussianInt r{1, 0};
  while (e) {
    if (e & 1) r *= a;
    e >>= 1;
    if (e) a *= a;
  }
  return r;
}

// Primary means congruent to 1 modulo (1+i)^3 = -2+2i; tested by exact division.
inline bool is_primary(GaussianInt n) {
  static constexpr GaussianInt kCube{-2, 2};
  return divides(kCube, n - GaussianInt{1, 0});
}

// Arithmetic characterization: re odd, im even, re + im = 1 mod 4.
inline bool is_primary_fast(GaussianInt n) {
  if ((n.re & 1) == 0 || (n.im & 1) != 0) return false;
  i64 s = (n.re % 4 + n.im % 4) % 4;
  if (s < 0) s += 4;
  return s == 1;
}

struct UnitPrimary {
  GaussianInt unit;
  GaussianInt primary;
};

// n = unit * primary with primary = 1 mod (1+i)^3. Requires N(n) odd.
inline UnitPrimary to_primary(GaussianInt n) {
  if (n.is_zero() || norm(n) % 2 == 0) throw DomainError("to_primary: norm must be odd");
  int found = 0;
  UnitPrimary out;
  for (GaussianInt u : kUnits) {
    // candidate primary = conj(u) * n, since u^-1 = conj(u)
    GaussianInt cand = conj(u) * n;
    if (is_primary(cand)) {
      out = {u, cand};
      ++found;
    }
  }
  if (found != 1) throw DomainError("to_primary: no unique primary associate");
  return out;
}

struct GcdResult {
  GaussianInt value;
  unsigned steps;
};

inline GaussianInt canonical_associate(GaussianInt z);

// Euclidean gcd, canonicalized as (1+i)^e times a primary odd part.
inline GcdResult gcd_with_steps(GaussianInt a, GaussianInt b) {
  if (a.is_zero() && b.is_zero()) throw DomainError("gcd(0, 0)");
  unsigned steps = 0;
  while (!b.is_zero()) {
    GaussianInt r = divrem(a, b).rem;
    a = b;
    b = r;
    ++steps;
  }
  return {canonical_associate(a), steps};
}

inline GaussianInt gcd(GaussianInt a, GaussianInt b) { return gcd_with_steps(a, b).value; }

// The associate (1+i)^e * primary of a nonzero z.
inline GaussianInt canonical_associate(GaussianInt z) {
  if (z.is_zero()) throw DomainError("canonical_associate(0)");
  unsigned e = valuation(z, kOnePlusI);
  GaussianInt odd = exact_div(z, pow(kOnePlusI, e));
  return pow(kOnePlusI, e) * to_primary(odd).primary;
}

struct PrimePower {
  GaussianInt prime;
  unsigned exp;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  GaussianInt unit{1, 0};
  unsigned ramified_exp = 0;
  std::vector<PrimePower> factors;  // odd primary primes, sorted by (norm, re)

  GaussianInt value() const {
    GaussianInt v = unit * pow(kOnePlusI, ramified_exp);
    for (const auto& pp : factors) v *= pow(pp.prime, pp.exp);
    return v;
  }
};

inline constexpr i64 kDefaultFactorNormBound = (i64{1} << 62);

namespace detail {

// Primary Gaussian prime with positive imaginary part lying over p = 1 mod 4.
inline GaussianInt split_prime_over(u64 p) {
  thread_local std::unordered_map<u64, GaussianInt> cache;
  if (auto it = cache.find(p); it != cache.end()) return it->second;
  u64 c = 2;
  while (arith::powmod(c, (p - 1) / 2, p) != p - 1) ++c;
  u64 x = arith::powmod(c, (p - 1) / 4, p);
  // gcd(p, x+i) without canonicalization
  GaussianInt a{static_cast<i64>(p), 0}, b{static_cast<i64>(x), 1};
  while (!b.is_zero()) {
    GaussianInt r = divrem(a, b).rem;
    a = b;
    b = r;
  }
  GaussianInt pi = to_primary(a).primary;
  if (pi.im < 0) pi = conj(pi);
  cache.emplace(p, pi);
  return pi;
}

}  // namespace detail

// Factorization over the fixed generator set: 1+i, primary primes for odd
// ideals (split primes listed for both conjugates, inert p as -p).
inline Factorization factor(GaussianInt n, i64 norm_bound = kDefaultFactorNormBound) {
  if (n.is_zero()) throw DomainError("factor(0)");
  const i64 nn = norm(n);
  if (nn > norm_bound) throw BudgetError("factor: norm exceeds factoring bound");
  Factorization f;
  GaussianInt rest = n;
  for (auto [p, e] : arith::factor(static_cast<u64>(nn))) {
    if (p == 2) {
      f.ramified_exp = e;
      rest = exact_div(rest, pow(kOnePlusI, e));
    } else if (p % 4 == 3) {
      GaussianInt q{-static_cast<i64>(p), 0};
      rest = exact_div(rest, pow(q, e / 2));
      f.factors.push_back({q, e / 2});
    } else {
      GaussianInt pi = detail::split_prime_over(p);
      for (GaussianInt q : {pi, conj(pi)}) {
        unsigned a = 0;
        while (a < e && divides(q, rest)) {
          rest = exact_div(rest, q);
          ++a;
        }
        if (a) f.factors.push_back({q, a});
        e -= a;
      }
    }
  }
  if (!is_unit(rest)) throw DomainError("factor: internal error, cofactor is not a unit");
  f.unit = rest;
  std::sort(f.factors.begin(), f.factors.end(), [](const PrimePower& x, const PrimePower& y) {
    i64 nx = norm(x.prime), ny = norm(y.prime);
    if (nx != ny) return nx < ny;
    return x.prime.re != y.prime.re ? x.prime.re < y.prime.re : x.prime.im < y.prime.im;
  });
  return f;
}

inline constexpr i64 kDefaultResidueBound = 1'000'000;

// A complete residue system mod n: the canonical reductions, sorted by NormOrder.
inline std::vector<GaussianInt> residues(GaussianInt n, i64 bound = kDefaultResidueBound) {
  if (n.is_zero()) throw DomainError("residues: zero modulus");
  const i64 nn = norm(n);
  if (nn > bound) throw BudgetError("residues: norm exceeds bound");
  const i64 r = static_cast<i64>(std::ceil(std::sqrt(static_cast<double>(nn)))) + 1;
  std::vector<GaussianInt> out;
  out.reserve(static_cast<std::size_t>((2 * r + 1) * (2 * r + 1)));
  for (i64 x = -r; x <= r; ++x)
    for (i64 y = -r; y <= r; ++y) out.push_back(mod(GaussianInt{x, y}, n));
  std::sort(out.begin(), out.end(), NormOrder{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (static_cast<i64>(out.size()) != nn) throw DomainError("residues: box scan missed a class");
  return out;
}

inline GaussianInt modpow(GaussianInt a, u64 e, GaussianInt n) {
  GaussianInt result = mod(GaussianInt{1, 0}, n);
  a = mod(a, n);
  while (e) {
    if (e & 1) result = mod(result * a, n);
    e >>= 1;
    if (e) a = mod(a * a, n);
  }
  return result;
}

// All z with N(z) <= max_norm, sorted by NormOrder.
inline std::vector<GaussianInt> gaussian_ints_up_to(i64 max_norm) {
  std::vector<GaussianInt> out;
  if (max_norm < 0) return out;
  const i64 r = static_cast<i64>(std::floor(std::sqrt(static_cast<double>(max_norm)))) + 1;
  for (i64 x = -r; x <= r; ++x)
    for (i64 y = -r; y <= r; ++y)
      if (x * x + y * y <= max_norm) out.push_back({x, y});
  std::sort(out.begin(), out.end(), NormOrder{});
  return out;
}

// Primary elements with N(n) <= max_norm, sorted by NormOrder.
inline std::vector<GaussianInt> primary_up_to(i64 max_norm) {
  std::vector<GaussianInt> out;
  if (max_norm < 1) return out;
  const i64 r = static_cast<i64>(std::floor(std::sqrt(static_cast<double>(max_norm)))) + 1;
  for (i64 x = -r; x <= r; ++x)
    for (i64 y = -r; y <= r; ++y) {
      GaussianInt z{x, y};
      if (x * x + y * y <= max_norm && is_primary_fast(z)) out.push_back(z);
    }
  std::sort(out.begin(), out.end(), NormOrder{});
  return out;
}

}  // namespace hecke
