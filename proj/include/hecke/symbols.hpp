#pragma once

// Quartic and quadratic residue symbols in Z[i] via the Euler criterion.

#include <complex>
#include <cstdint>
#include <mutex>
#include <unordered_map>

#include "hecke/gint.hpp"

namespace hecke {

// A value in {0, 1, i, -1, -i}; nonzero values stored as the exponent of i.
class SymbolValue {
 public:
  static constexpr SymbolValue zero() { return SymbolValue(-1); }
  static constexpr SymbolValue i_pow(int k) { return SymbolValue(((k % 4) + 4) % 4); }
  static constexpr SymbolValue one() { return i_pow(0); }

  constexpr bool is_zero() const { return code_ < 0; }
  // Exponent of i; meaningless for zero.
  constexpr int exponent() const { return code_; }

  friend constexpr SymbolValue operator*(SymbolValue a, SymbolValue b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return i_pow(a.code_ + b.code_);
  }
  friend constexpr bool operator==(SymbolValue, SymbolValue) = default;

  constexpr SymbolValue pow(unsigned e) const {
    if (e == 0) return one();
    if (is_zero()) return zero();
    return i_pow(static_cast<int>((static_cast<unsigned>(code_) * (e % 4)) % 4));
  }
  constexpr SymbolValue conj() const { return is_zero() ? zero() : i_pow(-code_); }

  // Integer value for symbols in {0, 1, -1}; throws otherwise.
  int as_int() const {
    if (is_zero()) return 0;
    if (code_ == 0) return 1;
    if (code_ == 2) return -1;
    throw DomainError("symbol value is not real");
  }
  std::complex<double> as_complex() const {
    switch (code_) {
      case 0: return {1, 0};
      case 1: return {0, 1};
      case 2: return {-1, 0};
      case 3: return {0, -1};
      default: return {0, 0};
    }
  }

 private:
  constexpr explicit SymbolValue(int code) : code_(static_cast<std::int8_t>(code)) {}
  std::int8_t code_;
};

// (a / varpi)_4 for a primary prime varpi with odd norm.
inline SymbolValue quartic_prime(GaussianInt a, GaussianInt varpi) {
  const i64 nv = norm(varpi);
  if (nv % 2 == 0) throw DomainError("quartic_prime: modulus norm must be odd");
  if ((nv - 1) % 4 != 0) throw DomainError("quartic_prime: (N-1)/4 not integral");
  if (divides(varpi, a)) return SymbolValue::zero();
  GaussianInt r = modpow(a, static_cast<u64>((nv - 1) / 4), varpi);
  for (int k = 0; k < 4; ++k) {
    if (mod(kUnits[k], varpi) == r) return SymbolValue::i_pow(k);
  }
  throw DomainError("quartic_prime: no fourth root of unity matches (modulus not prime?)");
}

inline SymbolValue quadratic_prime(GaussianInt a, GaussianInt varpi) { return quartic_prime(a, varpi).pow(2); }

// (a / n) given the factorization of n's primary associate.
inline int quadratic_symbol(GaussianInt a, const Factorization& f) {
  if (f.ramified_exp != 0) throw DomainError("quadratic_symbol: modulus must have odd norm");
  SymbolValue v = SymbolValue::one();
  for (const auto& pp : f.factors) {
    v = v * quartic_prime(a, pp.prime).pow(2 * pp.exp);
    if (v.is_zero()) return 0;
  }
  return v.as_int();
}

// (a / n) = (a / n)_4^2, evaluated on the primary associate of n; (a / 1) = 1.
inline int quadratic_symbol(GaussianInt a, GaussianInt n) {
  if (n.is_zero() || norm(n) % 2 == 0) throw DomainError("quadratic_symbol: modulus must have odd norm");
  return quadratic_symbol(a, factor(to_primary(n).primary));
}

inline SymbolValue quartic_symbol(GaussianInt a, GaussianInt n) {
  if (n.is_zero() || norm(n) % 2 == 0) throw DomainError("quartic_symbol: modulus must have odd norm");
  SymbolValue v = SymbolValue::one();
  for (const auto& pp : factor(to_primary(n).primary).factors) v = v * quartic_prime(a, pp.prime).pow(pp.exp);
  return v;
}

// chi_k : n -> (k / n), memoizing factorizations of the moduli it sees.
class Character {
 public:
  explicit Character(GaussianInt k) : k_(k) {}

  GaussianInt numerator() const { return k_; }

  int operator()(GaussianInt n) const {
    if (n.is_zero() || norm(n) % 2 == 0) throw DomainError("character: modulus must have odd norm");
    GaussianInt p = to_primary(n).primary;
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(p); it != cache_.end()) return it->second;
    }
    int v = quadratic_symbol(k_, factor(p));
    std::lock_guard lock(mutex_);
    cache_.emplace(p, v);
    return v;
  }

 private:
  GaussianInt k_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<GaussianInt, int, GaussianIntHash> cache_;
};

inline Character chi(GaussianInt k) { return Character(k); }

}  // namespace hecke
