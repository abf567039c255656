#pragma once

#include <cmath>
#include <ostream>

#include "hecke/arith.hpp"

namespace hecke {

// Exact a * sqrt(b) with b squarefree and positive; zero is (0, 1).
class SurdValue {
 public:
  SurdValue() = default;
  explicit SurdValue(arith::i64 integer) : a_(integer), b_(1) {}

  static SurdValue make(arith::i64 a, arith::i64 b) {
    if (b <= 0) throw DomainError("SurdValue: radicand must be positive");
    if (a == 0) return SurdValue();
    auto [s, f] = arith::split_square(static_cast<arith::u64>(b));
    SurdValue v;
    v.a_ = arith::checked_mul(a, s);
    v.b_ = f;
    return v;
  }

  arith::i64 coefficient() const { return a_; }
  arith::i64 radicand() const { return b_; }
  bool is_zero() const { return a_ == 0; }
  double to_double() const { return static_cast<double>(a_) * std::sqrt(static_cast<double>(b_)); }

  friend SurdValue operator*(const SurdValue& x, const SurdValue& y) {
    if (x.is_zero() || y.is_zero()) return SurdValue();
    // b1 b2 = g^2 (b1/g)(b2/g) and the cofactor is squarefree.
    const arith::i64 g = std::gcd(x.b_, y.b_);
    SurdValue v;
    v.a_ = arith::checked_mul(arith::checked_mul(x.a_, y.a_), g);
    v.b_ = arith::checked_mul(x.b_ / g, y.b_ / g);
    return v;
  }
  friend SurdValue operator-(const SurdValue& x) {
    SurdValue v = x;
    v.a_ = arith::checked_sub(0, v.a_);
    return v;
  }
  friend bool operator==(const SurdValue&, const SurdValue&) = default;

  friend std::ostream& operator<<(std::ostream& os, const SurdValue& v) {
    os << v.a_;
    if (v.b_ != 1) os << "*sqrt(" << v.b_ << ')';
    return os;
  }

 private:
  arith::i64 a_ = 0;
  arith::i64 b_ = 1;
};

}  // namespace hecke
