#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "hecke/gauss_sum.hpp"

using namespace hecke;

namespace {

// Definition summed over a box of representatives, with phases from
// Im(r x / n) taken in floating point; no residue reduction of r.
double gauss_sum_box(GaussianInt r, GaussianInt n) {
  const auto nf = factor(n);
  std::complex<double> total = 0.0;
  for (const auto& x : residues(n)) {
    const int s = quadratic_symbol(x, nf);
    if (!s) continue;
    const std::complex<double> z = std::complex<double>(static_cast<double>(r.re), static_cast<double>(r.im)) *
                                   std::complex<double>(static_cast<double>(x.re), static_cast<double>(x.im)) /
                                   std::complex<double>(static_cast<double>(n.re), static_cast<double>(n.im));
    total += static_cast<double>(s) * std::polar(1.0, 2.0 * std::numbers::pi * z.imag());
  }
  return total.real();
}

}  // namespace

TEST(GaussSum, ETilde) {
  EXPECT_NEAR(std::abs(e_tilde({5, 0}, 3) - std::complex<double>(1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e_tilde(kI, 1) - std::complex<double>(1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e_tilde(kI, 4) - std::complex<double>(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e_tilde({0, -3}, 4) - std::complex<double>(0, 1)), 0.0, 1e-15);
  EXPECT_THROW(e_tilde(kI, 0), DomainError);
}

TEST(GaussSum, NaiveExamples) {
  EXPECT_DOUBLE_EQ(g2_naive(1, 1).value, 1.0);
  EXPECT_NEAR(g2_naive(1, {-1, 2}).value, -std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(g2_naive(0, {-1, 2}).value, 0.0, 1e-12);
  EXPECT_FALSE(g2_naive(1, {-1, 2}).exact.has_value());
  EXPECT_THROW(g2_naive(1, 3), DomainError);
}

TEST(GaussSum, ClosedExamples) {
  const GaussianInt p{-1, 2};
  EXPECT_EQ(*g2_closed(0, p * p).exact, SurdValue(20));
  EXPECT_EQ(*g2_closed(1, p).exact, SurdValue::make(-1, 5));
  EXPECT_EQ(*g2_closed(p, p * p).exact, SurdValue(-5));
  EXPECT_EQ(*g2_closed(p * p, p).exact, SurdValue(0));
  EXPECT_EQ(*g2_closed(1, p * p * p).exact, SurdValue(0));
  EXPECT_EQ(*g2_closed(5, 1).exact, SurdValue(1));
}

TEST(GaussSum, Phi) {
  EXPECT_EQ(phi(1), 1);
  EXPECT_EQ(phi(GaussianInt{-1, 2}), 4);
  EXPECT_EQ(phi(GaussianInt{-1, 2} * GaussianInt{-1, 2}), 20);
  EXPECT_EQ(phi(2), 2);
  for (const auto& n : primary_up_to(400)) {
    i64 units = 0;
    for (const auto& x : residues(n)) units += is_unit(gcd(x, n)) || (x.is_zero() && is_unit(n));
    EXPECT_EQ(phi(n), units) << n;
  }
}

TEST(GaussSum, ClosedMatchesBoxSum) {
  for (const auto& n : primary_up_to(400)) {
    const auto nf = factor(n);
    for (const auto& r : gaussian_ints_up_to(8)) {
      ASSERT_NEAR(g2_closed(r, nf).value, gauss_sum_box(r, n), 1e-8 * static_cast<double>(norm(n))) << r << n;
    }
  }
}

TEST(GaussSum, MultiplicativeInModulus) {
  const auto ns = primary_up_to(150);
  for (std::size_t i = 1; i < ns.size(); ++i)
    for (std::size_t j = i; j < ns.size(); ++j) {
      if (!is_unit(gcd(ns[i], ns[j]))) continue;
      for (GaussianInt k : {GaussianInt{0}, GaussianInt{1}, GaussianInt{3, -2}, ns[i], ns[j] * ns[j]})
        EXPECT_EQ(*g2_closed(k, ns[i] * ns[j]).exact, *g2_closed(k, ns[i]).exact * *g2_closed(k, ns[j]).exact);
    }
}

TEST(GaussSum, TrivialBound) {
  for (const auto& n : primary_up_to(1500))
    for (GaussianInt k : {GaussianInt{0}, GaussianInt{1}, kOnePlusI, n, GaussianInt{7, 4}})
      EXPECT_LE(std::abs(g2_closed(k, n).value), static_cast<double>(norm(n)));
}

TEST(GaussSum, UnitSquareIndependence) {
  for (const auto& n : primary_up_to(600))
    for (GaussianInt k2 : {GaussianInt{2, 1}, GaussianInt{1}, GaussianInt{3}})
      for (auto u : kUnits) {
        const GaussianInt k1{-1, 2};
        EXPECT_EQ(*g2_closed(k1 * k2 * k2, n).exact, *g2_closed(k1 * (u * k2) * (u * k2), n).exact);
      }
}

TEST(GaussSum, TwistIdentity) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<i64> d(-60, 60);
  const auto ns = primary_up_to(3000);
  std::uniform_int_distribution<std::size_t> pick(0, ns.size() - 1);
  int done = 0;
  while (done < 300) {
    const GaussianInt r{d(rng), d(rng)}, s{d(rng), d(rng)}, n = ns[pick(rng)];
    if (s.is_zero() || !is_unit(gcd(s, n))) continue;
    ++done;
    EXPECT_EQ(*g2_closed(r * s, n).exact, *g2_closed(r, n).exact * SurdValue(quadratic_symbol(s, n)));
  }
}

TEST(GaussSum, NaiveEqualsClosedOnSmallModuli) {
  for (const auto& n : primary_up_to(300)) {
    for (const auto& k : gaussian_ints_up_to(5)) {
      ASSERT_NEAR(g2_naive(k, n).value, g2_closed(k, n).value, 1e-9 * static_cast<double>(norm(n)));
    }
  }
}
