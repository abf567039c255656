#include <gtest/gtest.h>

#include <cmath>

#include "hecke/series.hpp"

using namespace hecke;

namespace {

const SeriesCaps kSmall{200, 2000, 20000, 20000};

// The defining double sum with g2 evaluated pair by pair.
cplx j_pairwise(GaussianInt k1, cplx v, cplx w, i64 ncap, i64 kcap) {
  cplx total = 0.0;
  for (const auto& n : primary_up_to(ncap)) {
    const double nn = static_cast<double>(norm(n));
    for (const auto& z : gaussian_ints_up_to(kcap)) {
      if (z.re <= 0 || z.im < 0) continue;
      const GaussianInt k2 = canonical_associate(z);
      total += norm_power(nn, w) * norm_power(static_cast<double>(norm(k2)), v) * g2_closed(k1 * k2 * k2, n).value / nn;
    }
  }
  return total;
}

}  // namespace

TEST(Series, TruncatedMatchesPairwiseSum) {
  for (GaussianInt k1 : {GaussianInt{0, -1}, GaussianInt{-1, 2}, GaussianInt{3}}) {
    const auto r = j_truncated({k1, 2.0, cplx(2.0, 0.5), {60, 300, 0, 0}});
    const cplx oracle = j_pairwise(k1, 2.0, cplx(2.0, 0.5), 60, 300);
    EXPECT_LT(std::abs(r.value - oracle), 1e-13) << k1;
  }
}

TEST(Series, TrivialModulusAndGenerator) {
  // Caps of 1 leave n = 1 and k2 = 1 only.
  EXPECT_NEAR(std::abs(j_truncated({kI, 2.0, 2.0, {1, 1, 0, 0}}).value - 1.0), 0.0, 1e-15);
  // With k2 = 1 only, the n-sum is 1 + terms at n != 1.
  const auto r = j_truncated({{-1, 2}, 2.0, 2.0, {10, 1, 0, 0}});
  cplx expect = 1.0;
  for (const auto& n : primary_up_to(10))
    if (norm(n) > 1)
      expect += g2_closed({-1, 2}, n).value / static_cast<double>(norm(n)) * norm_power(static_cast<double>(norm(n)), 2.0);
  EXPECT_NEAR(std::abs(r.value - expect), 0.0, 1e-15);
}

TEST(Series, CapDoublingStaysWithinTail) {
  for (GaussianInt k1 : {GaussianInt{0, -1}, GaussianInt{-3}}) {
    const auto a = j_truncated({k1, 2.0, 2.0, {200, 2000, 0, 0}});
    const auto b = j_truncated({k1, 2.0, 2.0, {400, 4000, 0, 0}});
    EXPECT_LE(std::abs(a.value - b.value), a.tail);
    EXPECT_LT(b.tail, a.tail);
  }
}

TEST(Series, GeneratorChoiceDoesNotMatter) {
  for (GaussianInt k1 : {GaussianInt{1}, GaussianInt{0, 1}, GaussianInt{-1, 2}}) {
    const SeriesPoint p{k1, 1.5, 1.5, {300, 5000, 0, 0}};
    const cplx a = j_truncated(p, GeneratorChoice::kPrimary).value;
    const cplx b = j_truncated(p, GeneratorChoice::kRotated).value;
    EXPECT_LT(std::abs(a - b), 1e-12 * std::abs(a));
  }
}

TEST(Series, MinusOneTimesK1LeavesJUnchanged) {
  for (GaussianInt k1 : {GaussianInt{1}, GaussianInt{0, 1}, GaussianInt{-1, 2}, GaussianInt{3}}) {
    const cplx a = j_truncated({k1, 2.0, 2.0, kSmall}).value;
    const cplx b = j_truncated({-k1, 2.0, 2.0, kSmall}).value;
    EXPECT_EQ(a, b);
  }
}

TEST(Series, Preconditions) {
  EXPECT_THROW(j_truncated({9, 2.0, 2.0, kSmall}), DomainError);
  EXPECT_THROW(j_truncated({1, 1.1, 2.0, kSmall}), DomainError);
  EXPECT_THROW(l_hecke_truncated(1.0, 1, 100), DomainError);
  EXPECT_THROW(j_gen_factor({-1, 2}, {-1, 2}, 2.0, 2.0), DomainError);
  EXPECT_THROW(j_gen_factor({-1, 2}, 1, 0.5, 2.0), DomainError);
  EXPECT_TRUE(is_squarefree({-1, 2}));
  EXPECT_FALSE(is_squarefree(2));
  EXPECT_TRUE(is_squarefree(kOnePlusI * 3));
}

TEST(Series, LFunctionPrincipalCase) {
  const GaussianInt k1{0, -1};
  EXPECT_TRUE(chi_is_principal(k1));
  const auto l = l_hecke_truncated(2.0, k1, 200000);
  // Euler product over odd Gaussian primes.
  double euler = 1.0;
  for (const auto& q : odd_primes_up_to(20000000)) euler /= 1.0 - std::pow(static_cast<double>(norm(q)), -2.0);
  EXPECT_NEAR(l.value.real(), euler, l.tail + 1e-7);
  EXPECT_NEAR(l.value.real(), zeta_K(2.0) * 0.75, l.tail + 1e-8);
  for (GaussianInt other : {GaussianInt{1}, GaussianInt{-1, 2}, GaussianInt{3}}) {
    EXPECT_FALSE(chi_is_principal(other));
    EXPECT_LT(std::abs(l_hecke_truncated(2.0, other, 20000).value), l.value.real());
  }
}

TEST(Series, LFunctionCapDoubling) {
  const auto a = l_hecke_truncated(cplx(1.5, 2.0), {-1, 2}, 5000);
  const auto b = l_hecke_truncated(cplx(1.5, 2.0), {-1, 2}, 10000);
  EXPECT_LE(std::abs(a.value - b.value), a.tail);
}

TEST(Series, GenericFactorMatchesDirectLocalSum) {
  for (const auto& q : odd_primes_up_to(200))
    for (GaussianInt k1 : {GaussianInt{1}, GaussianInt{0, -1}, GaussianInt{-1, 2}, GaussianInt{3, 2}}) {
      if (divides(q, k1)) continue;
      for (auto [v, w] : {std::pair{cplx(2.0), cplx(2.0)}, std::pair{cplx(0.8, 1.0), cplx(0.3, -2.0)}}) {
        EXPECT_LT(std::abs(j_gen_factor(q, k1, v, w) - detail::j_local_direct(q, k1, v, w)), 1e-13);
      }
    }
}

TEST(Series, LocalSumMatchesGaussSums) {
  // Partial local sums against g2_closed at the prime powers themselves.
  const GaussianInt q{-1, 2};
  for (GaussianInt k1 : {GaussianInt{1}, GaussianInt{-1, 2}}) {
    cplx direct = 0.0;
    const double nd = 5.0;
    for (unsigned j = 0; j < 12; ++j)
      for (unsigned l = 0; l < 26; ++l) {
        const double g = g2_closed(k1 * pow(q, 2 * j), pow(q, l)).value;
        direct += std::pow(nd, -2.0 * l - 2.0 * j) * g / std::pow(nd, static_cast<double>(l));
      }
    EXPECT_NEAR(std::abs(detail::j_local_direct(q, k1, 2.0, 2.0) - direct), 0.0, 1e-14);
  }
}

TEST(Series, ZeroFrequencyTermOfGenericFactor) {
  for (const auto& q : odd_primes_up_to(100)) {
    const GaussianInt k1{-1, 2};
    if (divides(q, k1)) continue;
    const double nd = static_cast<double>(norm(q));
    const cplx w(0.6, 1.0);
    // A huge v kills every k2 >= 1 term.
    const cplx got = j_gen_factor(q, k1, 200.0, w);
    const cplx expect = 1.0 + static_cast<double>(chi_ik1(k1, q)) * norm_power(nd, 0.5 + w);
    EXPECT_LT(std::abs(got - expect), 1e-15);
  }
}

// Terms with k2 >= 1 are O(N^{-(1+2e)}) at Re v = 1 + 2e, Re w = e.
TEST(Series, HigherTermsOfGenericFactorAreSmall) {
  const double e = 0.25;
  double worst = 0.0;
  for (const auto& q : odd_primes_up_to(5000)) {
    const GaussianInt k1{3};
    if (divides(q, k1)) continue;
    const double nd = static_cast<double>(norm(q));
    const cplx rest = j_gen_factor(q, k1, 1.0 + 2 * e, e) - 1.0 -
                      static_cast<double>(chi_ik1(k1, q)) * norm_power(nd, 0.5 + e);
    worst = std::max(worst, std::abs(rest) * std::pow(nd, 1.0 + 2 * e));
  }
  EXPECT_LT(worst, 3.0);
}

TEST(Series, RamifiedFactor) {
  EXPECT_NEAR(std::abs(j_ramified_factor(2.0) - 4.0 / 3.0), 0.0, 1e-15);
}

TEST(Series, PrincipalGenericFactorSpecializes) {
  const GaussianInt k1{0, -1};
  for (const auto& q : odd_primes_up_to(50)) {
    const double nd = static_cast<double>(norm(q));
    EXPECT_EQ(chi_ik1(k1, q), 1);
    const cplx expect = (1.0 - norm_power(nd, 2.5)) * j_gen_factor(q, k1, 2.0, 2.0);
    const cplx got = (1.0 - static_cast<double>(chi_ik1(k1, q)) * norm_power(nd, 2.5)) * j_gen_factor(q, k1, 2.0, 2.0);
    EXPECT_EQ(got, expect);
  }
}

TEST(Series, J2CapDoubling) {
  for (GaussianInt k1 : {GaussianInt{0, -1}, GaussianInt{-1, 2}}) {
    const auto a = j2(k1, 2.0, 2.0, 100000);
    const auto b = j2(k1, 2.0, 2.0, 200000);
    EXPECT_LT(std::abs(a.value - b.value), 1e-6);
    EXPECT_LE(std::abs(a.value - b.value), a.rel_tail * std::abs(a.value));
  }
}

TEST(Series, J2StaysBounded) {
  double worst = 0.0;
  for (GaussianInt k1 : {GaussianInt{1}, GaussianInt{-1, 2}, GaussianInt{-3}, GaussianInt{-1, 2} * GaussianInt{-3},
                         GaussianInt{-1, 2} * GaussianInt{-3} * GaussianInt{3, 2} * GaussianInt{-7}}) {
    const double a = std::abs(j2(k1, 1.5, 1.5, 100000).value);
    worst = std::max(worst, a / std::pow(1.0 + static_cast<double>(norm(k1)), 0.01));
  }
  EXPECT_LT(worst, 3.0);
}

TEST(Series, FactorizationIdentityAtSmallCaps) {
  for (GaussianInt k1 : {GaussianInt{0, -1}, GaussianInt{-1, 2}}) {
    const auto r = verify_factorization(k1, 2.0, 2.0, {400, 4000, 100000, 20000});
    EXPECT_TRUE(r.within_budget) << k1 << " delta " << r.delta << " budget " << r.budget;
    EXPECT_LT(r.rel_delta, 1e-2);
  }
}

TEST(Series, FactorizationIdentityFailsForWrongCharacter) {
  // Swapping in the L-series of a different character must break the identity.
  const GaussianInt k1{-1, 2};
  const SeriesCaps caps{400, 4000, 100000, 20000};
  const auto j = j_truncated({k1, 2.0, 2.0, caps});
  const auto wrong = l_hecke_truncated(2.5, GaussianInt{3}, caps.l_norm_cap).value * j2(k1, 2.0, 2.0, 100000).value;
  const auto r = verify_factorization(k1, 2.0, 2.0, caps);
  EXPECT_GT(std::abs(j.value - wrong), r.budget);
}
