#include <gtest/gtest.h>

#include <random>

#include "dstab/errors.hpp"
#include "dstab/ffcurve.hpp"
#include "dstab/ratcurve.hpp"

using namespace dstab;

TEST(Ratcurve, DiscriminantExamples) {
  EXPECT_EQ(discriminant({1, 1}), -496);
  EXPECT_EQ(discriminant({0, 0}), 0);
  EXPECT_EQ(discriminant({-1, 0}), 64);
}

TEST(Ratcurve, DiscriminantOverflowReported) {
  const i128 huge = static_cast<i128>(1) << 50;
  EXPECT_THROW(discriminant({huge, 0}), OverflowError);
  EXPECT_THROW(height({huge, 0}), OverflowError);
}

TEST(Ratcurve, JInvariant) {
  EXPECT_EQ(j_invariant({0, 1}), Rational(0));
  EXPECT_EQ(j_invariant({1, 0}), Rational(1728));
  EXPECT_EQ(j_invariant({1, 1}), Rational(6912, 31));
  EXPECT_THROW(j_invariant({-3, 2}), InputError);
}

TEST(Ratcurve, Height) {
  EXPECT_EQ(height({2, 3}), 9);
  EXPECT_EQ(height({3, 1}), 27);
  EXPECT_EQ(height({0, 0}), 0);
  EXPECT_EQ(height({-4, 7}), 64);
}

TEST(Ratcurve, Minimality) {
  EXPECT_FALSE(is_globally_minimal({16, 64}));
  EXPECT_TRUE(is_globally_minimal({16, 32}));
  EXPECT_FALSE(is_globally_minimal({0, 64}));
  EXPECT_FALSE(is_globally_minimal({0, 0}));
  EXPECT_FALSE(is_globally_minimal({81 * 5, 0}));
  EXPECT_TRUE(is_globally_minimal({27, 0}));
  EXPECT_FALSE(is_globally_minimal({0, 729 * 2}));
  EXPECT_EQ(minimal_short_model({16 * 81, 64 * 729 * 5}), (WeierstrassPair{1, 5}));
}

TEST(Ratcurve, MinimalityMatchesNaiveScan) {
  for (i128 a = -200; a <= 200; ++a) {
    for (i128 b = -800; b <= 800; b += 7) {
      bool naive = !(a == 0 && b == 0);
      for (i128 l = 2; l <= 800 && naive; ++l) {
        const i128 l4 = l * l * l * l;
        if (a % l4 == 0 && b % (l4 * l * l) == 0) naive = false;
      }
      EXPECT_EQ(is_globally_minimal({a, b}), naive);
    }
  }
}

TEST(Ratcurve, Twist) {
  EXPECT_EQ(twist_minus_one({1, 1}), (WeierstrassPair{1, -1}));
  EXPECT_EQ(twist_minus_one({5, 0}), (WeierstrassPair{5, 0}));
  EXPECT_EQ(twist_minus_one(twist_minus_one({2, 3})), (WeierstrassPair{2, 3}));
}

TEST(Ratcurve, TwistPreservesInvariantsRandom) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    const WeierstrassPair e{static_cast<i128>(rng() % 2000001) - 1000000,
                            static_cast<i128>(rng() % 2000000001) - 1000000000};
    const WeierstrassPair t = twist_minus_one(e);
    EXPECT_EQ(discriminant(t), discriminant(e));
    EXPECT_EQ(height(t), height(e));
    if (disc_core(e) != 0) {
      EXPECT_EQ(j_invariant(t), j_invariant(e));
    }
  }
}

TEST(Ratcurve, OddPart) {
  EXPECT_EQ(odd_positive_part(-496), 31);
  EXPECT_EQ(odd_positive_part(64), 1);
  EXPECT_EQ(odd_positive_part(-432), 27);
  EXPECT_THROW(odd_positive_part(0), InputError);
}

TEST(Ratcurve, FactorExamples) {
  EXPECT_EQ(factor(496), (Factorization{{2, 4}, {31, 1}}));
  EXPECT_TRUE(factor(1).empty());
  EXPECT_EQ(factor(-391), (Factorization{{17, 1}, {23, 1}}));
  EXPECT_THROW(factor(0), InputError);
}

TEST(Ratcurve, FactorRecombinesRandom) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 3000; ++i) {
    i128 n;
    switch (i % 3) {
      case 0: n = static_cast<i128>(rng() >> (rng() % 60)); break;
      case 1: {
        // Product of two ~31-bit primes, the hard case for trial division.
        u64 p = (rng() >> 33) | 1, q = (rng() >> 33) | 1;
        while (!is_prime(p)) p += 2;
        while (!is_prime(q)) q += 2;
        n = static_cast<i128>(p) * static_cast<i128>(q);
        break;
      }
      default:
        // Beyond 64 bits with small factors stripped first.
        n = static_cast<i128>(rng() >> 4) * 2 * 3 * 5 * 7 * 11 * 13 * 64;
    }
    if (n == 0) continue;
    const Factorization f = factor(n, static_cast<std::uint64_t>(i));
    mpz_class prod = 1;
    for (std::size_t k = 0; k < f.size(); ++k) {
      EXPECT_TRUE(is_prime(f[k].prime));
      if (k > 0) {
        EXPECT_LT(f[k - 1].prime, f[k].prime);
      }
      for (int e = 0; e < f[k].exponent; ++e) prod *= mpz_class(static_cast<unsigned long>(f[k].prime));
    }
    EXPECT_EQ(prod, to_mpz(n)) << to_string(n);
  }
}

TEST(Ratcurve, FactorWideWithoutSmallFactorsIsIndeterminate) {
  // A prime near 2^40 times a prime near 2^50 exceeds 64 bits.
  u64 p = (u64{1} << 40) + 1, q = (u64{1} << 50) + 1;
  while (!is_prime(p)) p += 2;
  while (!is_prime(q)) q += 2;
  EXPECT_THROW(factor(static_cast<i128>(p) * static_cast<i128>(q)), IndeterminateError);
}

TEST(Ratcurve, SquarefreeAndDeterminism) {
  EXPECT_TRUE(is_squarefree(31));
  EXPECT_FALSE(is_squarefree(-27));
  EXPECT_EQ(factor(1000000016000000063LL, 1), factor(1000000016000000063LL, 2));
}

TEST(Ratcurve, SingularModEllIffEllDividesDiscriminant) {
  for (u64 ell : {3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    for (i128 a = -20; a <= 20; ++a) {
      for (i128 b = -20; b <= 20; ++b) {
        if (disc_core({a, b}) == 0) continue;
        const bool singular = !ff::FpCurve::reduce(a, b, ell).nonsingular();
        EXPECT_EQ(singular, mod_u64(discriminant({a, b}), ell) == 0);
      }
    }
  }
}
