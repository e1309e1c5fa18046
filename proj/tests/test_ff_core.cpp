#include <gtest/gtest.h>

#include "pvs/histogram.hpp"
#include "pvs/modular.hpp"
#include "pvs/rational.hpp"

using namespace pvs;

TEST(Crt, CombinesTwoResidues) {
  const auto r = crt_combine({{2, 3}, {3, 5}});
  EXPECT_EQ(r.value, 8);
  EXPECT_EQ(r.modulus, 15);
}

TEST(Crt, ZeroResidues) {
  const auto r = crt_combine({{0, 3}, {0, 5}});
  EXPECT_EQ(r.value, 0);
  EXPECT_EQ(r.modulus, 15);
}

TEST(Crt, IdentityResidues) {
  const auto r = crt_combine({{1, 3}, {1, 5}, {1, 7}});
  EXPECT_EQ(r.value, 1);
  EXPECT_EQ(r.modulus, 105);
}

TEST(Crt, OrderDoesNotMatter) {
  const auto a = crt_combine({{4, 7}, {2, 3}, {3, 5}});
  const auto b = crt_combine({{2, 3}, {3, 5}, {4, 7}});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.value % 7, 4);
}

TEST(Crt, NonCoprimeModuliRejected) {
  try {
    crt_combine({{1, 6}, {1, 9}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_modulus);
  }
}

TEST(ModulusType, Factorization) {
  Modulus q(105);
  EXPECT_EQ(q.primes(), (std::vector<i64>{3, 5, 7}));
  EXPECT_THROW(Modulus(12), Error);
  EXPECT_THROW(Modulus(0), Error);
  EXPECT_EQ(Modulus::from_primes({7, 3}).value(), 21);
}

TEST(Modular, Basics) {
  EXPECT_EQ(mod(-1, 5), 4);
  EXPECT_EQ(inv_mod(3, 7), 5);
  EXPECT_THROW(inv_mod(3, 9), Error);
  EXPECT_TRUE(is_prime(1000003));
  EXPECT_FALSE(is_prime(561));
  EXPECT_EQ(primitive_root(7), 3);
  EXPECT_EQ(mobius(30), -1);
  EXPECT_EQ(mobius(12), 0);
  const auto mu = mobius_table(30);
  for (i64 n = 1; n <= 30; ++n) EXPECT_EQ(mu[static_cast<std::size_t>(n)], mobius(n)) << n;
}

TEST(HistogramFt, UniformSupportGivesZero) {
  PairingHistogram h(3);
  h.counts = {27, 27, 27};
  EXPECT_EQ(ft_value_from_histogram(h, 4), Rational(0));
}

TEST(HistogramFt, DeltaAtZeroFrequency) {
  PairingHistogram h(3);
  h.counts = {81, 0, 0};
  EXPECT_EQ(ft_value_from_histogram(h, 4), Rational(1));
}

TEST(HistogramFt, NonInvariantSupportRejected) {
  PairingHistogram h(5);
  h.counts = {1, 2, 2, 3, 2};
  try {
    ft_value_from_histogram(h, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::non_invariant_support);
  }
}

TEST(HistogramFt, CompositeModulusUsesGcdClasses) {
  // Support = {0} in (Z/15)^1: the transform is 1/15 at every frequency.
  PairingHistogram h(15);
  h.add(0);
  EXPECT_EQ(ft_value_from_histogram(h, 1), Rational(1, 15));
  // Support = all of Z/15 paired with y = 1: each class hit once, transform 0.
  PairingHistogram u(15);
  for (i64 k = 0; k < 15; ++k) u.add(k);
  EXPECT_EQ(ft_value_from_histogram(u, 1), Rational(0));
}

TEST(HistogramFt, DenominatorDividesPowerOfModulus) {
  PairingHistogram h(7);
  h.counts = {10, 3, 3, 3, 3, 3, 3};
  const Rational v = ft_value_from_histogram(h, 4);
  EXPECT_EQ(v, Rational(7, 2401));
  EXPECT_EQ(big_pow(7, 4) % denominator(v), 0);
}

TEST(HistogramMerge, PartitionedEqualsSequential) {
  auto fill = [](u64 b, u64 e) {
    PairingHistogram h(11);
    for (u64 i = b; i < e; ++i) h.add(static_cast<i64>((i * i + 3 * i) % 11));
    return h;
  };
  const PairingHistogram seq = fill(0, 100000);
  for (int w : {1, 2, 3, 8}) {
    auto parts = run_partitioned<PairingHistogram>(100000, w, fill);
    PairingHistogram merged(11);
    for (const auto& p : parts) merged += p;
    EXPECT_EQ(merged, seq) << w;
  }
}

TEST(RationalIo, RoundTrip) {
  EXPECT_EQ(to_string(Rational(-2, 6)), "-1/3");
  EXPECT_EQ(to_string(Rational(4)), "4");
  EXPECT_EQ(parse_rational("-1/3"), Rational(-1, 3));
  EXPECT_EQ(parse_rational("3233/6561"), Rational(3233, 6561));
  EXPECT_THROW(parse_rational("x/2"), Error);
  EXPECT_THROW(parse_rational("1/0"), Error);
}
