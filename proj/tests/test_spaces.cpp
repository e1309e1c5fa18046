#include <gtest/gtest.h>

#include <random>

#include "pvs/orbits.hpp"
#include "pvs/space.hpp"

using namespace pvs;

namespace {

// Product of squared root differences for a product of linear forms
// (alpha_i x + beta_i y): the discriminant of their product.
BigInt disc_from_factors(const std::vector<std::array<i64, 2>>& f) {
  BigInt d = 1;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      const BigInt m = BigInt(f[i][0]) * f[j][1] - BigInt(f[j][0]) * f[i][1];
      d *= m * m;
    }
  }
  return d;
}

CubicSpace::Coords random_cubic(std::mt19937_64& rng, i64 bound) {
  std::uniform_int_distribution<i64> d(-bound, bound);
  return {d(rng), d(rng), d(rng), d(rng)};
}

QuarticSpace::Coords random_quartic(std::mt19937_64& rng, i64 bound) {
  std::uniform_int_distribution<i64> d(-bound, bound);
  QuarticSpace::Coords x{};
  for (auto& v : x) v = d(rng);
  return x;
}

}  // namespace

TEST(Disc, CubicExamples) {
  // x y (x + y) = x^2 y + x y^2
  EXPECT_EQ(CubicSpace::disc({0, 1, 1, 0}), 1);
  EXPECT_EQ(BigInt(CubicSpace::disc({0, 1, 1, 0})), disc_from_factors({{1, 0}, {0, 1}, {1, 1}}));
  // x (x - y)(x + y) = x^3 - x y^2
  EXPECT_EQ(CubicSpace::disc({1, 0, -1, 0}), 4);
  EXPECT_EQ(BigInt(CubicSpace::disc({1, 0, -1, 0})), disc_from_factors({{1, 0}, {1, -1}, {1, 1}}));
}

TEST(Disc, QuarticIdentityAndDiagonal) {
  const QuarticSpace::Coords x{1, 1, 1, 0, 0, 0, 1, 2, 3, 0, 0, 0};
  const auto f = QuarticSpace::resolvent<i64>(x);
  // 4 (x + y)(x + 2y)(x + 3y) = 4x^3 + 24x^2y + 44xy^2 + 24y^3
  EXPECT_EQ(f, (std::array<i64, 4>{4, 24, 44, 24}));
  EXPECT_EQ(QuarticSpace::disc_big(x), BigInt(1024));
  EXPECT_EQ(QuarticSpace::disc_big(x), BigInt(256) * disc_from_factors({{1, 1}, {1, 2}, {1, 3}}));
  EXPECT_EQ(disc(VElement::from<QuarticSpace>(x)), BigInt(1024));
  EXPECT_EQ(disc(VElement::from<QuarticSpace>(x, 7)), BigInt(1024 % 7));
}

TEST(Disc, ModMatchesExact) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    const auto c = random_cubic(rng, 50);
    const auto q = random_quartic(rng, 6);
    for (i64 p : {3, 5, 7, 13}) {
      EXPECT_EQ(BigInt(CubicSpace::disc_mod(c, p)), ((CubicSpace::disc_big(c) % p) + p) % p);
      EXPECT_EQ(BigInt(QuarticSpace::disc_mod(q, p)), ((QuarticSpace::disc_big(q) % p) + p) % p);
    }
  }
}

TEST(Disc, Homogeneity) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 50; ++it) {
    const auto c = random_cubic(rng, 20);
    const auto q = random_quartic(rng, 4);
    for (i64 l = -2; l <= 2; ++l) {
      auto cl = c;
      auto ql = q;
      for (auto& v : cl) v *= l;
      for (auto& v : ql) v *= l;
      EXPECT_EQ(CubicSpace::disc_big(cl), boost::multiprecision::pow(BigInt(l), 4) * CubicSpace::disc_big(c));
      EXPECT_EQ(QuarticSpace::disc_big(ql), boost::multiprecision::pow(BigInt(l), 12) * QuarticSpace::disc_big(q));
    }
  }
}

TEST(Disc, IntegralGeneratorInvariance) {
  // Generators of GL2(Z) and GL3(Z) applied over Z on exhaustive small boxes.
  const std::vector<GroupElement> gl2{
      GroupElement::make(0, {1, 1, 0, 1}), GroupElement::make(0, {0, 1, 1, 0}), GroupElement::make(0, {-1, 0, 0, 1}),
      GroupElement::make(0, {0, -1, 1, 0})};
  BoxEnumerator<CubicSpace>(BoxRegion{2.0}).for_each([&](const CubicSpace::Coords& f) {
    for (const auto& g : gl2) ASSERT_EQ(CubicSpace::disc(act(g, f)), CubicSpace::disc(f));
  });
  const std::array<i64, 4> I2{1, 0, 0, 1};
  const std::vector<GroupElement> gens{
      GroupElement::make(0, {1, 1, 0, 1}), GroupElement::make(0, {0, 1, 1, 0}), GroupElement::make(0, {-1, 0, 0, 1}),
      GroupElement::make(0, I2, {1, 1, 0, 0, 1, 0, 0, 0, 1}), GroupElement::make(0, I2, {0, 1, 0, 1, 0, 0, 0, 0, 1}),
      GroupElement::make(0, I2, {0, 0, 1, 1, 0, 0, 0, 1, 0}), GroupElement::make(0, I2, {-1, 0, 0, 0, 1, 0, 0, 0, 1})};
  // 3^12 points of the unit box.
  BoxEnumerator<QuarticSpace>(BoxRegion{1.0}).for_each([&](const QuarticSpace::Coords& x) {
    const BigInt d = QuarticSpace::disc_big(x);
    for (const auto& g : gens) ASSERT_EQ(QuarticSpace::disc_big(act(g, x)), d);
  });
}

TEST(Pairing, CubicExamples) {
  EXPECT_EQ(CubicSpace::pairing({1, 0, 0, 1}, {2, 3, 3, 2}), Rational(4));
  EXPECT_EQ(CubicSpace::pairing({7, -3, 5, 2}, {0, 0, 0, 0}), Rational(0));
  EXPECT_EQ(CubicSpace::pairing({0, 1, 0, 0}, {0, 1, 0, 0}), Rational(1, 3));
  const VElement x(SpaceId::cubic, {1, 0, 0, 1}), y(SpaceId::cubic, {2, 3, 3, 2});
  EXPECT_EQ(pairing(x, y), Rational(4));
}

TEST(Pairing, QuarticIdentity) {
  const QuarticSpace::Coords x{1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_EQ(QuarticSpace::pairing(x, x), Rational(3));
  const QuarticSpace::Coords off{0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_EQ(QuarticSpace::pairing(off, off), Rational(2));
}

TEST(Pairing, BilinearSymmetric) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 100; ++it) {
    const auto x = random_cubic(rng, 9), y = random_cubic(rng, 9), z = random_cubic(rng, 9);
    CubicSpace::Coords yz{};
    for (int i = 0; i < 4; ++i) yz[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] + 2 * z[static_cast<std::size_t>(i)];
    EXPECT_EQ(CubicSpace::pairing(x, y), CubicSpace::pairing(y, x));
    EXPECT_EQ(CubicSpace::pairing(x, yz), CubicSpace::pairing(x, y) + 2 * CubicSpace::pairing(x, z));
    const auto a = random_quartic(rng, 9), b = random_quartic(rng, 9);
    EXPECT_EQ(QuarticSpace::pairing(a, b), QuarticSpace::pairing(b, a));
  }
}

TEST(Pairing, BadPrimeRejected) {
  const VElement x(SpaceId::cubic, {1, 2, 0, 1}, 3), y(SpaceId::cubic, {0, 1, 1, 1}, 3);
  try {
    pairing(x, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::bad_prime);
  }
  const VElement a(SpaceId::quartic, std::vector<i64>(12, 1), 2);
  EXPECT_THROW(pairing(a, a), Error);
}

TEST(Pairing, ModSquarefreeMatchesRational) {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 100; ++it) {
    const auto x = random_cubic(rng, 30), y = random_cubic(rng, 30);
    const Rational exact = CubicSpace::pairing(x, y);
    const i64 q = 35;
    const Rational r = pairing(VElement::from<CubicSpace>(x, q), VElement::from<CubicSpace>(y, q));
    const i64 num = static_cast<i64>(numerator(exact) % q), den = static_cast<i64>(denominator(exact) % q);
    EXPECT_EQ(static_cast<i64>(numerator(r)), mul_mod(mod(num, q), inv_mod(den, q), q));
  }
}

TEST(Pairing, GroupCompatibility) {
  std::mt19937_64 rng(8);
  for (i64 p : {5, 7, 11}) {
    for (int it = 0; it < 300; ++it) {
      const auto g = random_group_element(p, rng);
      const auto gi = g.iota();
      const auto x = random_cubic(rng, p), y = random_cubic(rng, p);
      EXPECT_EQ(CubicSpace::pairing_mod(act(g, x), act(gi, y), p), CubicSpace::pairing_mod(x, y, p));
      const auto a = random_quartic(rng, p), b = random_quartic(rng, p);
      EXPECT_EQ(QuarticSpace::pairing_mod(act(g, a), act(gi, b), p), QuarticSpace::pairing_mod(a, b, p));
    }
  }
  for (int it = 0; it < 300; ++it) {
    const auto g = random_group_element(3, rng);
    const auto a = random_quartic(rng, 3), b = random_quartic(rng, 3);
    EXPECT_EQ(QuarticSpace::pairing_mod(act(g, a), act(g.iota(), b), 3), QuarticSpace::pairing_mod(a, b, 3));
  }
}

TEST(DualLattice, ImageChecks) {
  EXPECT_TRUE(rho_image_check(VElement(SpaceId::cubic, {1, 3, 6, 2})));
  EXPECT_FALSE(rho_image_check(VElement(SpaceId::cubic, {1, 1, 0, 0})));
  EXPECT_TRUE(rho_image_check(VElement(SpaceId::quartic, {1, 3, 5, 2, -4, 0, 7, 7, 7, 2, 2, 8})));
  EXPECT_FALSE(rho_image_check(VElement(SpaceId::quartic, {0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0})));
  try {
    rho_inverse(VElement(SpaceId::cubic, {1, 1, 0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_in_dual_lattice);
  }
}

TEST(DualLattice, RoundTripAndIndex) {
  std::mt19937_64 rng(4);
  for (int it = 0; it < 100; ++it) {
    const auto w = random_cubic(rng, 10);
    const DualElement d = from_dual_coordinates(SpaceId::cubic, std::vector<i64>(w.begin(), w.end()));
    EXPECT_EQ(dual_coordinates(rho_inverse(d.image)), std::vector<i64>(w.begin(), w.end()));
    auto m = random_cubic(rng, 10);
    for (auto& v : m) v *= 3;
    EXPECT_TRUE(CubicSpace::in_dual_image(m));
    auto mq = random_quartic(rng, 10);
    for (auto& v : mq) v *= 2;
    EXPECT_TRUE(QuarticSpace::in_dual_image(mq));
    const auto wq = random_quartic(rng, 10);
    EXPECT_EQ(QuarticSpace::rho_inverse_unchecked(QuarticSpace::rho(wq)), wq);
  }
}

TEST(DualLattice, DualPairingIsIntegralPairing) {
  std::mt19937_64 rng(6);
  for (int it = 0; it < 100; ++it) {
    const auto x = random_cubic(rng, 10), w = random_cubic(rng, 10);
    EXPECT_EQ(Rational(CubicSpace::dual_pairing(x, w)), CubicSpace::pairing(x, CubicSpace::rho(w)));
    EXPECT_EQ(CubicSpace::dual_disc(w) * 27, CubicSpace::disc(CubicSpace::rho(w)));
  }
}

TEST(Box, Counts) {
  EXPECT_EQ(enumerate_box(SpaceId::cubic, BoxRegion{0.0}).size(), 1U);
  EXPECT_EQ(enumerate_box(SpaceId::cubic, BoxRegion{0.0}).front(), VElement(SpaceId::cubic, {0, 0, 0, 0}));
  EXPECT_EQ(enumerate_box(SpaceId::cubic, BoxRegion{1.0}).size(), 81U);
  const auto even = enumerate_box(SpaceId::cubic, BoxRegion{2.0, std::vector<i64>{0, 0, 0, 0}, 2});
  EXPECT_EQ(even.size(), 81U);
  for (const auto& x : even) {
    for (i64 c : x.coords) EXPECT_EQ(mod(c, 2), 0);
  }
}

TEST(Box, LexicographicAndPartitioned) {
  BoxEnumerator<CubicSpace> en(BoxRegion{2.5, std::vector<i64>{1, 0, 2, 1}, 3});
  std::vector<CubicSpace::Coords> all;
  en.for_each([&](const auto& x) { all.push_back(x); });
  ASSERT_EQ(all.size(), en.size());
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
  EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
  for (u64 i = 0; i < all.size(); ++i) EXPECT_EQ(en.at(i), all[i]);
  std::vector<CubicSpace::Coords> pieces;
  const u64 cut = all.size() / 3;
  en.for_each(cut, all.size(), [&](const auto& x) { pieces.push_back(x); });
  EXPECT_TRUE(std::equal(pieces.begin(), pieces.end(), all.begin() + static_cast<std::ptrdiff_t>(cut)));
}

TEST(Box, BudgetEnforced) {
  try {
    BoxEnumerator<QuarticSpace> en(BoxRegion{10.0}, 1000000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resource_limit);
  }
}

TEST(Serialization, RoundTrip) {
  const VElement x(SpaceId::cubic, {1, 0, -1, 0});
  EXPECT_EQ(serialize(x), "cubic,1,0,-1,0");
  EXPECT_EQ(parse_element("cubic,1,0,-1,0"), x);
  const VElement y(SpaceId::quartic, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}, 5);
  EXPECT_EQ(serialize(y), "quartic/5,1,2,3,4,0,1,2,3,4,0,1,2");
  EXPECT_EQ(parse_element(serialize(y)), y);
  EXPECT_THROW(parse_element("cubic,1,2"), Error);
  EXPECT_THROW(parse_element("sextic,1,2,3,4"), Error);
  EXPECT_THROW(parse_element("cubic,1,x,3,4"), Error);
}
