#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

#include "pvs/orbits.hpp"

using namespace pvs;

namespace {

QuarticSpace::Coords random_point(std::mt19937_64& rng, i64 p) {
  std::uniform_int_distribution<i64> d(0, p - 1);
  QuarticSpace::Coords x{};
  for (auto& v : x) v = d(rng);
  return x;
}

const OrbitDecomposition& decomposition3() {
  static const OrbitDecomposition d = [] {
    DecomposeOptions opt;
    opt.keep_orbit_ids = true;
    return decompose_orbits(3, opt);
  }();
  return d;
}

}  // namespace

TEST(Act, IdentityAndSwap) {
  std::mt19937_64 rng(1);
  const auto x = random_point(rng, 7);
  EXPECT_EQ(act(GroupElement::identity(7), x), x);
  const auto s = act(GroupElement::make(7, {0, 1, 1, 0}), x);
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(s[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i + 6)]);
    EXPECT_EQ(s[static_cast<std::size_t>(i + 6)], x[static_cast<std::size_t>(i)]);
  }
}

TEST(Act, SingularElementRejected) {
  try {
    GroupElement::make(5, {1, 2, 2, 4});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_group_element);
  }
  EXPECT_THROW(GroupElement::make(5, {1, 0, 0, 1}, {1, 1, 1, 1, 1, 1, 0, 0, 1}), Error);
}

TEST(Act, Composition) {
  std::mt19937_64 rng(2);
  for (i64 p : {3, 5, 7}) {
    for (int it = 0; it < 200; ++it) {
      const auto g = random_group_element(p, rng), h = random_group_element(p, rng);
      const auto x = random_point(rng, p);
      EXPECT_EQ(act(g * h, x), act(g, act(h, x)));
      const CubicSpace::Coords f{x[0], x[1], x[2], x[3]};
      EXPECT_EQ(act(g * h, f), act(g, act(h, f)));
    }
  }
}

TEST(Act, DiscriminantCharacter) {
  std::mt19937_64 rng(3);
  for (i64 p : {5, 7, 11, 13}) {
    for (int it = 0; it < 300; ++it) {
      const auto g = random_group_element(p, rng);
      const auto x = random_point(rng, p);
      const i64 chi = mul_mod(pow_mod(g.det2(), 6, p), pow_mod(g.det3(), 8, p), p);
      EXPECT_EQ(QuarticSpace::disc_mod(act(g, x), p), mul_mod(chi, QuarticSpace::disc_mod(x, p), p));
      const CubicSpace::Coords f{x[0], x[1], x[2], x[3]};
      EXPECT_EQ(CubicSpace::disc_mod(act(g, f), p), mul_mod(pow_mod(g.det2(), 6, p), CubicSpace::disc_mod(f, p), p));
    }
  }
}

TEST(Labels, TableMatchesDimensionGroups) {
  const std::map<int, int> fc{{0, -1}, {4, -3}, {7, -4}, {8, -5}, {10, -6}, {11, -7}, {12, -8}};
  for (const auto& e : label_table()) EXPECT_EQ(fc.at(e.dimension), e.fc) << e.name;
  for (const auto& r : dimension_table()) EXPECT_EQ(fc.at(r.dimension), r.fc);
  EXPECT_EQ(dimension_table().size(), 7U);
  EXPECT_EQ(labels_of_dimension(7), (std::vector<Label>{Label::D11, Label::Cs}));
  EXPECT_EQ(labels_of_dimension(8).size(), 5U);
  EXPECT_EQ(labels_of_dimension(12).size(), 5U);
}

TEST(Labels, ParseAliases) {
  EXPECT_EQ(parse_label("B11"), Label::T11);
  EXPECT_EQ(parse_label("O_B2"), Label::T2);
  EXPECT_EQ(parse_label("1^21^2"), Label::S1sq1sq);
  for (const auto& e : label_table()) EXPECT_EQ(parse_label(e.name), e.label);
  try {
    parse_label("D3");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_label);
  }
}

TEST(Classify, ZeroOrbit) {
  EXPECT_EQ(classify(QuarticSpace::Coords{}, 5), Label::O0);
  EXPECT_EQ(classify(VElement(SpaceId::quartic, std::vector<i64>(12, 0), 7)), Label::O0);
}

TEST(Classify, IdentityAndDiagonalFollowsPointCount) {
  // A = B = 0 forces y^2 = -2 z^2, so F_p points exist iff -2 is a square mod p.
  const QuarticSpace::Coords x{1, 1, 1, 0, 0, 0, 1, 2, 3, 0, 0, 0};
  EXPECT_EQ(base_locus_points(x, 7, 1), 0);
  EXPECT_EQ(base_locus_points(x, 7, 2), 4);
  EXPECT_EQ(classify(x, 7), Label::S22);
  EXPECT_EQ(base_locus_points(x, 11, 1), 4);
  EXPECT_EQ(classify(x, 11), Label::S1111);
  for (i64 p : {5, 7, 11, 13, 17, 19}) {
    EXPECT_EQ(splitting_type_from_counts(base_locus_points(x, p, 1), base_locus_points(x, p, 2)), classify(x, p)) << p;
    EXPECT_EQ(classify(x, p) == Label::S1111, is_square_mod(-2, p)) << p;
  }
}

TEST(Classify, NonsingularLandsInTopGroup) {
  std::mt19937_64 rng(4);
  for (i64 p : {3, 5, 7, 11}) {
    int seen = 0;
    for (int it = 0; it < 500; ++it) {
      const auto x = random_point(rng, p);
      const Label l = classify(x, p);
      EXPECT_EQ(QuarticSpace::disc_mod(x, p) != 0, dimension(l) == 12) << to_string(l);
      seen += dimension(l) == 12;
    }
    EXPECT_GT(seen, 0);
  }
}

TEST(Classify, SplittingTypeMatchesPointCounts) {
  std::mt19937_64 rng(5);
  for (i64 p : {3, 5, 7}) {
    for (int it = 0; it < 150; ++it) {
      const auto x = random_point(rng, p);
      if (QuarticSpace::disc_mod(x, p) == 0) continue;
      const Label expected = splitting_type_from_counts(base_locus_points(x, p, 1), base_locus_points(x, p, 2));
      EXPECT_EQ(classify(x, p), expected);
      if (p == 3 && it < 40) {
        // All four points are defined over F_{p^4} except for type 13 (orbits of size 1 and 3).
        EXPECT_EQ(base_locus_points(x, p, 4), expected == Label::S13 ? 1 : 4);
        EXPECT_EQ(base_locus_points(x, p, 3), expected == Label::S13 ? 4 : base_locus_points(x, p, 1));
      }
    }
  }
}

TEST(Classify, ConstantOnOrbits) {
  std::mt19937_64 rng(6);
  for (i64 p : {3, 5, 7, 11}) {
    for (int it = 0; it < 2500; ++it) {
      const auto g = random_group_element(p, rng);
      auto x = random_point(rng, p);
      // Bias toward degenerate points: zero out a random subset of coordinates.
      const auto mask = rng();
      for (int i = 0; i < 12; ++i) {
        if ((mask >> i) & (mask >> (i + 12)) & 1U) x[static_cast<std::size_t>(i)] = 0;
      }
      ASSERT_EQ(classify(act(g, x), p), classify(x, p)) << serialize(VElement::from<QuarticSpace>(x, p));
    }
  }
}

TEST(Classify, BadPrime) {
  EXPECT_THROW(classify(QuarticSpace::Coords{}, 2), Error);
}

TEST(Decompose, TwentyOrbitsAtThree) {
  const auto& d = decomposition3();
  EXPECT_EQ(d.orbits.size(), 20U);
  u64 total = 0;
  for (const auto& o : d.orbits) {
    total += o.size;
    EXPECT_EQ(group_order(3) % o.size, 0) << o.size;
  }
  EXPECT_EQ(total, 531441U);
  EXPECT_EQ(d.orbits.front().representative, 0U);
  EXPECT_EQ(d.orbits.front().size, 1U);
}

TEST(Decompose, ClassifierMatchesPartitionAtThree) {
  const auto& d = decomposition3();
  const OrbitTable t = label_orbits(d);
  std::array<int, 20> label_of_orbit{};
  for (std::size_t k = 0; k < d.orbits.size(); ++k) {
    label_of_orbit[k] = static_cast<int>(classify(QuarticCodec(3).decode(d.orbits[k].representative), 3));
  }
  const QuarticCodec codec(3);
  u64 mismatches = 0;
  for (u64 i = 0; i < codec.size(); ++i) {
    mismatches += static_cast<int>(classify(codec.decode(i), 3)) != label_of_orbit[d.orbit_of[i]];
  }
  EXPECT_EQ(mismatches, 0U);
  EXPECT_EQ(t.at(Label::O0).cardinality, 1U);
  EXPECT_EQ(t.at(Label::D1sq).cardinality, 104U);
  EXPECT_EQ(t.at(Label::D11).cardinality, 624U);
  EXPECT_EQ(t.at(Label::Cs).cardinality, 2496U);
  EXPECT_EQ(t.at(Label::D2).cardinality, 312U);
  EXPECT_EQ(t.at(Label::Dns).cardinality, 1872U);
  EXPECT_EQ(t.at(Label::T2).cardinality, 1872U);
  EXPECT_EQ(t.at(Label::T11).cardinality, 3744U);
  EXPECT_EQ(t.at(Label::Cns).cardinality, 5616U);
  EXPECT_EQ(t.at(Label::S1sq1sq).cardinality, 33696U);
  EXPECT_EQ(t.at(Label::S2sq).cardinality, 16848U);
  EXPECT_EQ(t.at(Label::S1111).cardinality, 11232U);
  EXPECT_EQ(t.at(Label::S22).cardinality, 33696U);
  EXPECT_EQ(t.at(Label::S13).cardinality, 89856U);
  EXPECT_EQ(t.at(Label::S112).cardinality, 67392U);
  EXPECT_EQ(t.at(Label::S4).cardinality, 67392U);
}

TEST(Decompose, ResourceLimit) {
  try {
    decompose_orbits(7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resource_limit);
  }
  EXPECT_THROW(decompose_orbits(2), Error);
}

TEST(OrbitTableIo, RoundTrip) {
  const OrbitTable t = label_orbits(decomposition3());
  std::stringstream ss;
  write_orbit_table(ss, t);
  const OrbitTable back = read_orbit_table(ss);
  ASSERT_EQ(back.entries.size(), 20U);
  EXPECT_EQ(back.p, 3);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(back.entries[i].label, t.entries[i].label);
    EXPECT_EQ(back.entries[i].cardinality, t.entries[i].cardinality);
    EXPECT_EQ(back.entries[i].representative, t.entries[i].representative);
  }
}

TEST(ExtensionField, LeastIrreducible) {
  const ExtField f(3, 2);
  // t^2 + 1 is the least monic irreducible quadratic over F_3.
  EXPECT_EQ(f.modulus()[0], 1);
  EXPECT_EQ(f.modulus()[1], 0);
  // every nonzero element has multiplicative order dividing 8
  for (i64 n = 1; n < f.size(); ++n) {
    auto e = f.from_index(n), acc = f.from_int(1);
    for (int k = 0; k < 8; ++k) acc = f.mul(acc, e);
    EXPECT_EQ(acc, f.from_int(1));
  }
  const ExtField g(5, 4);
  EXPECT_EQ(g.size(), 625);
}
