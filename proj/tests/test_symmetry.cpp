#include <gtest/gtest.h>

#include <random>

#include "symcone/instances.hpp"

using namespace symcone;

namespace {

QVector v(std::initializer_list<long> xs) { return make_qvector(xs); }

Permutation random_perm(std::mt19937& rng, std::size_t n) {
  std::vector<Point> im(n);
  std::iota(im.begin(), im.end(), Point{0});
  std::shuffle(im.begin(), im.end(), rng);
  return Permutation(im);
}

Permutation random_element(std::mt19937& rng, const PermGroup& G) {
  Permutation g = Permutation::identity(G.degree());
  std::uniform_int_distribution<std::size_t> pick(0, G.generators().size() - 1);
  for (int i = 0; i < 40; ++i) g = G.generators()[pick(rng)] * g;
  return g;
}

}  // namespace

TEST(Permutation, RejectsNonBijection) { EXPECT_THROW(Permutation({0, 0, 1}), std::invalid_argument); }

TEST(Permutation, CyclesRoundTrip) {
  auto g = Permutation::from_cycles(5, {{0, 2, 4}, {1, 3}});
  EXPECT_EQ(g.to_cycle_string(), "(1,3,5)(2,4)");
  EXPECT_EQ(g.order(), 6u);
  EXPECT_EQ(g * g.inverse(), Permutation::identity(5));
}

TEST(Act, Examples) {
  EXPECT_EQ(act(Permutation::identity(3), v({4, 5, 6})), v({4, 5, 6}));
  EXPECT_EQ(act(Permutation::transposition(3, 0, 1), v({1, 2, 3})), v({2, 1, 3}));
  EXPECT_THROW(act(Permutation::identity(2), v({1, 2, 3})), DimensionMismatch);
}

TEST(Act, PairActionMovesCuts) {
  const auto g = induced_pair_action(Permutation::transposition(4, 0, 1));
  EXPECT_EQ(act(g, cut_vector(4, {0})), cut_vector(4, {1}));
}

TEST(Act, CompositionIsAnAction) {
  std::mt19937 rng(1);
  for (int t = 0; t < 50; ++t) {
    auto g = random_perm(rng, 6), h = random_perm(rng, 6);
    QVector x = v({1, -2, 3, 0, 5, 7});
    ASSERT_EQ(act(g * h, x), act(g, act(h, x)));
  }
}

TEST(InducedPairAction, Examples) {
  EXPECT_TRUE(induced_pair_action(Permutation::identity(5)).is_identity());
  // n=3 pairs: x12, x13, x23 ; swapping points 2 and 3 (0-based 1, 2)
  auto g = induced_pair_action(Permutation::transposition(3, 1, 2));
  EXPECT_EQ(g.images(), (std::vector<Point>{1, 0, 2}));
}

TEST(InducedPairAction, Homomorphism) {
  std::mt19937 rng(2);
  for (int t = 0; t < 100; ++t) {
    auto g = random_perm(rng, 6), h = random_perm(rng, 6);
    ASSERT_EQ(induced_pair_action(g * h), induced_pair_action(g) * induced_pair_action(h));
  }
}

TEST(PairIndex, IndexMatchesEnumeration) {
  PairIndex idx(7);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    auto [i, j] = idx.pair(k);
    ASSERT_EQ(idx.index(i, j), k);
    ASSERT_EQ(idx.index(j, i), k);
  }
}

TEST(PermGroup, Orders) {
  EXPECT_EQ(PermGroup::symmetric(4).order(), 24u);
  EXPECT_EQ(PermGroup(4, PermGroup::symmetric(4).generators()).order(), 24u);
  EXPECT_EQ(PermGroup(10, PermGroup::symmetric_on_pairs(5).generators()).order(), 120u);
  EXPECT_EQ(PermGroup::trivial(3).order(), 1u);
}

TEST(PermGroup, ElementCap) {
  GroupOptions small;
  small.element_cap = 100;
  EXPECT_THROW(PermGroup(6, PermGroup::symmetric(6).generators(), small), ResourceLimit);
}

TEST(OrbitOf, Examples) {
  auto s3 = PermGroup::symmetric(3);
  auto o = orbit_of(v({1, 0, 0}), s3);
  EXPECT_EQ(o.size, 3u);
  EXPECT_EQ(o.stabilizer_order, 2u);
  EXPECT_EQ(o.representative, v({0, 0, 1}));

  auto G = PermGroup::symmetric_on_pairs(4);
  EXPECT_EQ(orbit_of(cut_vector(4, {0}), G).size, 4u);
  EXPECT_EQ(orbit_of(cut_vector(4, {0, 1}), G).size, 3u);

  auto ones = orbit_of(QVector(6, Rational(1)), G);
  EXPECT_EQ(ones.size, 1u);
  EXPECT_EQ(ones.stabilizer_order, 24u);
}

TEST(OrbitOf, CapExceeded) {
  GroupOptions tiny;
  tiny.element_cap = 100;
  auto G = PermGroup::symmetric(5, tiny);
  EXPECT_EQ(orbit_of(v({1, 1, 2, 2, 2}), G).size, 10u);
  EXPECT_THROW(orbit_of(v({1, 2, 3, 4, 5}), G), ResourceLimit);
}

TEST(OrbitOf, OrbitStabilizerAndConjugateStabilizers) {
  std::mt19937 rng(4);
  auto G = PermGroup::symmetric_on_pairs(5);
  for (const auto& f : dual_description(generate_cut_cone(5).cone).facets) {
    auto o = orbit_of(f, G);
    ASSERT_EQ(o.size * o.stabilizer_order, G.order());
    for (const auto& s : o.stabilizer_generators) ASSERT_EQ(act(s, make_primitive(f)), make_primitive(f));
    // stabilizer of g.f is g Stab(f) g^-1
    auto g = random_element(rng, G);
    auto og = orbit_of(act(g, f), G);
    ASSERT_EQ(og.stabilizer_order, o.stabilizer_order);
    PermGroup conj(G.degree(), [&] {
      std::vector<Permutation> c;
      for (const auto& s : o.stabilizer_generators) c.push_back(g * s * g.inverse());
      return c;
    }());
    auto elems = conj.elements();
    std::set<Permutation> a(elems.begin(), elems.end());
    auto elems2 = PermGroup(G.degree(), og.stabilizer_generators).elements();
    std::set<Permutation> b(elems2.begin(), elems2.end());
    ASSERT_EQ(a, b);
  }
}

TEST(CanonicalRep, Examples) {
  auto s3 = PermGroup::symmetric(3);
  EXPECT_EQ(canonical_rep(v({0, 1, 0}), s3), v({0, 0, 1}));
  std::mt19937 rng(6);
  auto G = PermGroup::symmetric_on_pairs(5);
  QVector x = v({3, 1, 4, 1, 5, 9, 2, 6, 5, 3});
  for (int t = 0; t < 20; ++t) ASSERT_EQ(canonical_rep(act(random_element(rng, G), x), G), canonical_rep(x, G));
  auto met = generate_metric_cone(5).cone;
  std::set<QVector> reps;
  for (const auto& f : met.facets) reps.insert(canonical_rep(f, G));
  EXPECT_EQ(reps.size(), 1u);
}

TEST(CanonicalRep, DistinguishesOrbits) {
  auto G = PermGroup::symmetric_on_pairs(5);
  auto rays = double_description(generate_metric_cone(5).cone).rays;
  auto part = orbit_partition(rays, G);
  for (std::size_t a = 0; a < rays.size(); ++a)
    for (std::size_t b = 0; b < rays.size(); ++b) {
      bool same = false;
      for (const auto& m : part.members)
        same |= std::count(m.begin(), m.end(), a) && std::count(m.begin(), m.end(), b);
      ASSERT_EQ(canonical_rep(rays[a], G) == canonical_rep(rays[b], G), same);
    }
}

TEST(OrbitPartition, Cut4Facets) {
  auto part = orbit_partition(generate_metric_cone(4).cone.facets, PermGroup::symmetric_on_pairs(4));
  ASSERT_EQ(part.orbits.size(), 1u);
  EXPECT_EQ(part.orbits[0].size, 12u);
  EXPECT_TRUE(part.stable);
}

TEST(OrbitPartition, Cut5Facets) {
  auto part = orbit_partition(dual_description(generate_cut_cone(5).cone).facets, PermGroup::symmetric_on_pairs(5));
  ASSERT_EQ(part.orbits.size(), 2u);
  std::vector<std::uint64_t> sizes{part.orbits[0].size, part.orbits[1].size};
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::uint64_t>{10, 30}));
}

TEST(OrbitPartition, ReportsExtension) {
  auto part = orbit_partition({v({1, 0, 0}), v({0, 1, 0})}, PermGroup::symmetric(3));
  EXPECT_FALSE(part.stable);
  ASSERT_EQ(part.extension.size(), 1u);
  EXPECT_EQ(part.extension[0], v({0, 0, 1}));
}

TEST(ConjugacyClasses, SymmetricTable) {
  const std::vector<std::size_t> expected{3, 5, 7, 11, 15, 22, 30, 42, 56};
  for (std::size_t n = 3; n <= 11; ++n) EXPECT_EQ(conjugacy_class_reps(PermGroup::symmetric(n)).size(), expected[n - 3]);
}

TEST(ConjugacyClasses, EnumerationAgreesWithPartitions) {
  for (std::size_t n = 3; n <= 6; ++n) {
    PermGroup untagged(n, PermGroup::symmetric(n).generators());
    EXPECT_EQ(conjugacy_class_reps(untagged).size(), conjugacy_class_reps(PermGroup::symmetric(n)).size());
    PermGroup pairs(n * (n - 1) / 2, PermGroup::symmetric_on_pairs(n).generators());
    EXPECT_EQ(conjugacy_class_reps(pairs).size(), integer_partitions(n).size());
  }
  EXPECT_EQ(conjugacy_class_reps(PermGroup::trivial(4)).size(), 1u);
  // cyclic group of order 4: abelian, 4 classes
  PermGroup c4(4, {Permutation::from_cycles(4, {{0, 1, 2, 3}})});
  EXPECT_EQ(conjugacy_class_reps(c4).size(), 4u);
}

TEST(CyclicSubgroups, Counts) {
  auto s3 = cyclic_subgroups_from_classes(PermGroup::symmetric(3));
  ASSERT_EQ(s3.size(), 2u);
  std::vector<std::uint64_t> orders{s3[0].order(), s3[1].order()};
  std::sort(orders.begin(), orders.end());
  EXPECT_EQ(orders, (std::vector<std::uint64_t>{2, 3}));
  EXPECT_EQ(cyclic_subgroups_from_classes(PermGroup::symmetric(4)).size(), 4u);
  EXPECT_TRUE(cyclic_subgroups_from_classes(PermGroup::trivial(3)).empty());
}
