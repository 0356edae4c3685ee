#include <gtest/gtest.h>

#include <set>

#include "oracle.hpp"
#include "symcone/instances.hpp"
#include "symcone/methods.hpp"

using namespace symcone;

namespace {

QVector v(std::initializer_list<long> xs) { return make_qvector(xs); }

ConeHRep orthant(std::size_t n) {
  std::vector<QVector> rows;
  for (std::size_t i = 0; i < n; ++i) {
    QVector e(n);
    e[i] = 1;
    rows.push_back(e);
  }
  return ConeHRep(n, rows);
}

ConeHRep square_cone() {
  return ConeHRep(3, {v({-1, 0, 1}), v({1, 0, 1}), v({0, -1, 1}), v({0, 1, 1})});
}

struct Instance {
  std::string name;
  ConeHRep h;
  ConeVRep v;
  PermGroup G;
};

Instance cut(std::size_t n) {
  auto c = generate_cut_cone(n);
  return {"CUT_" + std::to_string(n), dual_description(c.cone), c.cone, c.group};
}

Instance met(std::size_t n) {
  auto m = generate_metric_cone(n);
  return {"MET_" + std::to_string(n), m.cone, double_description(m.cone), m.group};
}

std::multiset<std::uint64_t> sizes(const std::vector<Orbit>& orbits) {
  std::multiset<std::uint64_t> s;
  for (const auto& o : orbits) s.insert(o.size);
  return s;
}

void expect_same_orbits(const std::vector<Orbit>& got, const std::vector<Orbit>& want, const std::string& what) {
  ASSERT_EQ(got.size(), want.size()) << what;
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].representative, want[i].representative) << what;
    EXPECT_EQ(got[i].size, want[i].size) << what;
    EXPECT_EQ(got[i].stabilizer_order, want[i].stabilizer_order) << what;
  }
}

void expect_orbit_stabilizer(const std::vector<Orbit>& orbits, const PermGroup& G) {
  for (const auto& o : orbits) EXPECT_EQ(o.size * o.stabilizer_order, G.order()) << to_string(o.representative);
}

// Oracle for C_H when H is cyclic: the fixed subspace is spanned by the
// indicator vectors of the cycles of its generator; C ∩ W is enumerated by
// subset enumeration in those coordinates and lifted back.
std::vector<QVector> oracle_fixed_rays(const ConeHRep& h, const Permutation& g) {
  const auto cycles = g.cycles();
  std::vector<std::vector<Point>> blocks = cycles;
  std::vector<bool> moved(g.degree(), false);
  for (const auto& c : cycles)
    for (auto p : c) moved[p] = true;
  for (Point p = 0; p < g.degree(); ++p)
    if (!moved[p]) blocks.push_back({p});
  const std::size_t m = blocks.size();
  std::vector<oracle::Vec> rows;
  for (const auto& u : h.facets) {
    oracle::Vec r(m);
    for (std::size_t b = 0; b < m; ++b)
      for (auto p : blocks[b]) r[b] += u[p];
    bool zero = true;
    for (const auto& x : r) zero = zero && x == 0;
    if (!zero) rows.push_back(r);
  }
  std::vector<QVector> out;
  if (m == 1) {
    // a half-line: the sign is fixed by any nonzero row
    oracle::Vec up(1, 1);
    for (const auto& r : rows)
      if (oracle::dot(r, up) < 0) up[0] = -1;
    QVector x(g.degree());
    for (auto p : blocks[0]) x[p] = up[0];
    return {make_primitive(x)};
  }
  for (const auto& c : oracle::subset_rays(rows, m)) {
    QVector x(g.degree());
    for (std::size_t b = 0; b < m; ++b)
      for (auto p : blocks[b]) x[p] = c[b];
    out.push_back(make_primitive(x));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(SuAverage, Examples) {
  EXPECT_EQ(su_average(v({1, 2, 3}), PermGroup::trivial(3)), v({1, 2, 3}));
  PermGroup H(3, {Permutation::transposition(3, 0, 1)});
  EXPECT_EQ(su_average(v({1, 0, 0}), H), v({1, 1, 0}));
  auto G = PermGroup::symmetric(4);
  QVector d = v({3, -1, 4, 1});
  for (const auto& g : G.elements()) EXPECT_EQ(su_average(act(g, d), G), su_average(d, G));
}

TEST(FixedCone, OrthantTransposition) {
  auto vr = double_description(orthant(3));
  PermGroup H(3, {Permutation::transposition(3, 0, 1)});
  auto fc = fixed_cone(vr, H);
  EXPECT_EQ(fc.m, 2u);
  std::set<QVector> rays(fc.ambient_rays.begin(), fc.ambient_rays.end());
  EXPECT_EQ(rays, (std::set<QVector>{v({1, 1, 0}), v({0, 0, 1})}));
}

TEST(FixedCone, Cut4AgainstFixedPointOracle) {
  auto inst = cut(4);
  for (const auto& H : cyclic_subgroups_from_classes(inst.G)) {
    auto fc = fixed_cone(inst.v, H);
    auto want = oracle_fixed_rays(inst.h, H.generators().front());
    auto got = fc.ambient_rays;
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, want) << H.generators().front().to_cycle_string();
    EXPECT_EQ(fc.m, fixed_subspace(H).rows());
  }
  PermGroup H(6, {induced_pair_action(Permutation::transposition(4, 0, 1))});
  auto fc = fixed_cone(inst.v, H);
  EXPECT_EQ(fc.m, 4u);  // x01, x23 and two pairs of swapped coordinates
  auto full = fixed_cone(inst.v, inst.G);
  EXPECT_EQ(full.m, 1u);
  ASSERT_EQ(full.ambient_rays.size(), 1u);
  EXPECT_EQ(full.ambient_rays[0], v({1, 1, 1, 1, 1, 1}));
}

TEST(FixedCone, RejectsNonSymmetry) {
  auto vr = ConeVRep(3, {v({1, 0, 0}), v({0, 1, 0}), v({1, 1, 1})});
  PermGroup H(3, {Permutation::transposition(3, 1, 2)});
  EXPECT_THROW(fixed_cone(vr, H), NotASymmetry);
}

// For every cyclic class subgroup H, every facet fixed by H restricts to a
// facet of C_H, and C_H equals the fixed-point cone.
TEST(FixedCone, InvariantFacetsRestrictToFixedConeFacets) {
  for (const auto& inst : {cut(4), cut(5), met(5)}) {
    std::size_t checked = 0;
    for (const auto& H : cyclic_subgroups_from_classes(inst.G)) {
      auto fc = fixed_cone(inst.v, H);
      EXPECT_TRUE(su_image_equals_fixed_points(inst.h, fc)) << inst.name;
      const auto& g = H.generators().front();
      for (const auto& f : inst.h.facets) {
        if (act(g, f) != f) continue;
        ++checked;
        EXPECT_TRUE(is_facet_of(fc.cone_in_W, fc.restrict_functional(f)))
            << inst.name << " H=" << g.to_cycle_string() << " f=" << to_string(f);
      }
    }
    EXPECT_GT(checked, 0u) << inst.name;
  }
}

TEST(FacetsWithSymmetry, Cut4AndCut5) {
  for (const auto& inst : {cut(4), cut(5)}) {
    auto search = facets_with_symmetry(inst.v, inst.G);
    auto expected = orbit_partition(inst.h.facets, inst.G).orbits;
    expect_same_orbits(search.orbits, expected, inst.name);
    expect_orbit_stabilizer(search.orbits, inst.G);
    EXPECT_FALSE(search.pieces.empty());
  }
}

TEST(FacetsWithSymmetry, OrthantSym3) {
  auto search = facets_with_symmetry(double_description(orthant(3)), PermGroup::symmetric(3));
  ASSERT_EQ(search.orbits.size(), 1u);
  EXPECT_EQ(search.orbits[0].size, 3u);
}

TEST(IncidenceMethod, Met5) {
  auto inst = met(5);
  auto res = incidence_method(inst.h, inst.G, 1);
  EXPECT_EQ(res.subcones, 1u);
  auto expected = orbit_partition(inst.v.rays, inst.G).orbits;
  expect_same_orbits(res.ray_orbits, expected, "MET_5");
  EXPECT_EQ(sizes(res.ray_orbits), (std::multiset<std::uint64_t>{5, 10, 10}));
  expect_orbit_stabilizer(res.ray_orbits, inst.G);
}

TEST(IncidenceMethod, Met5Codimension2) {
  auto inst = met(5);
  auto res = incidence_method(inst.h, inst.G, 2);
  EXPECT_GT(res.subcones, 1u);
  expect_same_orbits(res.ray_orbits, orbit_partition(inst.v.rays, inst.G).orbits, "MET_5 k=2");
}

TEST(IncidenceMethod, OrthantAndCut4) {
  auto res = incidence_method(orthant(3), PermGroup::symmetric(3));
  ASSERT_EQ(res.ray_orbits.size(), 1u);
  EXPECT_EQ(res.ray_orbits[0].size, 3u);
  auto inst = cut(4);
  auto r4 = incidence_method(inst.h, inst.G);
  EXPECT_EQ(sizes(r4.ray_orbits), (std::multiset<std::uint64_t>{3, 4}));
  EXPECT_THROW(incidence_method(inst.h, inst.G, 0), std::out_of_range);
}

TEST(InitialFacets, Fixtures) {
  auto ov = double_description(orthant(3));
  auto f = initial_facets(ov);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_TRUE(is_facet_of(ov, f[0]));
  for (const auto& inst : {cut(4), cut(5)}) {
    auto fs = initial_facets(inst.v);
    ASSERT_FALSE(fs.empty());
    EXPECT_TRUE(is_facet_of(inst.v, fs[0]));
    std::set<QVector> all(inst.h.facets.begin(), inst.h.facets.end());
    EXPECT_TRUE(all.count(fs[0])) << inst.name;
  }
  auto five = initial_facets(cut(5).v, 5);
  EXPECT_EQ(five.size(), 5u);
  EXPECT_EQ(std::set<QVector>(five.begin(), five.end()).size(), 5u);
}

TEST(RidgeRotate, Orthant) {
  auto ov = double_description(orthant(3));
  EXPECT_EQ(ridge_rotate(v({1, 0, 0}), {v({0, 0, 1})}, ov), v({0, 1, 0}));
}

TEST(RidgeRotate, SquareConeNeighbors) {
  auto h = square_cone();
  auto sv = double_description(h);
  auto inc = incidence(h, sv);
  for (std::size_t i = 0; i < h.facets.size(); ++i) {
    std::set<QVector> want;
    for (std::size_t j = 0; j < h.facets.size(); ++j)
      if (facets_adjacent_rank(inc, sv, i, j)) want.insert(h.facets[j]);
    auto got = facet_neighbors(h.facets[i], sv);
    EXPECT_EQ(std::set<QVector>(got.begin(), got.end()), want);
    EXPECT_EQ(got.size(), 2u);
  }
}

TEST(RidgeRotate, Cut4StaysInTriangleOrbit) {
  auto inst = cut(4);
  std::set<QVector> all(inst.h.facets.begin(), inst.h.facets.end());
  for (const auto& f : inst.h.facets)
    for (const auto& g : facet_neighbors(f, inst.v)) EXPECT_TRUE(all.count(g));
}

TEST(RidgeRotate, RejectsBadRidge) {
  auto ov = double_description(orthant(3));
  EXPECT_THROW(ridge_rotate(v({1, 0, 0}), {}, ov), PreconditionViolation);
}

// The map G -> G ∩ F sends the facets adjacent to F onto the ridges of F.
TEST(LatticeMorphism, FacetConeRidges) {
  for (const auto& inst : {cut(4), cut(5), met(5)}) {
    auto inc = incidence(inst.h, inst.v);
    for (const auto& members : orbit_partition(inst.h.facets, inst.G).members) {
      const std::size_t i = members.front();
      std::set<std::vector<std::size_t>> from_neighbors;
      for (std::size_t j = 0; j < inst.h.facets.size(); ++j) {
        if (!facets_adjacent_rank(inc, inst.v, i, j)) continue;
        std::vector<std::size_t> common;
        for (std::size_t r = 0; r < inst.v.rays.size(); ++r)
          if (inc.tight(i, r) && inc.tight(j, r)) common.push_back(r);
        EXPECT_TRUE(from_neighbors.insert(common).second) << "two neighbors share a ridge";
      }
      auto fc = facet_cone(inst.h.facets[i], inst.v);
      std::set<std::vector<std::size_t>> from_ridges;
      for (const auto& phi : dual_description(fc.cone).facets) {
        std::vector<std::size_t> rays;
        for (std::size_t a = 0; a < fc.ray_indices.size(); ++a)
          if (sgn(dot(phi, fc.cone.rays[a])) == 0) rays.push_back(fc.ray_indices[a]);
        from_ridges.insert(rays);
      }
      EXPECT_EQ(from_neighbors, from_ridges) << inst.name;
    }
  }
}

TEST(AdjacencyDecomposition, Cut5) {
  auto inst = cut(5);
  auto db = adjacency_decomposition(inst.v, inst.G);
  EXPECT_EQ(db.verdict, Verdict::Complete);
  EXPECT_EQ(db.open_count(), 0u);
  EXPECT_EQ(db.total_elements(), 40u);
  expect_same_orbits(db.orbits(), orbit_partition(inst.h.facets, inst.G).orbits, "CUT_5");
  expect_orbit_stabilizer(db.orbits(), inst.G);
  for (const auto& [_, e] : db.entries) EXPECT_EQ(e.status, OrbitStatus::Treated);
}

TEST(AdjacencyDecomposition, Met5Dualized) {
  auto inst = met(5);
  auto db = adjacency_decomposition(ConeVRep(inst.h.dim, inst.h.facets), inst.G);
  EXPECT_EQ(db.verdict, Verdict::Complete);
  EXPECT_EQ(db.total_elements(), 25u);
  expect_same_orbits(db.orbits(), orbit_partition(inst.v.rays, inst.G).orbits, "MET_5");
}

TEST(AdjacencyDecomposition, OrthantOneStep) {
  auto db = adjacency_decomposition(double_description(orthant(4)), PermGroup::symmetric(4));
  ASSERT_EQ(db.entries.size(), 1u);
  EXPECT_EQ(db.entries.begin()->second.orbit_size, 4u);
  EXPECT_EQ(db.stats.rounds, 1u);
  EXPECT_EQ(db.verdict, Verdict::Complete);
}

TEST(AdjacencyDecomposition, SmallFixturesTrivialGroup) {
  for (const auto& inst : {cut(4), met(4)}) {
    auto db = adjacency_decomposition(inst.v, PermGroup::trivial(inst.h.dim));
    EXPECT_EQ(db.total_elements(), inst.h.facets.size()) << inst.name;
    std::vector<QVector> reps;
    for (const auto& [k, _] : db.entries) reps.push_back(k);
    EXPECT_EQ(reps, canonical_rows(inst.h.facets)) << inst.name;
  }
}

TEST(AdjacencyDecomposition, RecursionGivesSameOrbits) {
  auto inst = cut(5);
  DecompositionOptions opts;
  opts.recursion_threshold = 10;  // triangles (11 rays) recurse, pentagonal facets (10) do not
  opts.max_depth = 1;
  auto db = adjacency_decomposition(inst.v, inst.G, opts);
  EXPECT_EQ(db.verdict, Verdict::Complete);
  EXPECT_GT(db.stats.recursive_calls, 0u);
  expect_same_orbits(db.orbits(), orbit_partition(inst.h.facets, inst.G).orbits, "CUT_5 recursive");

  opts.recursion_threshold = 7;
  opts.max_depth = 6;
  auto deep = adjacency_decomposition(inst.v, inst.G, opts);
  EXPECT_EQ(deep.verdict, Verdict::Complete);
  EXPECT_GE(deep.stats.max_depth, 2u);
  expect_same_orbits(deep.orbits(), orbit_partition(inst.h.facets, inst.G).orbits, "CUT_5 deep");
}

TEST(AdjacencyDecomposition, DepthLimitLeavesOrbitsOpen) {
  auto inst = cut(5);
  DecompositionOptions opts;
  opts.recursion_threshold = 0;
  opts.max_depth = 0;
  auto db = adjacency_decomposition(inst.v, inst.G, opts);
  EXPECT_EQ(db.verdict, Verdict::Conjectured);
  EXPECT_EQ(db.entries.size(), 1u);
  EXPECT_EQ(db.entries.begin()->second.status, OrbitStatus::Open);
  EXPECT_EQ(db.open_count(), 1u);
}

TEST(AdjacencyDecomposition, OrbitCapGivesEstimate) {
  auto inst = cut(5);
  DecompositionOptions opts;
  opts.max_orbits = 1;
  auto db = adjacency_decomposition(inst.v, inst.G, opts);
  EXPECT_EQ(db.verdict, Verdict::Estimate);
  EXPECT_EQ(db.entries.size(), 1u);
}

TEST(AdjacencyDecomposition, JobsDoNotChangeResult) {
  auto inst = met(5);
  ConeVRep dual(inst.h.dim, inst.h.facets);
  DecompositionOptions a, b;
  b.jobs = 8;
  auto x = adjacency_decomposition(dual, inst.G, a);
  auto y = adjacency_decomposition(dual, inst.G, b);
  ASSERT_EQ(x.entries.size(), y.entries.size());
  for (auto it = x.entries.begin(), jt = y.entries.begin(); it != x.entries.end(); ++it, ++jt) {
    EXPECT_EQ(it->first, jt->first);
    EXPECT_EQ(it->second.incidence, jt->second.incidence);
    EXPECT_EQ(it->second.status, jt->second.status);
  }
}

TEST(AdjacencyDecomposition, InputErrors) {
  auto inst = cut(4);
  PermGroup bad(6, {Permutation::transposition(6, 0, 1)});
  EXPECT_THROW(adjacency_decomposition(inst.v, bad), NotASymmetry);
  DecompositionOptions opts;
  opts.seeds = {v({1, 0, 0, 0, 0, 0})};
  EXPECT_THROW(adjacency_decomposition(inst.v, inst.G, opts), PreconditionViolation);
  ConeVRep flat(3, {v({1, 0, 0}), v({0, 1, 0})});
  EXPECT_THROW(adjacency_decomposition(flat, PermGroup::trivial(3)), LowerDimensionalCone);
  ConeVRep line(2, {v({1, 0}), v({-1, 0}), v({0, 1})});
  EXPECT_THROW(adjacency_decomposition(line, PermGroup::trivial(2)), NonPointedCone);
}

TEST(SubconeMethod, Met5FromCuts) {
  auto inst = met(5);
  SubconeSplit s{inst.h, pentagonal_inequalities(), generate_cut_cone(5).cone};
  auto res = subcone_method(s, inst.G);
  EXPECT_EQ(res.new_rays.size(), 10u);
  auto cuts = generate_cut_cone(5).cone.rays;
  std::vector<QVector> all = res.new_rays;
  all.insert(all.end(), cuts.begin(), cuts.end());
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, canonical_rows(inst.v.rays));
  expect_same_orbits(res.ray_orbits, orbit_partition(inst.v.rays, inst.G).orbits, "MET_5 subcone");
  EXPECT_EQ(res.pieces.size(), 1u);  // the pentagonal inequalities form one orbit
  for (const auto& r : res.new_rays) {
    bool violates = false;
    for (const auto& p : pentagonal_inequalities()) violates = violates || sgn(dot(p, r)) < 0;
    EXPECT_TRUE(violates);
  }
}

TEST(SubconeMethod, OrthantSplit) {
  // known subcone {x3 = 0}, cut off by -x3 >= 0
  SubconeSplit s{orthant(3), {v({0, 0, -1})}, ConeVRep(3, {v({1, 0, 0}), v({0, 1, 0})})};
  auto res = subcone_method(s, PermGroup::trivial(3));
  EXPECT_EQ(res.new_rays, (std::vector<QVector>{v({0, 0, 1})}));
  EXPECT_EQ(res.ray_orbits.size(), 3u);
}

TEST(SubconeMethod, EmptySplit) {
  auto inst = cut(4);
  SubconeSplit s{inst.h, {}, inst.v};
  auto res = subcone_method(s, inst.G);
  expect_same_orbits(res.ray_orbits, orbit_partition(inst.v.rays, inst.G).orbits, "CUT_4");
  EXPECT_TRUE(res.new_rays.empty());
}

TEST(SubconeMethod, InvalidSplit) {
  SubconeSplit s{orthant(3), {v({-1, 0, 0})}, ConeVRep(3, {v({1, 0, 0})})};
  EXPECT_THROW(subcone_method(s, PermGroup::trivial(3)), PreconditionViolation);
}
