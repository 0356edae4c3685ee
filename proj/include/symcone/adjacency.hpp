#pragma once

// Adjacency of facets, rays and k-faces, skeleton graphs and their
// quotients by a symmetry group.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "symcone/cone.hpp"
#include "symcone/group.hpp"
#include "symcone/lp.hpp"
#include "symcone/parallel.hpp"

namespace symcone {

class RedundantSystem : public Error {
 public:
  RedundantSystem(const std::string& what, std::size_t row) : Error(what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Facet adjacency by linear programming

struct FacetAdjacencyResult {
  bool adjacent = false;
  /// ZeroMinimum: multipliers proving non-adjacency. Unbounded: a point
  /// satisfying every other facet, violating f_j and with f_i < 0.
  LPOutcome certificate;
};

/**
 * Adjacency of facets i and j of {x : f.x >= 0} using only the inequalities:
 * i and j are not adjacent iff minimizing f_i over the other inequalities
 * together with f_j.x <= 0 gives 0. The system is checked once for
 * irredundancy on construction.
 */
class FacetAdjacencyLP {
 public:
  explicit FacetAdjacencyLP(ConeHRep h, LPOptions opts = {}, bool check_irredundant = true)
      : h_(std::move(h)), opts_(opts) {
    if (!check_irredundant) return;
    for (std::size_t i = 0; i < h_.facets.size(); ++i) {
      if (is_zero(h_.facets[i])) throw RedundantSystem("facet " + std::to_string(i) + " is zero", i);
      std::vector<QVector> others;
      for (std::size_t k = 0; k < h_.facets.size(); ++k)
        if (k != i) others.push_back(h_.facets[k]);
      if (is_redundant(QMatrix(h_.dim, others), h_.facets[i], opts_))
        throw RedundantSystem("facet " + std::to_string(i) + " is implied by the others", i);
    }
  }

  const ConeHRep& hrep() const { return h_; }

  FacetAdjacencyResult test(std::size_t i, std::size_t j) const {
    const std::size_t m = h_.facets.size();
    if (i >= m || j >= m) throw std::out_of_range("facet index out of range");
    if (i == j) throw PreconditionViolation("facet adjacency needs two distinct facets");
    ConicLP p;
    p.objective = h_.facets[i];
    p.ge_rows = QMatrix(h_.dim);
    for (std::size_t k = 0; k < m; ++k)
      if (k != i && k != j) p.ge_rows.push_back(h_.facets[k]);
    p.le_rows = QMatrix(h_.dim, {h_.facets[j]});
    p.eq_rows = QMatrix(h_.dim);
    FacetAdjacencyResult r;
    r.certificate = minimize_over_cone(p, opts_);
    r.adjacent = !r.certificate.zero_minimum();
    return r;
  }

 private:
  ConeHRep h_;
  LPOptions opts_;
};

inline bool facets_adjacent_lp(const ConeHRep& h, std::size_t i, std::size_t j, const LPOptions& opts = {}) {
  return FacetAdjacencyLP(h, opts).test(i, j).adjacent;
}

// ---------------------------------------------------------------------------
// Rank tests

/** Rays tight on both facets have rank n - 2. */
inline bool facets_adjacent_rank(const IncidenceMatrix& inc, const ConeVRep& v, std::size_t i, std::size_t j) {
  if (i == j || v.dim < 2) return false;
  const Bitset common = inc.facet_rays.at(i) & inc.facet_rays.at(j);
  if (common.count() + 2 < v.dim) return false;
  return rank_of_selection(v.rays, common, v.dim) == v.dim - 2;
}

/** Facets tight on both rays have rank n - 2. */
inline bool rays_adjacent(const ConeHRep& h, const IncidenceMatrix& inc, std::size_t i, std::size_t j) {
  if (i == j || h.dim < 2) return false;
  const Bitset common = inc.ray_facets.at(i) & inc.ray_facets.at(j);
  if (common.count() + 2 < h.dim) return false;
  return rank_of_selection(h.facets, common, h.dim) == h.dim - 2;
}

inline bool rays_adjacent(const FaceLattice& lat, std::size_t i, std::size_t j) {
  return rays_adjacent(lat.hrep(), lat.inc(), i, j);
}

/**
 * Ray adjacency by the dual LP: the rays of C are the facets of the dual
 * cone, and two rays are adjacent iff those facets are.
 */
inline bool rays_adjacent_lp(const ConeVRep& v, std::size_t i, std::size_t j, const LPOptions& opts = {}) {
  return FacetAdjacencyLP(ConeHRep(v.dim, v.rays), opts).test(i, j).adjacent;
}

// ---------------------------------------------------------------------------
// k-faces

struct KFaceRelation {
  std::size_t k = 0;
  std::size_t inf_dim = 0;
  std::size_t sup_dim = 0;
  bool adjacent() const { return sup_dim == k + 1; }
};

/** Dimensions of inf and sup of two k-faces; throws unless inf has dimension k-1. */
inline KFaceRelation kfaces_relation(const Face& a, const Face& b, const FaceLattice& lat) {
  if (a.dim != b.dim) throw PreconditionViolation("k-face adjacency needs faces of equal dimension");
  if (a == b) throw PreconditionViolation("k-face adjacency needs two distinct faces");
  KFaceRelation r;
  r.k = a.dim;
  r.inf_dim = lat.inf(a, b).dim;
  if (r.k == 0 || r.inf_dim != r.k - 1)
    throw PreconditionViolation("inf of the two " + std::to_string(r.k) + "-faces has dimension " +
                                std::to_string(r.inf_dim));
  r.sup_dim = lat.sup(a, b).dim;
  return r;
}

/** True iff sup of the two k-faces has dimension exactly k + 1. */
inline bool kfaces_adjacent(const Face& a, const Face& b, const FaceLattice& lat) {
  return kfaces_relation(a, b, lat).adjacent();
}

/**
 * LP cross-check for k-face adjacency. E is the set of extreme rays in the
 * linear span L of the two faces. The faces are adjacent iff L has
 * dimension k + 1 and L meets C in a face, i.e. for every ray e outside E
 * some x vanishing on E and nonnegative on the outside rays has e.x > 0.
 * Each unbounded witness settles every outside ray it is positive on.
 */
inline bool kfaces_adjacent_lp(const Face& a, const Face& b, const FaceLattice& lat, const LPOptions& opts = {}) {
  const auto rel = kfaces_relation(a, b, lat);
  const auto& v = lat.vrep();
  const std::size_t n = v.dim;
  std::vector<QVector> basis;
  const Bitset both = a.spanning_rays | b.spanning_rays;
  for (auto j = both.find_first(); j != Bitset::npos; j = both.find_next(j)) basis.push_back(v.rays[j]);
  const std::size_t r = rank(QMatrix(n, basis));
  if (r != rel.k + 1) return false;
  ConicLP p;
  p.ge_rows = QMatrix(n);
  p.le_rows = QMatrix(n);
  p.eq_rows = QMatrix(n);
  std::vector<std::size_t> outside;
  for (std::size_t j = 0; j < v.rays.size(); ++j) {
    auto with = basis;
    with.push_back(v.rays[j]);
    if (rank(QMatrix(n, with)) == r) {
      p.eq_rows.push_back(v.rays[j]);
    } else {
      p.ge_rows.push_back(v.rays[j]);
      outside.push_back(j);
    }
  }
  std::vector<bool> settled(outside.size(), false);
  for (std::size_t t = 0; t < outside.size(); ++t) {
    if (settled[t]) continue;
    p.objective = negate(v.rays[outside[t]]);
    const auto out = minimize_over_cone(p, opts);
    if (out.zero_minimum()) return false;
    for (std::size_t u = t; u < outside.size(); ++u)
      if (sgn(dot(v.rays[outside[u]], out.witness)) > 0) settled[u] = true;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Skeleton graphs

struct SkeletonOptions {
  std::size_t max_faces = 200'000;
  std::size_t jobs = 1;
};

/**
 * Faces of one dimension k with their adjacency edges (i < j, sorted).
 * node_vectors identify nodes under symmetry: the ray for k = 1, the facet
 * normal for k = n - 1, otherwise the primitive sum of the face's rays.
 */
struct SkeletonGraph {
  std::size_t k = 0;
  std::vector<Face> faces;
  std::vector<QVector> node_vectors;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t node_count() const { return faces.size(); }
  std::vector<std::vector<std::size_t>> adjacency_lists() const {
    std::vector<std::vector<std::size_t>> adj(faces.size());
    for (auto [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    for (auto& l : adj) std::sort(l.begin(), l.end());
    return adj;
  }
  bool has_edge(std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(a, b));
  }
};

namespace detail {

inline std::vector<Face> faces_from_pairs(const std::vector<Face>& level, std::size_t target, bool upward,
                                          const FaceLattice& lat, const SkeletonOptions& opts) {
  std::map<Bitset, Face> out;
  std::set<Bitset> seen;  // candidate tight sets already closed
  for (std::size_t i = 0; i < level.size(); ++i)
    for (std::size_t j = i + 1; j < level.size(); ++j) {
      const Bitset t =
          upward ? (level[i].tight_facets & level[j].tight_facets) : (level[i].tight_facets | level[j].tight_facets);
      if (!seen.insert(t).second) continue;
      Face f = lat.closure(t);
      if (f.dim != target || out.count(f.tight_facets)) continue;
      if (out.size() >= opts.max_faces)
        throw ResourceLimit("skeleton exceeded " + std::to_string(opts.max_faces) + " faces");
      out.emplace(f.tight_facets, std::move(f));
    }
  std::vector<Face> v;
  for (auto& [_, f] : out) v.push_back(std::move(f));
  return v;
}

}  // namespace detail

/** All faces of dimension k, sorted by tight set. */
inline std::vector<Face> faces_of_dimension(std::size_t k, const FaceLattice& lat, const SkeletonOptions& opts = {}) {
  const std::size_t n = lat.dim();
  if (k > n) throw std::out_of_range("face dimension exceeds cone dimension");
  if (k == n) return {lat.whole()};
  const std::size_t m = lat.inc().facet_count, r = lat.inc().ray_count;
  std::vector<Face> level;
  if (k == 0) {
    Bitset all(m);
    all.set();
    return {lat.closure(all)};
  }
  if (2 * k <= n || n < 2) {
    // bottom-up from the extreme rays
    for (std::size_t j = 0; j < r; ++j) level.push_back(lat.ray_face(j));
    for (std::size_t d = 1; d < k; ++d) level = detail::faces_from_pairs(level, d + 1, true, lat, opts);
  } else {
    for (std::size_t i = 0; i < m; ++i) level.push_back(lat.facet_face(i));
    for (std::size_t d = n - 1; d > k; --d) level = detail::faces_from_pairs(level, d - 1, false, lat, opts);
  }
  std::sort(level.begin(), level.end());
  level.erase(std::unique(level.begin(), level.end()), level.end());
  return level;
}

inline QVector face_vector(const Face& f, const FaceLattice& lat) {
  const std::size_t n = lat.dim();
  if (f.dim + 1 == n && n >= 2 && f.tight_facets.count() >= 1) return lat.hrep().facets[f.tight_facets.find_first()];
  QVector s(n);
  for (auto j = f.spanning_rays.find_first(); j != Bitset::npos; j = f.spanning_rays.find_next(j))
    s = add(s, lat.vrep().rays[j]);
  return is_zero(s) ? s : make_primitive(s);
}

/**
 * The k-skeleton: k-faces with an edge when inf has dimension k-1 and sup
 * has dimension k+1. For k = 1 nodes follow ray order, for k = n - 1 facet
 * order.
 */
inline SkeletonGraph skeleton(std::size_t k, const FaceLattice& lat, const SkeletonOptions& opts = {}) {
  const std::size_t n = lat.dim();
  SkeletonGraph g;
  g.k = k;
  if (k == 1 && n >= 2) {
    for (std::size_t j = 0; j < lat.inc().ray_count; ++j) g.faces.push_back(lat.ray_face(j));
  } else if (k + 1 == n && n >= 2) {
    for (std::size_t i = 0; i < lat.inc().facet_count; ++i) g.faces.push_back(lat.facet_face(i));
  } else {
    g.faces = faces_of_dimension(k, lat, opts);
  }
  if (g.faces.size() > opts.max_faces)
    throw ResourceLimit("skeleton exceeded " + std::to_string(opts.max_faces) + " faces");
  for (const auto& f : g.faces) g.node_vectors.push_back(face_vector(f, lat));

  const std::size_t N = g.faces.size();
  std::vector<std::vector<std::size_t>> row(N);
  parallel_for(N, opts.jobs, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      const Face& a = g.faces[i];
      const Face& b = g.faces[j];
      if (k == 0) continue;
      // rays of inf(a, b) are the common rays; its dimension is their rank
      const Bitset common = a.spanning_rays & b.spanning_rays;
      if (common.count() + 1 < k) continue;
      if (rank_of_selection(lat.vrep().rays, common, n) + 1 != k) continue;
      if (lat.sup(a, b).dim == k + 1) row[i].push_back(j);
    }
  });
  for (std::size_t i = 0; i < N; ++i)
    for (auto j : row[i]) g.edges.emplace_back(i, j);
  return g;
}

inline SkeletonGraph skeleton(std::size_t k, const ConeHRep& h, const ConeVRep& v, const SkeletonOptions& opts = {}) {
  return skeleton(k, FaceLattice(h, v), opts);
}

/** Facet graph from the H-description alone, every pair tested by LP. */
inline SkeletonGraph facet_graph_lp(const ConeHRep& h, std::size_t jobs = 1, const LPOptions& lp = {}) {
  const FacetAdjacencyLP tester(h, lp);
  SkeletonGraph g;
  g.k = h.dim >= 1 ? h.dim - 1 : 0;
  g.node_vectors = h.facets;
  g.faces.resize(h.facets.size());
  const std::size_t N = h.facets.size();
  std::vector<std::vector<std::size_t>> row(N);
  parallel_for(N, jobs, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < N; ++j)
      if (tester.test(i, j).adjacent) row[i].push_back(j);
  });
  for (std::size_t i = 0; i < N; ++i)
    for (auto j : row[i]) g.edges.emplace_back(i, j);
  return g;
}

// ---------------------------------------------------------------------------
// Quotient graphs

struct QuotientEdge {
  std::size_t a = 0, b = 0;  // orbit ids, a <= b
  std::size_t witness_a = 0, witness_b = 0;  // adjacent nodes of the skeleton
};

struct QuotientGraph {
  std::vector<QVector> representatives;
  std::vector<std::uint64_t> orbit_sizes;
  std::vector<std::size_t> node_orbit;  // skeleton node -> orbit id
  std::vector<QuotientEdge> edges;      // sorted by (a, b), first witness kept

  std::size_t node_count() const { return representatives.size(); }
  bool has_edge(std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    for (const auto& e : edges)
      if (e.a == a && e.b == b) return true;
    return false;
  }
};

/** Quotient by a given orbit partition of the skeleton's node vectors. */
inline QuotientGraph quotient_graph(const SkeletonGraph& sk, const OrbitPartition& orbits) {
  const std::size_t N = sk.node_count();
  QuotientGraph q;
  q.node_orbit.assign(N, SIZE_MAX);
  for (std::size_t o = 0; o < orbits.members.size(); ++o) {
    q.representatives.push_back(orbits.orbits.at(o).representative);
    q.orbit_sizes.push_back(orbits.orbits.at(o).size);
    for (auto m : orbits.members[o]) {
      if (m >= N || q.node_orbit[m] != SIZE_MAX)
        throw PreconditionViolation("orbit partition does not match the skeleton nodes");
      q.node_orbit[m] = o;
    }
  }
  for (auto o : q.node_orbit)
    if (o == SIZE_MAX) throw PreconditionViolation("orbit partition does not cover every skeleton node");
  std::map<std::pair<std::size_t, std::size_t>, QuotientEdge> found;
  for (auto [u, v] : sk.edges) {
    std::size_t a = q.node_orbit[u], b = q.node_orbit[v];
    QuotientEdge e{a, b, u, v};
    if (a > b) e = QuotientEdge{b, a, v, u};
    found.emplace(std::make_pair(e.a, e.b), e);
  }
  for (auto& [_, e] : found) q.edges.push_back(e);
  return q;
}

inline QuotientGraph quotient_graph(const SkeletonGraph& sk, const PermGroup& G) {
  auto part = orbit_partition(sk.node_vectors, G);
  if (!part.stable) throw PreconditionViolation("skeleton nodes are not closed under the group");
  return quotient_graph(sk, part);
}

struct Connectivity {
  bool connected = false;
  std::size_t components = 0;
  std::size_t remaining_nodes = 0;
};

/** Components of the skeleton after deleting the marked nodes. An empty remainder counts as disconnected. */
inline Connectivity connectivity_after_removal(const SkeletonGraph& sk, const std::vector<bool>& removed) {
  const std::size_t N = sk.node_count();
  if (removed.size() != N) throw DimensionMismatch("removal mask has wrong length");
  const auto adj = sk.adjacency_lists();
  std::vector<bool> seen(N, false);
  Connectivity c;
  for (std::size_t s = 0; s < N; ++s) {
    if (removed[s] || seen[s]) continue;
    ++c.components;
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      ++c.remaining_nodes;
      for (auto w : adj[u])
        if (!removed[w] && !seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
  }
  c.connected = c.components == 1;
  return c;
}

/** Removes every node lying in one of the given orbits. */
inline Connectivity connectivity_after_removal(const SkeletonGraph& sk, const QuotientGraph& q,
                                               const std::vector<std::size_t>& removed_orbits) {
  std::vector<bool> mask(sk.node_count(), false);
  for (std::size_t u = 0; u < mask.size(); ++u)
    mask[u] = std::find(removed_orbits.begin(), removed_orbits.end(), q.node_orbit.at(u)) != removed_orbits.end();
  return connectivity_after_removal(sk, mask);
}

// ---------------------------------------------------------------------------
// Export

inline std::string to_dot(const SkeletonGraph& sk, const std::string& name = "skeleton") {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  for (std::size_t i = 0; i < sk.node_count(); ++i) {
    os << "  n" << i << " [label=\"";
    if (i < sk.node_vectors.size()) os << to_string(sk.node_vectors[i]);
    os << "\"];\n";
  }
  for (auto [a, b] : sk.edges) os << "  n" << a << " -- n" << b << ";\n";
  os << "}\n";
  return os.str();
}

inline std::string to_dot(const QuotientGraph& q, const std::string& name = "quotient") {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  for (std::size_t i = 0; i < q.node_count(); ++i)
    os << "  o" << i << " [label=\"O" << i << " size=" << q.orbit_sizes[i] << "\\n"
       << to_string(q.representatives[i]) << "\"];\n";
  for (const auto& e : q.edges)
    os << "  o" << e.a << " -- o" << e.b << " [label=\"" << e.witness_a << "-" << e.witness_b << "\"];\n";
  os << "}\n";
  return os.str();
}

inline std::string adjacency_list_text(const SkeletonGraph& sk) {
  std::ostringstream os;
  const auto adj = sk.adjacency_lists();
  for (std::size_t i = 0; i < adj.size(); ++i) {
    os << i << ":";
    for (auto j : adj[i]) os << ' ' << j;
    os << '\n';
  }
  return os.str();
}

}  // namespace symcone
