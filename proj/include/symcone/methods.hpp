#pragma once

// Symmetry-exploiting enumeration: fixed cones, the incidence method,
// adjacency decomposition and subcone splitting.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "symcone/adjacency.hpp"
#include "symcone/cone.hpp"
#include "symcone/group.hpp"
#include "symcone/linalg.hpp"
#include "symcone/lp.hpp"
#include "symcone/parallel.hpp"

namespace symcone {

/** A group element does not map the cone's generators (or facets) onto themselves. */
class NotASymmetry : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Helpers

/// Coordinates c with basis^T c = x, for x in the row space of basis.
inline QVector coordinates_in(const QMatrix& basis, const QVector& x) {
  auto c = solve(basis.transpose(), x);
  if (!c) throw std::logic_error("coordinates_in: vector outside the spanned subspace");
  return *c;
}

/// basis^T c
inline QVector lift_from(const QMatrix& basis, const QVector& c) {
  QVector x(basis.cols());
  for (std::size_t i = 0; i < basis.rows(); ++i)
    if (sgn(c[i]) != 0) x = add(x, scale(c[i], basis[i]));
  return x;
}

/** Throws NotASymmetry unless every generator maps the row set onto itself. */
inline void check_symmetry(const std::vector<QVector>& rows, const PermGroup& G, const std::string& what) {
  std::set<QVector> set;
  for (const auto& r : rows) set.insert(make_primitive(r));
  for (const auto& g : G.generators())
    for (const auto& r : set)
      if (!set.count(act(g, r)))
        throw NotASymmetry("generator " + g.to_cycle_string() + " does not preserve the " + what);
}

/// Permutation action of G on the indices of rows (rows must be closed under G).
inline PermGroup index_action(const std::vector<QVector>& rows, const PermGroup& G) {
  std::unordered_map<QVector, std::size_t, QVectorHash> where;
  for (std::size_t j = 0; j < rows.size(); ++j) where.emplace(make_primitive(rows[j]), j);
  std::vector<Permutation> gens;
  for (const auto& g : G.generators()) {
    std::vector<Point> img(rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
      auto it = where.find(act(g, make_primitive(rows[j])));
      if (it == where.end()) throw NotASymmetry("generator " + g.to_cycle_string() + " does not preserve the rays");
      img[j] = static_cast<Point>(it->second);
    }
    gens.emplace_back(std::move(img));
  }
  return PermGroup(rows.size(), std::move(gens), G.options());
}

inline std::vector<Orbit> sorted_orbits(std::vector<Orbit> orbits) {
  std::sort(orbits.begin(), orbits.end(),
            [](const Orbit& a, const Orbit& b) { return a.representative < b.representative; });
  return orbits;
}

/// Adds the orbit of v unless its canonical representative is already present.
inline void merge_orbit(std::map<QVector, Orbit>& into, const QVector& v, const PermGroup& G) {
  QVector key = canonical_rep(v, G);
  if (into.count(key)) return;
  into.emplace(std::move(key), orbit_of(v, G));
}

inline std::vector<Orbit> orbit_list(const std::map<QVector, Orbit>& m) {
  std::vector<Orbit> out;
  for (const auto& [_, o] : m) out.push_back(o);
  return out;
}

/// Every element of every orbit, sorted.
inline std::vector<QVector> expand_orbits(const std::vector<Orbit>& orbits, const PermGroup& G) {
  std::vector<QVector> out;
  for (const auto& o : orbits)
    for (auto& x : orbit_elements(o.representative, G)) out.push_back(std::move(x));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Fixed cones

/** Sum of h(d) over all h in H. */
inline QVector su_average(const QVector& d, const PermGroup& H) {
  if (d.size() != H.degree()) throw DimensionMismatch("su_average: vector length differs from group degree");
  QVector s(d.size());
  for (const auto& h : H.elements()) s = add(s, act(h, d));
  return s;
}

/// Basis (rows) of {x : h(x) = x for every generator h}.
inline QMatrix fixed_subspace(const PermGroup& H) {
  const std::size_t n = H.degree();
  QMatrix eqs(n);
  for (const auto& g : H.generators()) {
    const Permutation inv = g.inverse();
    for (std::size_t j = 0; j < n; ++j) {
      // (g x)_j - x_j = x_{g^-1(j)} - x_j
      if (inv(j) == j) continue;
      QVector row(n);
      row[inv(j)] += 1;
      row[j] -= 1;
      eqs.push_back(std::move(row));
    }
  }
  return nullspace(eqs);
}

struct FixedCone {
  PermGroup subgroup;
  QMatrix basis_W;       // rows span the fixed subspace
  ConeVRep cone_in_W;    // coordinates relative to basis_W
  std::size_t m = 0;     // dim W
  std::vector<QVector> ambient_rays;  // basis_W^T c for each ray c of cone_in_W

  /// H-invariant ambient functional agreeing with phi on W.
  QVector lift_functional(const QVector& phi) const {
    const QMatrix M(m, [&] {
      std::vector<QVector> rows;
      for (std::size_t i = 0; i < m; ++i) {
        QVector r(m);
        for (std::size_t j = 0; j < m; ++j) r[j] = dot(basis_W[i], basis_W[j]);
        rows.push_back(std::move(r));
      }
      return rows;
    }());
    auto y = solve(M, phi);
    if (!y) throw std::logic_error("fixed cone basis is singular");
    return lift_from(basis_W, *y);
  }

  /// Restriction of an ambient functional to W coordinates.
  QVector restrict_functional(const QVector& f) const { return mul(basis_W, f); }
};

/**
 * C_H as the cone generated by the H-averages of the rays of C, expressed in
 * a basis of the fixed subspace. Redundant averages are removed by LP.
 */
inline FixedCone fixed_cone(const ConeVRep& v, const PermGroup& H) {
  if (H.degree() != v.dim) throw DimensionMismatch("fixed_cone: group degree differs from cone dimension");
  check_symmetry(v.rays, H, "rays");
  FixedCone fc;
  fc.subgroup = H;
  fc.basis_W = fixed_subspace(H);
  fc.m = fc.basis_W.rows();
  std::vector<QVector> images;
  for (const auto& r : v.rays) {
    QVector s = su_average(r, H);
    if (is_zero(s)) continue;
    images.push_back(coordinates_in(fc.basis_W, s));
  }
  images = canonical_rows(std::move(images));
  const auto kept = remove_redundancy(QMatrix(fc.m, images));
  fc.cone_in_W = ConeVRep(fc.m, kept.kept.row_list());
  for (const auto& c : fc.cone_in_W.rays) {
    QVector x = make_primitive(lift_from(fc.basis_W, c));
    if (!is_redundant(v.rays, x))
      throw std::logic_error("fixed cone ray " + to_string(x) + " is not in the cone");
    fc.ambient_rays.push_back(std::move(x));
  }
  return fc;
}

/**
 * Compares C_H with the cone cut out of W by the facets of C:
 * true iff both have the same extreme rays.
 */
inline bool su_image_equals_fixed_points(const ConeHRep& h, const FixedCone& fc) {
  std::vector<QVector> restricted;
  for (const auto& u : h.facets) {
    QVector r = fc.restrict_functional(u);
    if (!is_zero(r)) restricted.push_back(std::move(r));
  }
  const auto rays = double_description(ConeHRep(fc.m, canonical_rows(std::move(restricted)))).rays;
  return canonical_rows(rays) == canonical_rows(fc.cone_in_W.rays);
}

struct SymmetricFacetSearch {
  std::vector<Orbit> orbits;  // facet orbits of C found, by canonical representative
  struct Piece {
    Permutation generator;
    std::size_t fixed_dim = 0;
    std::size_t fixed_facets = 0;
    std::size_t lifted = 0;  // fixed-cone facets that are facets of C
    bool skipped = false;
  };
  std::vector<Piece> pieces;
  std::vector<std::string> notices;
};

/**
 * Facets of C with a nontrivial symmetry: for each cyclic subgroup from the
 * conjugacy classes of G, facets of the fixed cone are lifted to
 * H-invariant functionals and kept when they are facets of C.
 */
inline SymmetricFacetSearch facets_with_symmetry(const ConeVRep& v, const PermGroup& G) {
  check_symmetry(v.rays, G, "rays");
  SymmetricFacetSearch out;
  std::map<QVector, Orbit> found;
  for (const auto& H : cyclic_subgroups_from_classes(G)) {
    SymmetricFacetSearch::Piece piece{H.generators().front(), 0, 0, 0, false};
    const FixedCone fc = fixed_cone(v, H);
    piece.fixed_dim = fc.m;
    if (fc.m <= 1) {
      piece.skipped = true;
      out.notices.push_back("subgroup " + piece.generator.to_cycle_string() + ": fixed cone has dimension " +
                            std::to_string(fc.m) + ", skipped");
      out.pieces.push_back(piece);
      continue;
    }
    const auto facets = dual_description(fc.cone_in_W).facets;
    piece.fixed_facets = facets.size();
    for (const auto& phi : facets) {
      const QVector F = make_primitive(fc.lift_functional(phi));
      if (!is_facet_of(v, F)) continue;
      ++piece.lifted;
      merge_orbit(found, F, G);
    }
    out.pieces.push_back(piece);
  }
  out.orbits = orbit_list(found);
  return out;
}

// ---------------------------------------------------------------------------
// Incidence method

struct IncidenceMethodResult {
  std::vector<Orbit> ray_orbits;
  std::vector<QVector> face_representatives;  // ambient normals summed over each face's tight facets
  std::size_t subcones = 0;
};

namespace detail {

/// A face of an H-described cone given by the equations cutting out its span.
struct HFace {
  std::vector<QVector> equations;
  QMatrix basis;  // rows span the face's linear hull
};

inline HFace make_hface(std::vector<QVector> equations, std::size_t n) {
  HFace f;
  f.basis = nullspace(QMatrix(n, equations));
  f.equations = std::move(equations);
  return f;
}

/// Inequalities restricted to the face's coordinates; zero restrictions are tight.
inline std::vector<std::pair<QVector, std::size_t>> restricted_rows(const ConeHRep& h, const HFace& f) {
  std::vector<std::pair<QVector, std::size_t>> out;
  for (std::size_t i = 0; i < h.facets.size(); ++i) out.emplace_back(mul(f.basis, h.facets[i]), i);
  return out;
}

/// make_primitive of the sum of all facets of C vanishing on the face.
inline QVector face_key(const ConeHRep& h, const HFace& f) {
  QVector s(h.dim);
  for (const auto& [r, i] : restricted_rows(h, f))
    if (is_zero(r)) s = add(s, h.facets[i]);
  return make_primitive(s);
}

}  // namespace detail

/**
 * Extreme-ray orbits of {x : h.x >= 0}. Every extreme ray lies on some face
 * of codimension k; the rays of one representative face per G-orbit are
 * computed by double description and merged into orbits.
 */
inline IncidenceMethodResult incidence_method(const ConeHRep& h, const PermGroup& G, std::size_t k = 1,
                                              const DDOptions& dd = {}) {
  const std::size_t n = h.dim;
  if (k < 1 || k >= n) throw std::out_of_range("incidence_method: k must lie in 1..n-1");
  check_symmetry(h.facets, G, "facets");
  const ConeHRep hc = h.canonical();

  // orbit representatives of faces, one codimension at a time
  std::vector<detail::HFace> level;
  {
    auto part = orbit_partition(hc.facets, G);
    for (const auto& members : part.members) level.push_back(detail::make_hface({hc.facets[members.front()]}, n));
  }
  for (std::size_t depth = 1; depth < k; ++depth) {
    std::map<QVector, detail::HFace> next;
    for (const auto& face : level) {
      const std::size_t d = face.basis.rows();
      std::vector<QVector> rows;
      std::map<QVector, std::size_t> source;
      for (const auto& [r, i] : detail::restricted_rows(hc, face)) {
        if (is_zero(r)) continue;
        QVector p = make_primitive(r);
        source.emplace(p, i);
        rows.push_back(std::move(p));
      }
      rows = canonical_rows(std::move(rows));
      const auto kept = remove_redundancy(QMatrix(d, rows));
      for (const auto& r : kept.kept) {
        auto eqs = face.equations;
        eqs.push_back(hc.facets[source.at(r)]);
        auto sub = detail::make_hface(std::move(eqs), n);
        QVector key = canonical_rep(detail::face_key(hc, sub), G);
        next.emplace(std::move(key), std::move(sub));
      }
    }
    level.clear();
    for (auto& [_, f] : next) level.push_back(std::move(f));
  }

  IncidenceMethodResult out;
  std::map<QVector, Orbit> found;
  for (const auto& face : level) {
    out.face_representatives.push_back(detail::face_key(hc, face));
    const std::size_t d = face.basis.rows();
    std::vector<QVector> rows;
    for (const auto& [r, i] : detail::restricted_rows(hc, face))
      if (!is_zero(r)) rows.push_back(r);
    const auto rays = double_description(ConeHRep(d, canonical_rows(std::move(rows))), dd).rays;
    ++out.subcones;
    for (const auto& c : rays) merge_orbit(found, make_primitive(lift_from(face.basis, c)), G);
  }
  out.ray_orbits = orbit_list(found);
  return out;
}

// ---------------------------------------------------------------------------
// Facets by rotation

/**
 * The facet other than f through a ridge of f. ridge_rays are the rays of
 * the ridge (rank n-2); the result is checked to be a facet tight on the
 * ridge and not parallel to f.
 */
inline QVector ridge_rotate(const QVector& f, const std::vector<QVector>& ridge_rays, const ConeVRep& v) {
  const std::size_t n = v.dim;
  const QMatrix kernel = nullspace(QMatrix(n, ridge_rays));
  if (kernel.rows() != 2) throw PreconditionViolation("ridge_rotate: ridge rays do not have rank n-2");
  std::optional<QVector> w;
  for (const auto& b : kernel)
    if (rank(std::vector<QVector>{f, b}) == 2) {
      w = b;
      break;
    }
  if (!w) throw PreconditionViolation("ridge_rotate: f does not vanish on the ridge");
  // orient w to be nonnegative on the rays of f's face
  for (const auto& e : v.rays) {
    if (sgn(dot(f, e)) != 0) continue;
    const int s = sgn(dot(*w, e));
    if (s < 0) {
      w = negate(*w);
      break;
    }
    if (s > 0) break;
  }
  std::optional<Rational> t;
  for (const auto& e : v.rays) {
    const Rational fe = dot(f, e);
    if (sgn(fe) <= 0) continue;
    Rational q = dot(*w, e) / fe;
    if (!t || q < *t) t = q;
  }
  if (!t) throw std::logic_error("ridge_rotate: no ray off the facet; cone is not full-dimensional");
  QVector g = make_primitive(sub(*w, scale(*t, f)));
  if (!is_facet_of(v, g) || rank(std::vector<QVector>{f, g}) != 2)
    throw std::logic_error("ridge_rotate: result is not a facet adjacent to f");
  for (const auto& r : ridge_rays)
    if (sgn(dot(g, r)) != 0) throw std::logic_error("ridge_rotate: result is not tight on the ridge");
  return g;
}

/** The cone of the rays on a facet, in coordinates of the facet's hyperplane. */
struct FacetCone {
  QMatrix basis;                       // rows span f's orthogonal complement
  std::vector<std::size_t> ray_indices;  // indices into the parent rays
  ConeVRep cone;                       // rays in basis coordinates, same order
};

inline FacetCone facet_cone(const QVector& f, const ConeVRep& v) {
  FacetCone fc;
  fc.basis = nullspace(QMatrix(v.dim, {f}));
  std::vector<QVector> coords;
  for (std::size_t j = 0; j < v.rays.size(); ++j)
    if (sgn(dot(f, v.rays[j])) == 0) {
      fc.ray_indices.push_back(j);
      coords.push_back(coordinates_in(fc.basis, v.rays[j]));
    }
  fc.cone = ConeVRep(fc.basis.rows(), std::move(coords));
  return fc;
}

/// Rays of the ridge cut out of the facet cone by phi.
inline std::vector<QVector> ridge_rays_of(const FacetCone& fc, const QVector& phi, const ConeVRep& v) {
  std::vector<QVector> out;
  for (std::size_t a = 0; a < fc.ray_indices.size(); ++a)
    if (sgn(dot(phi, fc.cone.rays[a])) == 0) out.push_back(v.rays[fc.ray_indices[a]]);
  return out;
}

/** Every facet adjacent to f, via the facets of its facet cone. */
inline std::vector<QVector> facet_neighbors(const QVector& f, const ConeVRep& v, const DDOptions& dd = {}) {
  const FacetCone fc = facet_cone(f, v);
  std::vector<QVector> out;
  for (const auto& phi : dual_description(fc.cone, dd).facets) out.push_back(ridge_rotate(f, ridge_rays_of(fc, phi, v), v));
  return canonical_rows(std::move(out));
}

/**
 * At least one facet of the full-dimensional pointed cone generated by v.
 * A valid functional from an LP witness is rotated about its tight rays
 * until they have rank n-1; further facets come from neighbors.
 */
inline std::vector<QVector> initial_facets(const ConeVRep& v, std::size_t count = 1, const DDOptions& dd = {}) {
  const std::size_t n = v.dim;
  if (rank(QMatrix(n, v.rays)) < n) {
    QMatrix span(n);
    for (auto i : independent_rows(v.rays)) span.push_back(v.rays[i]);
    throw LowerDimensionalCone(std::move(span), n);
  }
  QVector s(n);
  for (const auto& r : v.rays) s = add(s, r);
  ConicLP p;
  p.objective = negate(s);
  p.ge_rows = QMatrix(n, v.rays);
  p.le_rows = QMatrix(n);
  p.eq_rows = QMatrix(n);
  const auto lp = minimize_over_cone(p);
  if (lp.zero_minimum()) throw std::logic_error("initial_facets: cone is not pointed");
  QVector f = make_primitive(lp.witness);
  for (;;) {
    std::vector<QVector> tight;
    for (const auto& r : v.rays)
      if (sgn(dot(f, r)) == 0) tight.push_back(r);
    if (!tight.empty() && rank(QMatrix(n, tight)) + 1 == n) break;
    const QMatrix kernel = tight.empty() ? QMatrix::identity(n) : nullspace(QMatrix(n, tight));
    QVector w;
    for (const auto& b : kernel)
      if (rank(std::vector<QVector>{f, b}) == 2) {
        w = b;
        break;
      }
    bool has_negative = false;
    for (const auto& r : v.rays)
      if (sgn(dot(w, r)) < 0) has_negative = true;
    if (!has_negative) w = negate(w);
    // largest t keeping f + t w valid
    std::optional<Rational> t;
    for (const auto& r : v.rays) {
      const Rational wr = dot(w, r);
      if (sgn(wr) >= 0) continue;
      Rational q = dot(f, r) / -wr;
      if (!t || q < *t) t = q;
    }
    if (!t) throw std::logic_error("initial_facets: cone is not pointed");
    f = make_primitive(add(f, scale(*t, w)));
  }
  if (!is_facet_of(v, f)) throw std::logic_error("initial_facets: rotation did not reach a facet");
  std::vector<QVector> out{f};
  std::set<QVector> seen{f};
  for (std::size_t head = 0; head < out.size() && out.size() < count; ++head)
    for (auto& g : facet_neighbors(out[head], v, dd))
      if (out.size() < count && seen.insert(g).second) out.push_back(g);
  return out;
}

// ---------------------------------------------------------------------------
// Adjacency decomposition

enum class OrbitStatus { Treated, Untreated, Open };
enum class Verdict { Complete, Conjectured, Estimate };

inline const char* to_string(OrbitStatus s) {
  switch (s) {
    case OrbitStatus::Treated: return "TREATED";
    case OrbitStatus::Untreated: return "UNTREATED";
    case OrbitStatus::Open: return "OPEN";
  }
  return "?";
}

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Complete: return "COMPLETE";
    case Verdict::Conjectured: return "CONJECTURED";
    case Verdict::Estimate: return "ESTIMATE";
  }
  return "?";
}

inline Verdict worst(Verdict a, Verdict b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

struct OrbitEntry {
  QVector representative;
  std::uint64_t orbit_size = 0;
  std::uint64_t stabilizer_order = 0;
  std::size_t incidence = 0;
  OrbitStatus status = OrbitStatus::Untreated;
  std::string note;
};

struct DecompositionStats {
  std::size_t rounds = 0;
  std::size_t subcone_dd = 0;
  std::size_t recursive_calls = 0;
  std::size_t ridges_lifted = 0;
  std::size_t max_depth = 0;
};

struct OrbitDatabase {
  std::map<QVector, OrbitEntry> entries;  // keyed by canonical representative
  Verdict verdict = Verdict::Complete;
  std::uint64_t group_order = 1;
  DecompositionStats stats;

  std::uint64_t total_elements() const {
    std::uint64_t t = 0;
    for (const auto& [_, e] : entries) t += e.orbit_size;
    return t;
  }
  std::size_t open_count() const {
    std::size_t c = 0;
    for (const auto& [_, e] : entries) c += e.status != OrbitStatus::Treated;
    return c;
  }
  std::vector<Orbit> orbits() const {
    std::vector<Orbit> out;
    for (const auto& [_, e] : entries) out.push_back(Orbit{e.representative, e.orbit_size, {}, e.stabilizer_order});
    return out;
  }
};

struct DecompositionOptions {
  /// Facets with more incident rays are handled by recursion; unset means 4(n-1).
  std::optional<std::size_t> recursion_threshold;
  std::size_t max_depth = 2;
  std::size_t jobs = 1;
  std::size_t max_orbits = 1'000'000;
  std::vector<QVector> seeds;
  DDOptions dd;
};

namespace detail {

struct DecompEntry {
  QVector facet;  // in the current coordinates, primitive
  std::uint64_t orbit_size = 0;
  std::uint64_t stabilizer_order = 0;
  std::size_t incidence = 0;
  OrbitStatus status = OrbitStatus::Untreated;
  std::string note;
};

struct DecompResult {
  std::map<QVector, DecompEntry> entries;  // keyed by canonical slack vector
  Verdict verdict = Verdict::Complete;
  DecompositionStats stats;
};

inline QVector slack(const QVector& f, const ConeVRep& v) {
  QVector s(v.rays.size());
  for (std::size_t j = 0; j < v.rays.size(); ++j) s[j] = dot(f, v.rays[j]);
  return s;
}

/// Restriction of a group on ray indices to the given (invariant) subset.
inline PermGroup restrict_to(const std::vector<Permutation>& gens, const std::vector<std::size_t>& subset,
                             std::size_t parent_degree, const GroupOptions& opts) {
  std::vector<std::size_t> local(parent_degree, SIZE_MAX);
  for (std::size_t a = 0; a < subset.size(); ++a) local[subset[a]] = a;
  std::vector<Permutation> out;
  for (const auto& g : gens) {
    std::vector<Point> img(subset.size());
    for (std::size_t a = 0; a < subset.size(); ++a) {
      const std::size_t b = local[g(subset[a])];
      if (b == SIZE_MAX) throw std::logic_error("stabilizer does not preserve the facet's rays");
      img[a] = static_cast<Point>(b);
    }
    out.emplace_back(std::move(img));
  }
  return PermGroup(subset.size(), std::move(out), opts);
}

struct TaskOutput {
  std::vector<std::pair<QVector, QVector>> neighbors;  // (canonical slack, facet)
  OrbitStatus status = OrbitStatus::Treated;
  Verdict verdict = Verdict::Complete;
  std::string note;
  DecompositionStats stats;
};

inline DecompResult decompose(const ConeVRep& v, const PermGroup& rays_group, const std::vector<QVector>& seeds,
                              const DecompositionOptions& opts, std::size_t depth);

inline TaskOutput process_facet(const QVector& f, const ConeVRep& v, const PermGroup& rays_group,
                                const DecompositionOptions& opts, std::size_t depth, std::size_t incidence) {
  TaskOutput out;
  const std::size_t n = v.dim;
  const std::size_t threshold = opts.recursion_threshold.value_or(4 * (n - 1));
  try {
    const FacetCone fc = facet_cone(f, v);
    std::vector<QVector> ridges;
    if (incidence > threshold) {
      if (depth >= opts.max_depth) {
        out.status = OrbitStatus::Open;
        out.verdict = Verdict::Conjectured;
        out.note = "incidence " + std::to_string(incidence) + " above threshold at depth limit";
        return out;
      }
      const auto orbit = orbit_of(slack(f, v), rays_group);
      const PermGroup sub =
          restrict_to(orbit.stabilizer_generators, fc.ray_indices, rays_group.degree(), rays_group.options());
      const auto inner = decompose(fc.cone, sub, {}, opts, depth + 1);
      ++out.stats.recursive_calls;
      out.stats.subcone_dd += inner.stats.subcone_dd;
      out.stats.recursive_calls += inner.stats.recursive_calls;
      out.stats.ridges_lifted += inner.stats.ridges_lifted;
      out.stats.max_depth = std::max(inner.stats.max_depth, depth + 1);
      for (const auto& [_, e] : inner.entries) ridges.push_back(e.facet);
      if (inner.verdict != Verdict::Complete) {
        out.status = OrbitStatus::Open;
        out.verdict = inner.verdict;
        out.note = "facet cone decomposition " + std::string(symcone::to_string(inner.verdict));
      }
    } else {
      ridges = dual_description(fc.cone, opts.dd).facets;
      ++out.stats.subcone_dd;
    }
    for (const auto& phi : ridges) {
      QVector g = ridge_rotate(f, ridge_rays_of(fc, phi, v), v);
      ++out.stats.ridges_lifted;
      QVector key = canonical_rep(slack(g, v), rays_group);
      out.neighbors.emplace_back(std::move(key), std::move(g));
    }
  } catch (const ResourceLimit& e) {
    out.status = OrbitStatus::Open;
    out.verdict = Verdict::Estimate;
    out.note = e.what();
  }
  return out;
}

inline DecompResult decompose(const ConeVRep& v, const PermGroup& rays_group, const std::vector<QVector>& seeds,
                              const DecompositionOptions& opts, std::size_t depth) {
  DecompResult db;
  db.stats.max_depth = depth;
  auto insert = [&](const QVector& key, const QVector& f) {
    if (db.entries.count(key)) return true;
    if (db.entries.size() >= opts.max_orbits) return false;
    DecompEntry e;
    e.facet = f;
    const auto orbit = orbit_of(key, rays_group);
    e.orbit_size = orbit.size;
    e.stabilizer_order = orbit.stabilizer_order;
    for (const auto& r : v.rays) e.incidence += sgn(dot(f, r)) == 0;
    db.entries.emplace(key, std::move(e));
    return true;
  };

  std::vector<QVector> start = seeds.empty() ? initial_facets(v, 1, opts.dd) : seeds;
  for (const auto& f : start) {
    if (!is_facet_of(v, f)) throw PreconditionViolation("seed " + to_string(f) + " is not a facet of the cone");
    insert(canonical_rep(slack(f, v), rays_group), make_primitive(f));
  }

  bool capped = false;
  for (;;) {
    std::vector<QVector> batch;
    for (const auto& [key, e] : db.entries)
      if (e.status == OrbitStatus::Untreated) batch.push_back(key);
    if (batch.empty()) break;
    ++db.stats.rounds;
    std::vector<TaskOutput> results(batch.size());
    parallel_for(batch.size(), opts.jobs, [&](std::size_t i) {
      const auto& e = db.entries.at(batch[i]);
      results[i] = process_facet(e.facet, v, rays_group, opts, depth, e.incidence);
    });
    for (std::size_t i = 0; i < batch.size(); ++i) {
      auto& e = db.entries.at(batch[i]);
      auto& r = results[i];
      e.status = r.status;
      e.note = r.note;
      db.verdict = worst(db.verdict, r.verdict);
      db.stats.subcone_dd += r.stats.subcone_dd;
      db.stats.recursive_calls += r.stats.recursive_calls;
      db.stats.ridges_lifted += r.stats.ridges_lifted;
      db.stats.max_depth = std::max(db.stats.max_depth, r.stats.max_depth);
      for (const auto& [key, g] : r.neighbors)
        if (!insert(key, g)) capped = true;
    }
    if (capped) break;
  }
  if (capped) {
    db.verdict = Verdict::Estimate;
    for (auto& [_, e] : db.entries)
      if (e.status == OrbitStatus::Untreated) {
        e.status = OrbitStatus::Open;
        e.note = "orbit cap reached";
      }
  }
  return db;
}

/// Is some generator's negative in the cone of the others (a line in the cone)?
inline std::optional<std::size_t> find_line(const ConeVRep& v) {
  for (std::size_t i = 0; i < v.rays.size(); ++i)
    if (is_redundant(v.rays, negate(v.rays[i]))) return i;
  return std::nullopt;
}

}  // namespace detail

/**
 * Facet orbits of the full-dimensional pointed cone generated by v. Starting
 * from one facet, the ridges of each untreated orbit representative are
 * enumerated in its facet cone and rotated to the neighboring facets, until
 * no untreated orbit remains. Facet cones with too many rays are handled by
 * the same method under the facet's stabilizer.
 */
inline OrbitDatabase adjacency_decomposition(const ConeVRep& v, const PermGroup& G,
                                             const DecompositionOptions& opts = {}) {
  const std::size_t n = v.dim;
  if (G.degree() != n) throw DimensionMismatch("adjacency_decomposition: group degree differs from dimension");
  ConeVRep vc = v.canonical();
  if (rank(QMatrix(n, vc.rays)) < n) {
    QMatrix span(n);
    for (auto i : independent_rows(vc.rays)) span.push_back(vc.rays[i]);
    throw LowerDimensionalCone(std::move(span), n);
  }
  if (auto i = detail::find_line(vc)) throw NonPointedCone(QMatrix(n, {vc.rays[*i]}));
  const PermGroup rays_group = index_action(vc.rays, G);
  const auto inner = detail::decompose(vc, rays_group, opts.seeds, opts, 0);

  OrbitDatabase db;
  db.verdict = inner.verdict;
  db.group_order = G.order();
  db.stats = inner.stats;
  for (const auto& [_, e] : inner.entries) {
    const auto orbit = orbit_of(e.facet, G);
    if (orbit.size != e.orbit_size) throw std::logic_error("facet orbit sizes differ between actions");
    OrbitEntry out{orbit.representative, orbit.size, orbit.stabilizer_order, e.incidence, e.status, e.note};
    db.entries.emplace(out.representative, std::move(out));
  }
  return db;
}

// ---------------------------------------------------------------------------
// Subcone splitting

struct SubconeSplit {
  ConeHRep base;
  std::vector<QVector> split_ineqs;
  ConeVRep known_rays;
};

struct SubconeResult {
  std::vector<Orbit> ray_orbits;    // all extreme-ray orbits of the base cone found
  std::vector<QVector> new_rays;    // extreme rays of the base not among the known rays, sorted
  struct Piece {
    QVector split;
    std::size_t inequalities = 0;  // after redundancy removal
    std::size_t rays = 0;
    std::size_t new_extreme = 0;
  };
  std::vector<Piece> pieces;
};

/**
 * Extreme rays of base from the known subcone base ∩ {p >= 0} and, for one
 * p per G-orbit of the split inequalities, the piece base ∩ {p <= 0}.
 */
inline SubconeResult subcone_method(const SubconeSplit& s, const PermGroup& G, const DDOptions& dd = {}) {
  const std::size_t n = s.base.dim;
  if (s.known_rays.dim != n || G.degree() != n) throw DimensionMismatch("subcone_method: dimensions differ");
  for (const auto& p : s.split_ineqs)
    for (const auto& r : s.known_rays.rays)
      if (sgn(dot(p, r)) < 0)
        throw PreconditionViolation("split inequality " + to_string(p) + " is violated by known ray " + to_string(r));
  check_symmetry(s.base.facets, G, "facets");

  std::vector<QVector> reps;
  if (!s.split_ineqs.empty()) {
    const auto part = orbit_partition(s.split_ineqs, G);
    if (part.stable) {
      for (const auto& m : part.members) reps.push_back(make_primitive(s.split_ineqs[m.front()]));
    } else {
      reps = canonical_rows(s.split_ineqs);
    }
  }

  std::set<QVector> known;
  for (const auto& r : s.known_rays.rays) known.insert(make_primitive(r));
  std::map<QVector, Orbit> found;
  for (const auto& r : known)
    if (is_extreme_ray_of(s.base, r)) merge_orbit(found, r, G);

  SubconeResult out;
  for (const auto& p : reps) {
    SubconeResult::Piece piece;
    piece.split = p;
    auto rows = s.base.facets;
    rows.push_back(negate(p));
    const auto kept = remove_redundancy(QMatrix(n, canonical_rows(std::move(rows))));
    piece.inequalities = kept.kept.rows();
    const auto rays = double_description(ConeHRep(n, kept.kept.row_list()), dd).rays;
    piece.rays = rays.size();
    for (const auto& r : rays) {
      if (!is_extreme_ray_of(s.base, r)) continue;
      if (!known.count(r)) ++piece.new_extreme;
      merge_orbit(found, r, G);
    }
    out.pieces.push_back(std::move(piece));
  }
  out.ray_orbits = orbit_list(found);
  for (auto& r : expand_orbits(out.ray_orbits, G))
    if (!known.count(r)) out.new_rays.push_back(std::move(r));
  return out;
}

}  // namespace symcone
