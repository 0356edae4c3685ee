#pragma once

// Cone representations, the double description conversion, incidence and
// the face lattice.

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "symcone/linalg.hpp"

namespace symcone {

using Bitset = boost::dynamic_bitset<>;

/// Scales every row to a primitive integer vector, drops zero rows,
/// removes duplicates and sorts lexicographically.
inline std::vector<QVector> canonical_rows(std::vector<QVector> rows) {
  std::vector<QVector> out;
  out.reserve(rows.size());
  for (auto& r : rows)
    if (!is_zero(r)) out.push_back(make_primitive(r));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/** Cone { x : a . x >= 0 for every row a }. */
struct ConeHRep {
  std::size_t dim = 0;
  std::vector<QVector> facets;

  ConeHRep() = default;
  ConeHRep(std::size_t n, std::vector<QVector> rows) : dim(n), facets(std::move(rows)) {
    for (const auto& r : facets)
      if (r.size() != dim) throw DimensionMismatch("inequality of length " + std::to_string(r.size()) + " in dimension " + std::to_string(dim));
  }

  QMatrix matrix() const { return QMatrix(dim, facets); }
  ConeHRep canonical() const { return ConeHRep(dim, canonical_rows(facets)); }
  friend bool operator==(const ConeHRep&, const ConeHRep&) = default;
};

/** Cone generated by nonnegative combinations of the rays. */
struct ConeVRep {
  std::size_t dim = 0;
  std::vector<QVector> rays;

  ConeVRep() = default;
  ConeVRep(std::size_t n, std::vector<QVector> rs) : dim(n), rays(std::move(rs)) {
    for (const auto& r : rays)
      if (r.size() != dim) throw DimensionMismatch("ray of length " + std::to_string(r.size()) + " in dimension " + std::to_string(dim));
  }

  QMatrix matrix() const { return QMatrix(dim, rays); }
  ConeVRep canonical() const { return ConeVRep(dim, canonical_rows(rays)); }
  friend bool operator==(const ConeVRep&, const ConeVRep&) = default;
};

/** The inequalities define a cone with a nontrivial lineality space. */
class NonPointedCone : public Error {
 public:
  NonPointedCone(QMatrix basis)
      : Error("cone is not pointed: lineality space has dimension " + std::to_string(basis.rows())),
        lineality(std::move(basis)) {}
  QMatrix lineality;
};

/** The generators do not span the ambient space. */
class LowerDimensionalCone : public Error {
 public:
  LowerDimensionalCone(QMatrix basis, std::size_t n)
      : Error("cone has dimension " + std::to_string(basis.rows()) + " in ambient dimension " + std::to_string(n)),
        span(std::move(basis)) {}
  QMatrix span;
};

/** An H- and a V-description that cannot describe the same cone. */
class InconsistentDescriptions : public Error {
 public:
  InconsistentDescriptions(const std::string& what, std::size_t facet, std::size_t ray)
      : Error(what), facet_index(facet), ray_index(ray) {}
  std::size_t facet_index;
  std::size_t ray_index;
};

// ---------------------------------------------------------------------------
// Double description

struct DDOptions {
  std::size_t max_rays = 5'000'000;
};

struct DDStats {
  std::size_t insertions = 0;
  std::size_t max_intermediate_rays = 0;
  std::vector<std::size_t> insertion_order;
};

namespace detail {

struct DDRay {
  QVector v;
  Bitset zero;  // indices of processed inequalities tight on v
};

}  // namespace detail

/**
 * Extreme rays of a pointed cone given by inequalities.
 *
 * Starts from the simplicial cone of n independent inequalities and adds the
 * rest one at a time. After each step the ray list is exactly the set of
 * extreme rays of the cone cut out so far. Two rays are combined when they
 * are adjacent, which is tested combinatorially: no third ray is tight on
 * every inequality tight on both. The next inequality is the one cutting off
 * the fewest current rays.
 *
 * Lower-dimensional pointed cones are handled without special casing.
 * Throws NonPointedCone (with a lineality basis) otherwise.
 */
inline ConeVRep double_description(const ConeHRep& h, const DDOptions& opts = {}, DDStats* stats = nullptr) {
  const std::size_t n = h.dim;
  const std::vector<QVector> rows = canonical_rows(h.facets);
  const std::size_t m = rows.size();
  if (n == 0) return ConeVRep(0, {});
  {
    QMatrix lin = nullspace(QMatrix(n, rows));
    if (!lin.empty()) throw NonPointedCone(std::move(lin));
  }

  // Initial simplicial cone: rays are the columns of B^{-1}.
  std::vector<std::size_t> basis_rows;
  {
    std::vector<QVector> acc;
    for (std::size_t i = 0; i < m && basis_rows.size() < n; ++i) {
      acc.push_back(rows[i]);
      if (rank(acc) == acc.size()) {
        basis_rows.push_back(i);
      } else {
        acc.pop_back();
      }
    }
  }
  QMatrix B(n);
  for (auto i : basis_rows) B.push_back(rows[i]);
  std::vector<detail::DDRay> rays;
  std::vector<bool> processed(m, false);
  for (auto i : basis_rows) processed[i] = true;
  for (std::size_t k = 0; k < n; ++k) {
    QVector e(n);
    e[k] = 1;
    auto x = solve(B, e);
    detail::DDRay r{make_primitive(*x), Bitset(m)};
    for (std::size_t t = 0; t < n; ++t)
      if (t != k) r.zero.set(basis_rows[t]);
    rays.push_back(std::move(r));
  }
  if (stats) {
    stats->insertion_order = basis_rows;
    stats->insertions = n;
    stats->max_intermediate_rays = n;
  }

  for (std::size_t step = n; step < m; ++step) {
    // pick the unprocessed inequality violated by the fewest rays
    std::size_t best = m;
    std::size_t best_violations = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (processed[i]) continue;
      std::size_t viol = 0;
      for (const auto& r : rays)
        if (sgn(dot(rows[i], r.v)) < 0) ++viol;
      if (best == m || viol < best_violations) {
        best = i;
        best_violations = viol;
      }
    }
    const QVector& a = rows[best];
    processed[best] = true;

    std::vector<Rational> val(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t j = 0; j < rays.size(); ++j) {
      val[j] = dot(a, rays[j].v);
      const int s = sgn(val[j]);
      if (s > 0) pos.push_back(j);
      else if (s < 0) neg.push_back(j);
      else rays[j].zero.set(best);
    }

    std::vector<detail::DDRay> created;
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        Bitset common = rays[p].zero & rays[q].zero;
        if (common.count() + 2 < n) continue;
        bool adjacent = true;
        for (std::size_t t = 0; t < rays.size() && adjacent; ++t) {
          if (t == p || t == q) continue;
          if (common.is_subset_of(rays[t].zero)) adjacent = false;
        }
        if (!adjacent) continue;
        QVector x(n);
        for (std::size_t k = 0; k < n; ++k) x[k] = val[p] * rays[q].v[k] - val[q] * rays[p].v[k];
        common.set(best);
        created.push_back({make_primitive(x), std::move(common)});
      }
    }

    std::vector<detail::DDRay> next;
    next.reserve(rays.size() - neg.size() + created.size());
    for (std::size_t j = 0; j < rays.size(); ++j)
      if (sgn(val[j]) >= 0) next.push_back(std::move(rays[j]));
    for (auto& c : created) next.push_back(std::move(c));
    rays = std::move(next);
    if (rays.size() > opts.max_rays)
      throw ResourceLimit("double description exceeded " + std::to_string(opts.max_rays) + " rays");
    if (stats) {
      stats->insertion_order.push_back(best);
      ++stats->insertions;
      stats->max_intermediate_rays = std::max(stats->max_intermediate_rays, rays.size());
    }
  }

  std::vector<QVector> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.v));
  return ConeVRep(n, canonical_rows(std::move(out)));
}

/**
 * Facets of the cone generated by v, as the extreme rays of the dual cone.
 * Throws LowerDimensionalCone (with a basis of the span) when the rays do
 * not span the ambient space.
 */
inline ConeHRep dual_description(const ConeVRep& v, const DDOptions& opts = {}, DDStats* stats = nullptr) {
  const std::size_t n = v.dim;
  if (rank(QMatrix(n, v.rays)) < n) {
    QMatrix span(n);
    for (auto i : independent_rows(v.rays)) span.push_back(v.rays[i]);
    throw LowerDimensionalCone(std::move(span), n);
  }
  ConeVRep dual = double_description(ConeHRep(n, v.rays), opts, stats);
  return ConeHRep(n, std::move(dual.rays));
}

// ---------------------------------------------------------------------------
// Incidence and validation

/** bits[i][j] is set iff facet i is tight on ray j. */
struct IncidenceMatrix {
  std::size_t facet_count = 0;
  std::size_t ray_count = 0;
  std::vector<Bitset> facet_rays;  // per facet, over rays
  std::vector<Bitset> ray_facets;  // per ray, over facets

  bool tight(std::size_t facet, std::size_t ray) const { return facet_rays[facet].test(ray); }
  std::size_t facet_incidence(std::size_t facet) const { return facet_rays[facet].count(); }
  std::size_t ray_incidence(std::size_t ray) const { return ray_facets[ray].count(); }
};

/** Zero pattern of facet . ray; throws InconsistentDescriptions on a negative product. */
inline IncidenceMatrix incidence(const ConeHRep& h, const ConeVRep& v) {
  if (h.dim != v.dim) throw DimensionMismatch("incidence: H and V descriptions have different dimension");
  IncidenceMatrix inc;
  inc.facet_count = h.facets.size();
  inc.ray_count = v.rays.size();
  inc.facet_rays.assign(inc.facet_count, Bitset(inc.ray_count));
  inc.ray_facets.assign(inc.ray_count, Bitset(inc.facet_count));
  for (std::size_t i = 0; i < inc.facet_count; ++i) {
    for (std::size_t j = 0; j < inc.ray_count; ++j) {
      const int s = sgn(dot(h.facets[i], v.rays[j]));
      if (s < 0)
        throw InconsistentDescriptions("facet " + std::to_string(i) + " is violated by ray " + std::to_string(j), i, j);
      if (s == 0) {
        inc.facet_rays[i].set(j);
        inc.ray_facets[j].set(i);
      }
    }
  }
  return inc;
}

/// Rank of the rows selected by a bitset.
inline std::size_t rank_of_selection(const std::vector<QVector>& rows, const Bitset& sel, std::size_t dim) {
  std::vector<QVector> picked;
  for (auto i = sel.find_first(); i != Bitset::npos; i = sel.find_next(i)) picked.push_back(rows[i]);
  return picked.empty() ? 0 : rank(QMatrix(dim, picked));
}

/** Valid on every ray and tight on rays of rank n-1. */
inline bool is_facet_of(const ConeVRep& v, const QVector& candidate) {
  if (candidate.size() != v.dim) throw DimensionMismatch("is_facet_of: candidate has wrong length");
  std::vector<QVector> tight;
  for (const auto& r : v.rays) {
    const int s = sgn(dot(candidate, r));
    if (s < 0) return false;
    if (s == 0) tight.push_back(r);
  }
  return v.dim >= 1 && !is_zero(candidate) && rank(QMatrix(v.dim, tight)) == v.dim - 1;
}

/** Satisfies every inequality and the tight inequalities have rank n-1. */
inline bool is_extreme_ray_of(const ConeHRep& h, const QVector& candidate) {
  if (candidate.size() != h.dim) throw DimensionMismatch("is_extreme_ray_of: candidate has wrong length");
  if (is_zero(candidate)) return false;
  std::vector<QVector> tight;
  for (const auto& a : h.facets) {
    const int s = sgn(dot(a, candidate));
    if (s < 0) return false;
    if (s == 0) tight.push_back(a);
  }
  return h.dim >= 1 && rank(QMatrix(h.dim, tight)) == h.dim - 1;
}

// ---------------------------------------------------------------------------
// Face lattice

/**
 * A face, identified by its closed tight-facet set. spanning_rays are the
 * extreme rays lying on it; dim = n - rank(tight facet normals).
 */
struct Face {
  Bitset tight_facets;
  Bitset spanning_rays;
  std::size_t dim = 0;

  friend bool operator==(const Face& a, const Face& b) { return a.tight_facets == b.tight_facets; }
  friend bool operator<(const Face& a, const Face& b) { return a.tight_facets < b.tight_facets; }
};

/**
 * Both descriptions of one cone with their incidence. Faces are computed
 * against this data.
 */
class FaceLattice {
 public:
  FaceLattice(ConeHRep h, ConeVRep v) : h_(std::move(h)), v_(std::move(v)), inc_(incidence(h_, v_)) {}

  const ConeHRep& hrep() const { return h_; }
  const ConeVRep& vrep() const { return v_; }
  const IncidenceMatrix& inc() const { return inc_; }
  std::size_t dim() const { return h_.dim; }

  /// Rays tight on all given facets, then facets tight on all those rays.
  Face closure(const Bitset& tight) const {
    Face f;
    f.spanning_rays = Bitset(inc_.ray_count);
    f.spanning_rays.set();
    for (auto i = tight.find_first(); i != Bitset::npos; i = tight.find_next(i)) f.spanning_rays &= inc_.facet_rays[i];
    f.tight_facets = Bitset(inc_.facet_count);
    f.tight_facets.set();
    for (auto j = f.spanning_rays.find_first(); j != Bitset::npos; j = f.spanning_rays.find_next(j))
      f.tight_facets &= inc_.ray_facets[j];
    f.dim = dim() - rank_of_selection(h_.facets, f.tight_facets, dim());
    return f;
  }

  /// Smallest face containing the given rays.
  Face closure_of_rays(const Bitset& rays) const {
    Bitset tight(inc_.facet_count);
    tight.set();
    for (auto j = rays.find_first(); j != Bitset::npos; j = rays.find_next(j)) tight &= inc_.ray_facets[j];
    return closure(tight);
  }

  Face whole() const { return closure(Bitset(inc_.facet_count)); }
  Face facet_face(std::size_t i) const {
    Bitset t(inc_.facet_count);
    t.set(i);
    return closure(t);
  }
  Face ray_face(std::size_t j) const {
    Bitset r(inc_.ray_count);
    r.set(j);
    return closure_of_rays(r);
  }

  /// Largest face contained in both.
  Face inf(const Face& a, const Face& b) const { return closure(a.tight_facets | b.tight_facets); }
  /// Smallest face containing both.
  Face sup(const Face& a, const Face& b) const { return closure(a.tight_facets & b.tight_facets); }

 private:
  ConeHRep h_;
  ConeVRep v_;
  IncidenceMatrix inc_;
};

inline Face face_closure(const Bitset& tight, const FaceLattice& lat) { return lat.closure(tight); }
inline Face face_inf(const Face& a, const Face& b, const FaceLattice& lat) { return lat.inf(a, b); }
inline Face face_sup(const Face& a, const Face& b, const FaceLattice& lat) { return lat.sup(a, b); }

inline Bitset bitset_of(std::size_t size, std::initializer_list<std::size_t> idx) {
  Bitset b(size);
  for (auto i : idx) b.set(i);
  return b;
}

}  // namespace symcone
