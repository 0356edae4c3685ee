#pragma once

// Permutation groups acting on coordinates: orbits by explicit BFS,
// stabilizers by Schreier's lemma, lexicographic canonical representatives
// and conjugacy-class representatives.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "symcone/linalg.hpp"

namespace symcone {

using Point = std::uint32_t;

class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<Point> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (Point p : images_) {
      if (p >= images_.size() || seen[p]) throw std::invalid_argument("permutation images are not a bijection");
      seen[p] = true;
    }
  }

  static Permutation identity(std::size_t m) {
    std::vector<Point> im(m);
    std::iota(im.begin(), im.end(), Point{0});
    return Permutation(std::move(im));
  }

  /// Builds from disjoint cycles given with 0-based points.
  static Permutation from_cycles(std::size_t m, const std::vector<std::vector<Point>>& cycles) {
    std::vector<Point> im(m);
    std::iota(im.begin(), im.end(), Point{0});
    std::vector<bool> used(m, false);
    for (const auto& c : cycles) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] >= m) throw std::invalid_argument("cycle point out of range");
        if (used[c[i]]) throw std::invalid_argument("cycles are not disjoint");
        used[c[i]] = true;
        im[c[i]] = c[(i + 1) % c.size()];
      }
    }
    return Permutation(std::move(im));
  }

  static Permutation transposition(std::size_t m, Point a, Point b) { return from_cycles(m, {{a, b}}); }

  std::size_t degree() const { return images_.size(); }
  Point operator()(std::size_t i) const { return images_[i]; }
  const std::vector<Point>& images() const { return images_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  Permutation inverse() const {
    std::vector<Point> inv(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i]] = static_cast<Point>(i);
    Permutation p;
    p.images_ = std::move(inv);
    return p;
  }

  /// Composition: (g * h)(i) = g(h(i)).
  friend Permutation operator*(const Permutation& g, const Permutation& h) {
    if (g.degree() != h.degree()) throw DimensionMismatch("composing permutations of different degree");
    Permutation p;
    p.images_.resize(h.degree());
    for (std::size_t i = 0; i < h.degree(); ++i) p.images_[i] = g.images_[h.images_[i]];
    return p;
  }

  std::vector<std::vector<Point>> cycles() const {
    std::vector<std::vector<Point>> out;
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (seen[i] || images_[i] == i) continue;
      std::vector<Point> c;
      for (Point j = static_cast<Point>(i); !seen[j]; j = images_[j]) {
        seen[j] = true;
        c.push_back(j);
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  /// Element order (lcm of cycle lengths).
  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (const auto& c : cycles()) o = std::lcm(o, static_cast<std::uint64_t>(c.size()));
    return o;
  }

  /// Cycle notation with 1-based points; the identity prints as "()".
  std::string to_cycle_string() const {
    const auto cs = cycles();
    if (cs.empty()) return "()";
    std::string s;
    for (const auto& c : cs) {
      s += '(';
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(c[i] + 1);
      }
      s += ')';
    }
    return s;
  }

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.images_ == b.images_; }
  friend bool operator<(const Permutation& a, const Permutation& b) { return a.images_ < b.images_; }

 private:
  std::vector<Point> images_;
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const {
    std::size_t h = p.degree();
    for (Point x : p.images()) h = h * 1000003u ^ x;
    return h;
  }
};

/** Coordinate action: result[g(i)] = v[i]. */
inline QVector act(const Permutation& g, const QVector& v) {
  if (g.degree() != v.size())
    throw DimensionMismatch("permutation of degree " + std::to_string(g.degree()) + " acting on vector of length " +
                            std::to_string(v.size()));
  QVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[g(i)] = v[i];
  return r;
}

// ---------------------------------------------------------------------------
// Pair coordinates

/**
 * Enumerates the pairs {i,j}, i < j, of n points in the order
 * (0,1), (0,2), ..., (0,n-1), (1,2), ..., (n-2,n-1).
 */
class PairIndex {
 public:
  explicit PairIndex(std::size_t n) : n_(n) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs_.emplace_back(i, j);
  }

  std::size_t points() const { return n_; }
  std::size_t size() const { return pairs_.size(); }
  std::pair<std::size_t, std::size_t> pair(std::size_t k) const { return pairs_[k]; }

  std::size_t index(std::size_t i, std::size_t j) const {
    if (i == j || i >= n_ || j >= n_) throw std::out_of_range("pair index");
    if (i > j) std::swap(i, j);
    // offset of row i: sum_{r<i} (n-1-r)
    return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
  }

 private:
  std::size_t n_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

/** The permutation of pair coordinates induced by a permutation of points. */
inline Permutation induced_pair_action(const Permutation& g) {
  const PairIndex idx(g.degree());
  std::vector<Point> im(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    auto [i, j] = idx.pair(k);
    im[k] = static_cast<Point>(idx.index(g(i), g(j)));
  }
  return Permutation(std::move(im));
}

// ---------------------------------------------------------------------------
// Groups

struct GroupOptions {
  /// Largest group, orbit, or conjugacy class that is enumerated explicitly.
  std::size_t element_cap = 1'000'000;
};

/// How a group known to be Sym(n) is realized on the coordinates.
enum class SymmetricRealization { Natural, Pairs };

class PermGroup {
 public:
  PermGroup() = default;

  PermGroup(std::size_t degree, std::vector<Permutation> generators, GroupOptions opts = {})
      : degree_(degree), opts_(opts) {
    for (auto& g : generators) {
      if (g.degree() != degree) throw DimensionMismatch("group generator has wrong degree");
      if (!g.is_identity()) generators_.push_back(std::move(g));
    }
    order_ = enumerate_closure(generators_).size();
  }

  static PermGroup trivial(std::size_t degree) { return PermGroup(degree, {}); }

  /// Sym(n) on n points, generated by (0 1) and (0 1 ... n-1).
  static PermGroup symmetric(std::size_t n, GroupOptions opts = {}) {
    return tagged_symmetric(n, n, symmetric_generators(n), SymmetricRealization::Natural, opts);
  }

  /// Sym(n) acting on the C(n,2) pair coordinates.
  static PermGroup symmetric_on_pairs(std::size_t n, GroupOptions opts = {}) {
    std::vector<Permutation> gens;
    for (const auto& g : symmetric_generators(n)) gens.push_back(induced_pair_action(g));
    return tagged_symmetric(n, n * (n - 1) / 2, std::move(gens), SymmetricRealization::Pairs, opts);
  }

  std::size_t degree() const { return degree_; }
  const std::vector<Permutation>& generators() const { return generators_; }
  std::uint64_t order() const { return order_; }
  const GroupOptions& options() const { return opts_; }
  bool is_trivial() const { return generators_.empty(); }

  /// Set when the group is known to be Sym(n) in one of the standard realizations.
  std::optional<std::pair<std::size_t, SymmetricRealization>> symmetric_tag() const { return sym_tag_; }

  std::vector<Permutation> elements() const { return enumerate_closure(generators_); }

  /// Closure of the generators under composition, identity first.
  std::vector<Permutation> enumerate_closure(const std::vector<Permutation>& gens) const {
    std::vector<Permutation> elems{Permutation::identity(degree_)};
    std::unordered_set<Permutation, PermutationHash> seen(elems.begin(), elems.end());
    for (std::size_t head = 0; head < elems.size(); ++head) {
      for (const auto& s : gens) {
        Permutation x = s * elems[head];
        if (seen.insert(x).second) {
          if (elems.size() >= opts_.element_cap)
            throw ResourceLimit("group enumeration exceeded " + std::to_string(opts_.element_cap) + " elements");
          elems.push_back(std::move(x));
        }
      }
    }
    return elems;
  }

 private:
  static std::vector<Permutation> symmetric_generators(std::size_t n) {
    std::vector<Permutation> gens;
    if (n >= 2) gens.push_back(Permutation::transposition(n, 0, 1));
    if (n >= 3) {
      std::vector<Point> cyc(n);
      std::iota(cyc.begin(), cyc.end(), Point{0});
      gens.push_back(Permutation::from_cycles(n, {cyc}));
    }
    return gens;
  }

  static PermGroup tagged_symmetric(std::size_t n, std::size_t degree, std::vector<Permutation> gens,
                                    SymmetricRealization how, GroupOptions opts) {
    PermGroup g;
    g.degree_ = degree;
    g.opts_ = opts;
    for (auto& x : gens)
      if (!x.is_identity()) g.generators_.push_back(std::move(x));
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    g.order_ = f;
    g.sym_tag_ = std::make_pair(n, how);
    return g;
  }

  std::size_t degree_ = 0;
  std::vector<Permutation> generators_;
  std::uint64_t order_ = 1;
  GroupOptions opts_;
  std::optional<std::pair<std::size_t, SymmetricRealization>> sym_tag_;
};

// ---------------------------------------------------------------------------
// Orbits

/**
 * An orbit of vectors under a permutation group. `size * stabilizer_order`
 * equals the group order; both sides are computed independently.
 */
struct Orbit {
  QVector representative;
  std::uint64_t size = 0;
  std::vector<Permutation> stabilizer_generators;
  std::uint64_t stabilizer_order = 0;
};

namespace detail {

struct OrbitEnumeration {
  std::vector<QVector> elements;
  std::vector<Permutation> transversal;  // transversal[i] maps elements[0] to elements[i]
  std::unordered_map<QVector, std::size_t, QVectorHash> index;
};

inline OrbitEnumeration enumerate_orbit(const QVector& start, const PermGroup& G, bool with_transversal) {
  OrbitEnumeration e;
  e.elements.push_back(start);
  e.index.emplace(start, 0);
  if (with_transversal) e.transversal.push_back(Permutation::identity(G.degree()));
  for (std::size_t head = 0; head < e.elements.size(); ++head) {
    for (const auto& s : G.generators()) {
      QVector w = act(s, e.elements[head]);
      if (e.index.count(w)) continue;
      if (e.elements.size() >= G.options().element_cap)
        throw ResourceLimit("orbit exceeded " + std::to_string(G.options().element_cap) + " elements");
      e.index.emplace(w, e.elements.size());
      e.elements.push_back(std::move(w));
      if (with_transversal) e.transversal.push_back(s * e.transversal[head]);
    }
  }
  return e;
}

}  // namespace detail

/**
 * Orbit of v (scaled to a primitive integer vector) with stabilizer
 * generators from Schreier's lemma. Schreier generators already in the
 * subgroup generated so far are dropped.
 */
inline Orbit orbit_of(const QVector& v, const PermGroup& G) {
  if (v.size() != G.degree()) throw DimensionMismatch("orbit_of: vector length differs from group degree");
  if (is_zero(v)) throw std::invalid_argument("orbit_of: zero vector");
  const QVector start = make_primitive(v);
  const auto e = detail::enumerate_orbit(start, G, true);

  Orbit o;
  o.size = e.elements.size();
  o.representative = *std::min_element(e.elements.begin(), e.elements.end());

  std::vector<Permutation> stab_elems{Permutation::identity(G.degree())};
  std::unordered_set<Permutation, PermutationHash> stab_set(stab_elems.begin(), stab_elems.end());
  for (std::size_t i = 0; i < e.elements.size(); ++i) {
    for (const auto& s : G.generators()) {
      const std::size_t j = e.index.at(act(s, e.elements[i]));
      Permutation sg = e.transversal[j].inverse() * s * e.transversal[i];
      if (stab_set.count(sg)) continue;
      o.stabilizer_generators.push_back(sg);
      stab_elems = G.enumerate_closure(o.stabilizer_generators);
      stab_set = std::unordered_set<Permutation, PermutationHash>(stab_elems.begin(), stab_elems.end());
    }
  }
  o.stabilizer_order = stab_elems.size();
  return o;
}

/** Lexicographic minimum of the orbit of make_primitive(v). */
inline QVector canonical_rep(const QVector& v, const PermGroup& G) {
  if (v.size() != G.degree()) throw DimensionMismatch("canonical_rep: vector length differs from group degree");
  if (is_zero(v)) throw std::invalid_argument("canonical_rep: zero vector");
  const auto e = detail::enumerate_orbit(make_primitive(v), G, false);
  return *std::min_element(e.elements.begin(), e.elements.end());
}

/** All elements of the orbit of make_primitive(v), in BFS order. */
inline std::vector<QVector> orbit_elements(const QVector& v, const PermGroup& G) {
  return detail::enumerate_orbit(make_primitive(v), G, false).elements;
}

struct OrbitPartition {
  std::vector<Orbit> orbits;
  /// members[k] lists the input indices falling in orbits[k].
  std::vector<std::vector<std::size_t>> members;
  /// False when some orbit leaves the input set.
  bool stable = true;
  /// Orbit elements not present in the input (only filled when !stable).
  std::vector<QVector> extension;
};

/**
 * Partitions vs into orbits under G. Orbits are listed by increasing
 * canonical representative.
 */
inline OrbitPartition orbit_partition(const std::vector<QVector>& vs, const PermGroup& G) {
  std::unordered_map<QVector, std::size_t, QVectorHash> where;
  for (std::size_t i = 0; i < vs.size(); ++i) where.emplace(make_primitive(vs[i]), i);

  struct Found {
    Orbit orbit;
    std::vector<std::size_t> members;
  };
  std::vector<Found> found;
  std::vector<bool> assigned(vs.size(), false);
  OrbitPartition out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (assigned[i]) continue;
    Found f;
    f.orbit = orbit_of(vs[i], G);
    for (const auto& w : orbit_elements(vs[i], G)) {
      auto it = where.find(w);
      if (it == where.end()) {
        out.stable = false;
        out.extension.push_back(w);
        continue;
      }
      if (!assigned[it->second]) {
        assigned[it->second] = true;
        f.members.push_back(it->second);
      }
    }
    std::sort(f.members.begin(), f.members.end());
    found.push_back(std::move(f));
  }
  std::sort(found.begin(), found.end(),
            [](const Found& a, const Found& b) { return a.orbit.representative < b.orbit.representative; });
  std::sort(out.extension.begin(), out.extension.end());
  for (auto& f : found) {
    out.orbits.push_back(std::move(f.orbit));
    out.members.push_back(std::move(f.members));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conjugacy classes

/// Integer partitions of n, each in non-increasing order, listed in reverse
/// lexicographic order starting from (n).
inline std::vector<std::vector<std::size_t>> integer_partitions(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t remaining, std::size_t max_part) -> void {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (std::size_t p = std::min(remaining, max_part); p >= 1; --p) {
      cur.push_back(p);
      self(self, remaining - p, p);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

/// A permutation of n points with the given cycle type (consecutive cycles).
inline Permutation permutation_with_cycle_type(std::size_t n, const std::vector<std::size_t>& type) {
  std::vector<std::vector<Point>> cycles;
  Point next = 0;
  for (std::size_t len : type) {
    std::vector<Point> c;
    for (std::size_t i = 0; i < len; ++i) c.push_back(next++);
    if (len > 1) cycles.push_back(std::move(c));
  }
  if (next != n) throw std::invalid_argument("cycle type does not sum to n");
  return Permutation::from_cycles(n, cycles);
}

/**
 * One representative per conjugacy class of elements, identity first.
 *
 * Groups tagged as Sym(n) use cycle types (integer partitions of n), so the
 * order of the group never needs to be enumerated. Other groups are
 * enumerated and split into classes by closing each element under
 * conjugation by the generators; each class is represented by its
 * lexicographically smallest element.
 */
inline std::vector<Permutation> conjugacy_class_reps(const PermGroup& G) {
  if (auto tag = G.symmetric_tag()) {
    const auto [n, how] = *tag;
    std::vector<Permutation> reps;
    auto parts = integer_partitions(n);
    std::reverse(parts.begin(), parts.end());  // (1,1,...,1) first: the identity
    for (const auto& p : parts) {
      Permutation g = permutation_with_cycle_type(n, p);
      reps.push_back(how == SymmetricRealization::Pairs ? induced_pair_action(g) : g);
    }
    return reps;
  }
  const auto elems = G.elements();
  std::unordered_set<Permutation, PermutationHash> classified;
  std::vector<Permutation> reps;
  std::vector<Permutation> gens_inv;
  for (const auto& s : G.generators()) gens_inv.push_back(s.inverse());
  for (const auto& x : elems) {
    if (classified.count(x)) continue;
    std::vector<Permutation> cls{x};
    classified.insert(x);
    for (std::size_t head = 0; head < cls.size(); ++head) {
      for (std::size_t k = 0; k < G.generators().size(); ++k) {
        Permutation y = G.generators()[k] * cls[head] * gens_inv[k];
        if (classified.insert(y).second) cls.push_back(std::move(y));
      }
    }
    reps.push_back(*std::min_element(cls.begin(), cls.end()));
  }
  // identity is the smallest element of its own class and is listed first
  std::sort(reps.begin() + 1, reps.end());
  return reps;
}

/** The cyclic group generated by each non-identity class representative. */
inline std::vector<PermGroup> cyclic_subgroups_from_classes(const PermGroup& G) {
  std::vector<PermGroup> out;
  for (const auto& g : conjugacy_class_reps(G)) {
    if (g.is_identity()) continue;
    out.emplace_back(G.degree(), std::vector<Permutation>{g}, G.options());
  }
  return out;
}

/// Stabilizer of v as a group (generators from orbit_of).
inline PermGroup stabilizer(const QVector& v, const PermGroup& G) {
  return PermGroup(G.degree(), orbit_of(v, G).stabilizer_generators, G.options());
}

}  // namespace symcone
