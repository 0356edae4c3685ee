#pragma once

// Cut and metric cones on n points, coordinates indexed by the pairs of
// PairIndex, with Sym(n) acting on the pair coordinates.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symcone/cone.hpp"
#include "symcone/group.hpp"

namespace symcone {

inline void check_instance_size(std::size_t n) {
  if (n < 3 || n > 8) throw std::out_of_range("instance size n=" + std::to_string(n) + " outside 3..8");
}

/// delta_S(ij) = 1 iff exactly one of i, j lies in S.
inline QVector cut_vector(std::size_t n, const std::vector<std::size_t>& S) {
  const PairIndex idx(n);
  std::vector<bool> in(n, false);
  for (auto s : S) in.at(s) = true;
  QVector v(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    auto [i, j] = idx.pair(k);
    if (in[i] != in[j]) v[k] = 1;
  }
  return v;
}

/// x_ik + x_kj - x_ij >= 0
inline QVector triangle_inequality(std::size_t n, std::size_t i, std::size_t j, std::size_t k) {
  const PairIndex idx(n);
  QVector v(idx.size());
  v[idx.index(i, k)] += 1;
  v[idx.index(k, j)] += 1;
  v[idx.index(i, j)] -= 1;
  return v;
}

/// -sum_{i<j} b_i b_j x_ij >= 0 for an integer vector b.
inline QVector hypermetric_inequality(const std::vector<long>& b) {
  const std::size_t n = b.size();
  const PairIndex idx(n);
  QVector v(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    auto [i, j] = idx.pair(k);
    v[k] = -b[i] * b[j];
  }
  return v;
}

/// The pentagonal inequalities on 5 points: b has three entries 1 and two entries -1.
inline std::vector<QVector> pentagonal_inequalities() {
  std::vector<QVector> out;
  for (std::size_t p = 0; p < 5; ++p)
    for (std::size_t q = p + 1; q < 5; ++q) {
      std::vector<long> b(5, 1);
      b[p] = b[q] = -1;
      out.push_back(hypermetric_inequality(b));
    }
  return canonical_rows(std::move(out));
}

struct CutConeInstance {
  ConeVRep cone;
  PermGroup group;
};

struct MetricConeInstance {
  ConeHRep cone;
  PermGroup group;
};

/** The 2^{n-1} - 1 cut semimetrics (subsets S not containing point n-1). */
inline CutConeInstance generate_cut_cone(std::size_t n) {
  check_instance_size(n);
  std::vector<QVector> rays;
  for (std::size_t mask = 1; mask < (std::size_t{1} << (n - 1)); ++mask) {
    std::vector<std::size_t> S;
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (mask >> i & 1) S.push_back(i);
    rays.push_back(cut_vector(n, S));
  }
  const std::size_t d = n * (n - 1) / 2;
  return {ConeVRep(d, canonical_rows(std::move(rays))), PermGroup::symmetric_on_pairs(n)};
}

/** All 3 * C(n,3) triangle inequalities. */
inline MetricConeInstance generate_metric_cone(std::size_t n) {
  check_instance_size(n);
  std::vector<QVector> rows;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (k != i && k != j) rows.push_back(triangle_inequality(n, i, j, k));
  const std::size_t d = n * (n - 1) / 2;
  return {ConeHRep(d, canonical_rows(std::move(rows))), PermGroup::symmetric_on_pairs(n)};
}

}  // namespace symcone
