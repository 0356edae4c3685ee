#pragma once

// Exact linear programming over cones. Every program here has a conic
// feasible set, so the minimum of a linear objective is either 0 or -inf.
// Both answers come with a certificate that is checked by exact
// substitution before it is returned.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symcone/linalg.hpp"

namespace symcone {

/**
 * minimize objective . x subject to
 *   u . x >= 0 for u in ge_rows,
 *   u . x <= 0 for u in le_rows,
 *   u . x == 0 for u in eq_rows.
 */
struct ConicLP {
  QVector objective;
  QMatrix ge_rows;
  QMatrix le_rows;
  QMatrix eq_rows;

  std::size_t dim() const { return objective.size(); }
};

enum class LPStatus { ZeroMinimum, Unbounded };

/**
 * ZeroMinimum: objective = sum ge_mult[i] ge_rows[i] - sum le_mult[i] le_rows[i]
 *              + sum eq_mult[i] eq_rows[i], with ge_mult, le_mult >= 0.
 * Unbounded:   witness is feasible and objective . witness < 0.
 */
struct LPOutcome {
  LPStatus status = LPStatus::ZeroMinimum;
  QVector ge_multipliers;
  QVector le_multipliers;
  QVector eq_multipliers;
  QVector witness;
  std::size_t pivots = 0;

  bool zero_minimum() const { return status == LPStatus::ZeroMinimum; }
};

struct LPOptions {
  std::size_t max_pivots = 1'000'000;
};

/// Process-wide counters, used by the acceptance suite to report how many
/// certificates were produced and re-verified.
struct LPStats {
  std::atomic<std::uint64_t> solves{0};
  std::atomic<std::uint64_t> certificates_verified{0};
};

inline LPStats& lp_stats() {
  static LPStats stats;
  return stats;
}

/** Exact re-check of an outcome against its program. */
inline bool verify_certificate(const ConicLP& p, const LPOutcome& out) {
  const std::size_t n = p.dim();
  if (out.status == LPStatus::ZeroMinimum) {
    if (out.ge_multipliers.size() != p.ge_rows.rows() || out.le_multipliers.size() != p.le_rows.rows() ||
        out.eq_multipliers.size() != p.eq_rows.rows())
      return false;
    QVector combo(n);
    auto accumulate = [&](const QMatrix& rows, const QVector& mult, int sign, bool nonneg) {
      for (std::size_t i = 0; i < rows.rows(); ++i) {
        if (nonneg && sgn(mult[i]) < 0) return false;
        if (sgn(mult[i]) == 0) continue;
        for (std::size_t k = 0; k < n; ++k) combo[k] += sign * mult[i] * rows[i][k];
      }
      return true;
    };
    if (!accumulate(p.ge_rows, out.ge_multipliers, 1, true)) return false;
    if (!accumulate(p.le_rows, out.le_multipliers, -1, true)) return false;
    if (!accumulate(p.eq_rows, out.eq_multipliers, 1, false)) return false;
    return combo == p.objective;
  }
  if (out.witness.size() != n) return false;
  for (const auto& u : p.ge_rows)
    if (sgn(dot(u, out.witness)) < 0) return false;
  for (const auto& u : p.le_rows)
    if (sgn(dot(u, out.witness)) > 0) return false;
  for (const auto& u : p.eq_rows)
    if (sgn(dot(u, out.witness)) != 0) return false;
  return sgn(dot(p.objective, out.witness)) < 0;
}

namespace detail {

/// Dense phase-one simplex tableau for  A lambda + art = b, lambda, art >= 0,
/// minimizing the sum of the artificials. Bland's rule throughout.
class PhaseOneTableau {
 public:
  PhaseOneTableau(std::vector<QVector> columns, QVector rhs, std::size_t max_pivots)
      : m_(rhs.size()), structural_(columns.size()), max_pivots_(max_pivots) {
    const std::size_t width = structural_ + m_ + 1;
    t_.assign(m_, QVector(width));
    flipped_.assign(m_, false);
    for (std::size_t k = 0; k < m_; ++k) {
      flipped_[k] = sgn(rhs[k]) < 0;
      const int s = flipped_[k] ? -1 : 1;
      for (std::size_t j = 0; j < structural_; ++j)
        if (sgn(columns[j][k]) != 0) t_[k][j] = s * columns[j][k];
      t_[k][structural_ + k] = 1;
      t_[k][width - 1] = s * rhs[k];
    }
    basis_.resize(m_);
    for (std::size_t k = 0; k < m_; ++k) basis_[k] = structural_ + k;
    // reduced costs: artificials cost 1, structurals 0
    cost_.assign(width, Rational(0));
    for (std::size_t k = 0; k < m_; ++k)
      for (std::size_t j = 0; j < structural_; ++j)
        if (sgn(t_[k][j]) != 0) cost_[j] -= t_[k][j];
    for (std::size_t k = 0; k < m_; ++k) cost_[width - 1] -= t_[k][width - 1];
  }

  void run() {
    const std::size_t width = structural_ + m_ + 1;
    for (;;) {
      std::size_t enter = width;
      for (std::size_t j = 0; j + 1 < width; ++j) {
        if (sgn(cost_[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == width) return;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t k = 0; k < m_; ++k) {
        if (sgn(t_[k][enter]) <= 0) continue;
        Rational ratio = t_[k][width - 1] / t_[k][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[k] < basis_[leave])) {
          leave = k;
          best = ratio;
        }
      }
      // The phase-one objective is bounded below by 0, so a leaving row exists.
      if (leave == m_) throw std::logic_error("phase-one simplex: unbounded direction");
      pivot(leave, enter);
      if (++pivots_ > max_pivots_) throw ResourceLimit("LP pivot limit exceeded");
    }
  }

  bool feasible() const { return sgn(cost_.back()) == 0; }

  QVector primal() const {
    QVector x(structural_);
    for (std::size_t k = 0; k < m_; ++k)
      if (basis_[k] < structural_) x[basis_[k]] = t_[k].back();
    return x;
  }

  /// Dual vector in the original (unflipped) row orientation.
  QVector dual() const {
    QVector y(m_);
    for (std::size_t k = 0; k < m_; ++k) {
      y[k] = 1 - cost_[structural_ + k];
      if (flipped_[k]) y[k] = -y[k];
    }
    return y;
  }

  std::size_t pivots() const { return pivots_; }

 private:
  void pivot(std::size_t r, std::size_t c) {
    const std::size_t width = t_[r].size();
    const Rational pv = t_[r][c];
    for (std::size_t j = 0; j < width; ++j)
      if (sgn(t_[r][j]) != 0) t_[r][j] /= pv;
    for (std::size_t k = 0; k < m_; ++k) {
      if (k == r || sgn(t_[k][c]) == 0) continue;
      const Rational f = t_[k][c];
      for (std::size_t j = 0; j < width; ++j)
        if (sgn(t_[r][j]) != 0) t_[k][j] -= f * t_[r][j];
    }
    if (sgn(cost_[c]) != 0) {
      const Rational f = cost_[c];
      for (std::size_t j = 0; j < width; ++j)
        if (sgn(t_[r][j]) != 0) cost_[j] -= f * t_[r][j];
    }
    basis_[r] = c;
  }

  std::size_t m_;
  std::size_t structural_;
  std::size_t max_pivots_;
  std::size_t pivots_ = 0;
  std::vector<QVector> t_;
  QVector cost_;
  std::vector<std::size_t> basis_;
  std::vector<bool> flipped_;
};

}  // namespace detail

/**
 * Decides whether the objective is nonnegative on the feasible cone.
 *
 * The ZeroMinimum case is exactly the solvability of the multiplier system
 * (Farkas), so we run phase one on it. When that system is infeasible the
 * phase-one dual gives the unbounded direction.
 */
inline LPOutcome minimize_over_cone(const ConicLP& p, const LPOptions& opts = {}) {
  const std::size_t n = p.dim();
  for (const QMatrix* m : {&p.ge_rows, &p.le_rows, &p.eq_rows})
    if (!m->empty() && m->cols() != n)
      throw DimensionMismatch("conic LP: constraint rows have length " + std::to_string(m->cols()) +
                              ", objective has length " + std::to_string(n));

  // Columns: +u for ge rows, -u for le rows, +u and -u for eq rows.
  std::vector<QVector> columns;
  columns.reserve(p.ge_rows.rows() + p.le_rows.rows() + 2 * p.eq_rows.rows());
  for (const auto& u : p.ge_rows) columns.push_back(u);
  for (const auto& u : p.le_rows) columns.push_back(negate(u));
  for (const auto& u : p.eq_rows) {
    columns.push_back(u);
    columns.push_back(negate(u));
  }

  detail::PhaseOneTableau tab(std::move(columns), p.objective, opts.max_pivots);
  tab.run();

  LPOutcome out;
  out.pivots = tab.pivots();
  if (tab.feasible()) {
    const QVector lambda = tab.primal();
    out.status = LPStatus::ZeroMinimum;
    std::size_t j = 0;
    for (std::size_t i = 0; i < p.ge_rows.rows(); ++i) out.ge_multipliers.push_back(lambda[j++]);
    for (std::size_t i = 0; i < p.le_rows.rows(); ++i) out.le_multipliers.push_back(lambda[j++]);
    for (std::size_t i = 0; i < p.eq_rows.rows(); ++i) {
      out.eq_multipliers.push_back(lambda[j] - lambda[j + 1]);
      j += 2;
    }
  } else {
    out.status = LPStatus::Unbounded;
    out.witness = make_primitive(negate(tab.dual()));
  }

  ++lp_stats().solves;
  if (!verify_certificate(p, out)) throw std::logic_error("conic LP produced an invalid certificate");
  ++lp_stats().certificates_verified;
  return out;
}

struct RedundancyTest {
  bool redundant = false;
  LPOutcome certificate;

  explicit operator bool() const { return redundant; }
};

/** Is f >= 0 implied by the inequalities u . x >= 0, u in system? */
inline RedundancyTest is_redundant(const QMatrix& system, const QVector& f, const LPOptions& opts = {}) {
  ConicLP p;
  p.objective = f;
  p.ge_rows = system.empty() ? QMatrix(f.size()) : system;
  RedundancyTest r;
  r.certificate = minimize_over_cone(p, opts);
  r.redundant = r.certificate.zero_minimum();
  return r;
}

inline RedundancyTest is_redundant(const std::vector<QVector>& system, const QVector& f,
                                   const LPOptions& opts = {}) {
  return is_redundant(QMatrix(f.size(), system), f, opts);
}

struct RedundancyRemoval {
  QMatrix kept;
  std::vector<std::size_t> kept_indices;
  std::vector<std::size_t> removed_indices;
  /// For each removed row, the ZeroMinimum certificate against `kept`.
  std::vector<LPOutcome> removal_certificates;
};

/**
 * Removes rows that are implied by the others, scanning in input order.
 * The retained rows are pairwise irredundant and define the same cone.
 */
inline RedundancyRemoval remove_redundancy(const QMatrix& system, const LPOptions& opts = {}) {
  const std::size_t m = system.rows();
  std::vector<bool> alive(m, true);
  for (std::size_t i = 0; i < m; ++i) {
    if (is_zero(system[i])) {
      alive[i] = false;
      continue;
    }
    QMatrix others(system.cols());
    for (std::size_t j = 0; j < m; ++j)
      if (j != i && alive[j]) others.push_back(system[j]);
    if (is_redundant(others, system[i], opts)) alive[i] = false;
  }
  RedundancyRemoval out;
  out.kept = QMatrix(system.cols());
  for (std::size_t i = 0; i < m; ++i) {
    if (alive[i]) {
      out.kept.push_back(system[i]);
      out.kept_indices.push_back(i);
    } else {
      out.removed_indices.push_back(i);
    }
  }
  for (std::size_t i : out.removed_indices) {
    auto t = is_redundant(out.kept, system[i], opts);
    if (!t.redundant) throw std::logic_error("remove_redundancy: removed row is not implied by kept rows");
    out.removal_certificates.push_back(std::move(t.certificate));
  }
  return out;
}

}  // namespace symcone
