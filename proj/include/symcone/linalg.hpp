#pragma once

// Exact rational scalars, vectors and matrices, and the elimination kernel
// (rank, nullspace, solve) used by every other part of symcone.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symcone {

using Integer = mpz_class;
using Rational = mpq_class;
using QVector = std::vector<Rational>;

/** Base class of every error raised by symcone. */
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/** Operands of incompatible dimensions were combined. */
class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

/** A configured resource cap (orbit size, face count, pivots) was hit. */
class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(const std::string& what) : Error(what) {}
};

inline QVector make_qvector(std::initializer_list<long> values) {
  QVector v;
  v.reserve(values.size());
  for (long x : values) v.emplace_back(x);
  return v;
}

/** Dense rectangular matrix of rationals, stored as rows. */
class QMatrix {
 public:
  QMatrix() = default;
  explicit QMatrix(std::size_t cols) : cols_(cols) {}
  QMatrix(std::size_t cols, std::vector<QVector> rows) : cols_(cols), rows_(std::move(rows)) {
    for (const auto& r : rows_) check_row(r);
  }
  /// Column count is taken from the first row; an empty list gives a 0x0 matrix.
  explicit QMatrix(std::vector<QVector> rows) : cols_(rows.empty() ? 0 : rows.front().size()), rows_(std::move(rows)) {
    for (const auto& r : rows_) check_row(r);
  }

  static QMatrix identity(std::size_t n) {
    QMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
      QVector row(n);
      row[i] = 1;
      m.push_back(std::move(row));
    }
    return m;
  }

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_.empty(); }

  const QVector& operator[](std::size_t i) const { return rows_[i]; }
  QVector& operator[](std::size_t i) { return rows_[i]; }

  void push_back(QVector row) {
    check_row(row);
    rows_.push_back(std::move(row));
  }

  const std::vector<QVector>& row_list() const { return rows_; }
  auto begin() const { return rows_.begin(); }
  auto end() const { return rows_.end(); }

  QMatrix transpose() const {
    QMatrix t(rows_.size());
    for (std::size_t j = 0; j < cols_; ++j) {
      QVector col(rows_.size());
      for (std::size_t i = 0; i < rows_.size(); ++i) col[i] = rows_[i][j];
      t.push_back(std::move(col));
    }
    return t;
  }

  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.cols_ == b.cols_ && a.rows_ == b.rows_;
  }

 private:
  void check_row(const QVector& r) const {
    if (r.size() != cols_)
      throw DimensionMismatch("matrix row of length " + std::to_string(r.size()) +
                              " in a matrix with " + std::to_string(cols_) + " columns");
  }

  std::size_t cols_ = 0;
  std::vector<QVector> rows_;
};

// ---------------------------------------------------------------------------
// Vector helpers

inline Rational dot(const QVector& a, const QVector& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("dot product of vectors of length " + std::to_string(a.size()) +
                            " and " + std::to_string(b.size()));
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  }
  return s;
}

inline bool is_zero(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
}

inline QVector add(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector sum of different lengths");
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline QVector sub(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector difference of different lengths");
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline QVector scale(const Rational& s, const QVector& v) {
  QVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
  return r;
}

inline QVector negate(const QVector& v) {
  QVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = -v[i];
  return r;
}

/// M * x, one entry per row of M.
inline QVector mul(const QMatrix& m, const QVector& x) {
  QVector r;
  r.reserve(m.rows());
  for (const auto& row : m) r.push_back(dot(row, x));
  return r;
}

/** Multiplies v by the positive rational that makes it a primitive integer vector. */
inline QVector make_primitive(const QVector& v) {
  Integer den_lcm = 1;
  for (const auto& x : v) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), x.get_den_mpz_t());
  Integer g = 0;
  std::vector<Integer> ints(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    ints[i] = v[i].get_num() * (den_lcm / v[i].get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints[i].get_mpz_t());
  }
  QVector r(v.size());
  if (g == 0) return r;
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rational(ints[i] / g);
  return r;
}

/**
 * The unique primitive integer vector proportional to v whose first nonzero
 * entry is positive. Suitable for projective objects (hyperplanes, kernel
 * directions). Rays and inequalities are oriented, so cone code scales them
 * with make_primitive instead.
 */
inline QVector normalize_primitive(const QVector& v) {
  if (is_zero(v)) throw std::invalid_argument("normalize_primitive: zero vector");
  QVector r = make_primitive(v);
  auto first = std::find_if(r.begin(), r.end(), [](const Rational& x) { return sgn(x) != 0; });
  if (sgn(*first) < 0) r = negate(r);
  return r;
}

struct QVectorHash {
  std::size_t operator()(const QVector& v) const {
    std::size_t h = v.size();
    for (const auto& x : v) {
      const mpz_srcptr num = x.get_num_mpz_t();
      std::size_t limb = mpz_size(num) ? static_cast<std::size_t>(mpz_getlimbn(num, 0)) : 0;
      limb = limb * 31 + static_cast<std::size_t>(mpz_sgn(num) + 1);
      const mpz_srcptr den = x.get_den_mpz_t();
      limb ^= static_cast<std::size_t>(mpz_getlimbn(den, 0)) << 7;
      h ^= limb + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

inline std::string to_string(const QVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += v[i].get_str();
  }
  return s;
}

inline std::ostream& operator<<(std::ostream& os, const QVector& v) { return os << '(' << to_string(v) << ')'; }

// ---------------------------------------------------------------------------
// Elimination

namespace detail {

/// Rows scaled to integers (row-wise positive factors; row space is unchanged).
inline std::vector<std::vector<Integer>> integer_rows(const QMatrix& m) {
  std::vector<std::vector<Integer>> a;
  a.reserve(m.rows());
  for (const auto& row : m) {
    QVector p = make_primitive(row);
    std::vector<Integer> r(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) r[j] = p[j].get_num();
    a.push_back(std::move(r));
  }
  return a;
}

struct Echelon {
  std::vector<std::vector<Integer>> rows;  // first `rank` rows in echelon form
  std::vector<std::size_t> pivot_cols;
};

/// Fraction-free (Bareiss) forward elimination. Entries stay integral; every
/// division is exact.
inline Echelon bareiss(std::vector<std::vector<Integer>> a, std::size_t cols) {
  Echelon e;
  const std::size_t m = a.size();
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m; ++c) {
    std::size_t p = r;
    while (p < m && a[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < m; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        Integer t = a[r][c] * a[i][j] - a[i][c] * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    e.pivot_cols.push_back(c);
    ++r;
  }
  a.resize(r);
  e.rows = std::move(a);
  return e;
}

/// Solves the echelon system for the pivot variables given values of the free ones.
inline QVector back_substitute(const Echelon& e, std::size_t cols, QVector x, std::size_t rhs_col) {
  for (std::size_t k = e.pivot_cols.size(); k-- > 0;) {
    const auto& row = e.rows[k];
    const std::size_t pc = e.pivot_cols[k];
    Rational s = rhs_col < row.size() ? Rational(row[rhs_col]) : Rational(0);
    for (std::size_t j = pc + 1; j < cols; ++j)
      if (row[j] != 0 && sgn(x[j]) != 0) s -= Rational(row[j]) * x[j];
    x[pc] = s / Rational(row[pc]);
  }
  return x;
}

}  // namespace detail

/** Exact rank by fraction-free elimination. The empty matrix has rank 0. */
inline std::size_t rank(const QMatrix& m) {
  if (m.empty() || m.cols() == 0) return 0;
  return detail::bareiss(detail::integer_rows(m), m.cols()).pivot_cols.size();
}

inline std::size_t rank(const std::vector<QVector>& rows) { return rank(QMatrix(rows)); }

/**
 * Basis of {x : M x = 0}, one primitive vector per row. The result has
 * cols(M) - rank(M) rows.
 */
inline QMatrix nullspace(const QMatrix& m) {
  const std::size_t n = m.cols();
  QMatrix basis(n);
  if (m.empty()) {
    return QMatrix::identity(n);
  }
  const auto e = detail::bareiss(detail::integer_rows(m), n);
  std::vector<bool> is_pivot(n, false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    QVector x(n);
    x[f] = 1;
    x = detail::back_substitute(e, n, std::move(x), n);
    basis.push_back(normalize_primitive(x));
  }
  return basis;
}

/** Some exact solution of M x = b, or nullopt when the system is inconsistent. */
inline std::optional<QVector> solve(const QMatrix& m, const QVector& b) {
  if (b.size() != m.rows())
    throw DimensionMismatch("solve: right-hand side has length " + std::to_string(b.size()) +
                            ", matrix has " + std::to_string(m.rows()) + " rows");
  const std::size_t n = m.cols();
  QMatrix aug(n + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    QVector row = m[i];
    row.push_back(b[i]);
    aug.push_back(std::move(row));
  }
  const auto e = detail::bareiss(detail::integer_rows(aug), n + 1);
  if (!e.pivot_cols.empty() && e.pivot_cols.back() == n) return std::nullopt;
  return detail::back_substitute(e, n, QVector(n), n);
}

/// Basis (as rows) of the row space of M, taken from M's own rows in order.
inline std::vector<std::size_t> independent_rows(const std::vector<QVector>& rows) {
  std::vector<std::size_t> picked;
  std::vector<QVector> acc;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    acc.push_back(rows[i]);
    if (rank(acc) == acc.size()) {
      picked.push_back(i);
    } else {
      acc.pop_back();
    }
  }
  return picked;
}

}  // namespace symcone
