#pragma once

// Dense exact matrices and elimination. Storage is dense row-major; the
// elimination routines keep reduced rows sparse, which is what makes the
// structure-constant matrices of this library cheap to reduce.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "cct/field.hpp"

namespace cct {

template <class K>
using Vec = std::vector<typename K::value_type>;

template <class K>
class Matrix {
 public:
  using value_type = typename K::value_type;

  Matrix() = default;
  Matrix(K field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}

  static Matrix identity(const K& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  /// Builds a matrix from integer literals, row-major.
  static Matrix from_ints(const K& field, std::size_t rows, std::size_t cols,
                          const std::vector<long long>& entries) {
    Matrix m(field, rows, cols);
    for (std::size_t i = 0; i < rows * cols && i < entries.size(); ++i)
      m.data_[i] = field.from_int(entries[i]);
    return m;
  }

  const K& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  value_type& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const value_type& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vec<K> column(std::size_t c) const {
    Vec<K> v;
    v.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
    return v;
  }
  void set_column(std::size_t c, const Vec<K>& v) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
  }
  Vec<K> row(std::size_t r) const {
    return Vec<K>(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
  }

  static Matrix from_columns(const K& field, std::size_t rows, const std::vector<Vec<K>>& columns) {
    Matrix m(field, rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) m.set_column(c, columns[c]);
    return m;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    for (std::size_t r = 0; r < b.rows_; ++r)
      for (std::size_t c = 0; c < b.cols_; ++c) (*this)(r0 + r, c0 + c) = b(r, c);
  }
  void add_block(std::size_t r0, std::size_t c0, const Matrix& b, const value_type& scale) {
    for (std::size_t r = 0; r < b.rows_; ++r)
      for (std::size_t c = 0; c < b.cols_; ++c)
        if (!field_.is_zero(b(r, c))) field_.add_mul((*this)(r0 + r, c0 + c), scale, b(r, c));
  }
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix m(field_, nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c) m(r, c) = (*this)(r0 + r, c0 + c);
    return m;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [&](const value_type& v) { return field_.is_zero(v); });
  }
  bool is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (!field_.equal((*this)(r, c), r == c ? field_.one() : field_.zero())) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t i = 0; i < a.data_.size(); ++i)
      if (!a.field_.equal(a.data_[i], b.data_[i])) return false;
    return true;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw MathError("matrix product shape mismatch");
    Matrix m(a.field_, a.rows_, b.cols_);
    const K& k = a.field_;
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t l = 0; l < a.cols_; ++l) {
        const value_type& x = a(i, l);
        if (k.is_zero(x)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!k.is_zero(b(l, j))) k.add_mul(m(i, j), x, b(l, j));
      }
    return m;
  }
  Vec<K> apply(const Vec<K>& v) const {
    if (v.size() != cols_) throw MathError("matrix-vector shape mismatch");
    Vec<K> out(rows_, field_.zero());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!field_.is_zero(v[j]) && !field_.is_zero((*this)(i, j))) field_.add_mul(out[i], (*this)(i, j), v[j]);
    return out;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw MathError("matrix sum shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] = a.field_.add(a.data_[i], b.data_[i]);
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw MathError("matrix difference shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] = a.field_.sub(a.data_[i], b.data_[i]);
    return a;
  }
  Matrix scaled(const value_type& s) const {
    Matrix m = *this;
    for (auto& v : m.data_) v = field_.mul(v, s);
    return m;
  }
  Matrix transposed() const {
    Matrix m(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
    return m;
  }

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    for (std::size_t r = 0; r < m.rows_; ++r) {
      os << '[';
      for (std::size_t c = 0; c < m.cols_; ++c) os << (c ? " " : "") << m.field_.format(m(r, c));
      os << "]\n";
    }
    return os;
  }

 private:
  K field_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<value_type> data_;
};

/// Row echelon form built one row at a time. Pivot rows are stored sparse
/// with a leading 1; the pivot is the first nonzero column of the reduced
/// row, so results depend only on row order.
template <class K>
class Echelon {
 public:
  using value_type = typename K::value_type;
  using SparseRow = std::vector<std::pair<std::size_t, value_type>>;

  Echelon(K field, std::size_t width)
      : field_(std::move(field)), width_(width), pivot_row_(width, npos), work_(width, field_.zero()) {}

  std::size_t width() const { return width_; }
  std::size_t rank() const { return rows_.size(); }

  /// Reduces `v` against the current pivots; if something survives it
  /// becomes a new pivot row. Returns true iff the rank went up.
  bool insert(const Vec<K>& v) {
    load(v);
    return absorb();
  }
  bool insert_row(const Matrix<K>& m, std::size_t r) {
    for (std::size_t c = 0; c < width_; ++c) work_[c] = m(r, c);
    return absorb();
  }

  /// Entries with repeated columns are summed.
  bool insert_sparse(const SparseRow& row) {
    for (const auto& [c, x] : row) work_[c] = field_.add(work_[c], x);
    return absorb();
  }

  bool contains(const Vec<K>& v) {
    load(v);
    reduce_work();
    bool zero = std::all_of(work_.begin(), work_.end(), [&](const value_type& x) { return field_.is_zero(x); });
    clear_work();
    return zero;
  }

  /// Back-substitutes so every pivot column is zero outside its pivot row.
  void make_reduced() {
    std::vector<std::size_t> pivots = pivot_columns();
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
      SparseRow& row = rows_[pivot_row_[*it]];
      for (const auto& [c, x] : row) work_[c] = x;
      for (std::size_t c = *it + 1; c < width_; ++c) {
        if (field_.is_zero(work_[c]) || pivot_row_[c] == npos) continue;
        value_type f = work_[c];
        for (const auto& [j, y] : rows_[pivot_row_[c]]) work_[j] = field_.sub(work_[j], field_.mul(f, y));
      }
      row = take_work();
    }
  }

  std::vector<std::size_t> pivot_columns() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < width_; ++c)
      if (pivot_row_[c] != npos) out.push_back(c);
    return out;
  }
  const SparseRow& pivot_row(std::size_t col) const { return rows_[pivot_row_[col]]; }
  bool has_pivot(std::size_t col) const { return pivot_row_[col] != npos; }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  void load(const Vec<K>& v) {
    if (v.size() != width_) throw MathError("echelon width mismatch");
    for (std::size_t c = 0; c < width_; ++c) work_[c] = v[c];
  }
  void reduce_work() {
    for (std::size_t c = 0; c < width_; ++c) {
      if (field_.is_zero(work_[c]) || pivot_row_[c] == npos) continue;
      value_type f = work_[c];
      for (const auto& [j, y] : rows_[pivot_row_[c]]) work_[j] = field_.sub(work_[j], field_.mul(f, y));
    }
  }
  bool absorb() {
    reduce_work();
    std::size_t lead = npos;
    for (std::size_t c = 0; c < width_; ++c)
      if (!field_.is_zero(work_[c])) {
        lead = c;
        break;
      }
    if (lead == npos) return false;
    value_type s = field_.inv(work_[lead]);
    for (std::size_t c = lead; c < width_; ++c)
      if (!field_.is_zero(work_[c])) work_[c] = field_.mul(work_[c], s);
    pivot_row_[lead] = rows_.size();
    rows_.push_back(take_work());
    return true;
  }
  SparseRow take_work() {
    SparseRow row;
    for (std::size_t c = 0; c < width_; ++c)
      if (!field_.is_zero(work_[c])) {
        row.emplace_back(c, work_[c]);
        work_[c] = field_.zero();
      }
    return row;
  }
  void clear_work() {
    for (auto& x : work_) x = field_.zero();
  }

  K field_;
  std::size_t width_;
  std::vector<SparseRow> rows_;
  std::vector<std::size_t> pivot_row_;
  std::vector<value_type> work_;
};

template <class K>
std::size_t rank(const Matrix<K>& m) {
  Echelon<K> e(m.field(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) e.insert_row(m, r);
  return e.rank();
}

/// Kernel of the rows inserted so far. The rows of the result at the
/// non-pivot columns form an identity matrix, so coordinates of a kernel
/// vector can be read off those rows.
template <class K>
Matrix<K> echelon_kernel(Echelon<K>& e, const K& k) {
  e.make_reduced();
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < e.width(); ++c)
    if (!e.has_pivot(c)) free_cols.push_back(c);
  Matrix<K> basis(k, e.width(), free_cols.size());
  for (std::size_t i = 0; i < free_cols.size(); ++i) basis(free_cols[i], i) = k.one();
  for (std::size_t pc : e.pivot_columns()) {
    for (const auto& [c, x] : e.pivot_row(pc)) {
      if (c == pc) continue;
      auto it = std::lower_bound(free_cols.begin(), free_cols.end(), c);
      basis(pc, static_cast<std::size_t>(it - free_cols.begin())) = k.neg(x);
    }
  }
  return basis;
}

/// Columns form a basis of {x : m x = 0}, one per non-pivot column.
template <class K>
Matrix<K> kernel_basis(const Matrix<K>& m) {
  Echelon<K> e(m.field(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) e.insert_row(m, r);
  return echelon_kernel(e, m.field());
}

/// Non-pivot columns of the reduced echelon form of m, i.e. the rows where
/// kernel_basis(m) is the identity.
template <class K>
std::vector<std::size_t> free_columns(const Matrix<K>& m) {
  Echelon<K> e(m.field(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) e.insert_row(m, r);
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!e.has_pivot(c)) out.push_back(c);
  return out;
}

/// Some x with m x = b, or nullopt.
template <class K>
std::optional<Vec<K>> solve(const Matrix<K>& m, const Vec<K>& b) {
  const K& k = m.field();
  Echelon<K> e(k, m.cols() + 1);
  Vec<K> row(m.cols() + 1, k.zero());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) row[c] = m(r, c);
    row[m.cols()] = b[r];
    e.insert(row);
  }
  if (e.has_pivot(m.cols())) return std::nullopt;
  e.make_reduced();
  Vec<K> x(m.cols(), k.zero());
  for (std::size_t pc : e.pivot_columns()) {
    for (const auto& [c, v] : e.pivot_row(pc))
      if (c == m.cols()) x[pc] = v;
  }
  return x;
}

/// Solves m X = rhs column by column; throws if some column is not in the image.
template <class K>
Matrix<K> solve_matrix(const Matrix<K>& m, const Matrix<K>& rhs) {
  const K& k = m.field();
  const std::size_t n = m.cols();
  Echelon<K> e(k, n + rhs.cols());
  Vec<K> row(n + rhs.cols(), k.zero());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c) row[c] = m(r, c);
    for (std::size_t c = 0; c < rhs.cols(); ++c) row[n + c] = rhs(r, c);
    e.insert(row);
  }
  for (std::size_t c = n; c < n + rhs.cols(); ++c)
    if (e.has_pivot(c)) throw MathError("linear system has no solution");
  e.make_reduced();
  Matrix<K> x(k, n, rhs.cols());
  for (std::size_t pc : e.pivot_columns())
    for (const auto& [c, v] : e.pivot_row(pc))
      if (c >= n) x(pc, c - n) = v;
  return x;
}

template <class K>
std::optional<Matrix<K>> inverse(const Matrix<K>& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  if (rank(m) != m.rows()) return std::nullopt;
  return solve_matrix(m, Matrix<K>::identity(m.field(), m.rows()));
}

template <class K>
bool is_invertible(const Matrix<K>& m) {
  return m.rows() == m.cols() && rank(m) == m.rows();
}

/// Columns of `m` at the positions where they first increase the rank.
template <class K>
Matrix<K> column_space_basis(const Matrix<K>& m) {
  Echelon<K> e(m.field(), m.rows());
  std::vector<Vec<K>> keep;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    Vec<K> v = m.column(c);
    if (e.insert(v)) keep.push_back(std::move(v));
  }
  return Matrix<K>::from_columns(m.field(), m.rows(), keep);
}

/// Basis of the intersection of the column spaces of two matrices with
/// independent columns.
template <class K>
Matrix<K> intersect_column_spaces(const Matrix<K>& a, const Matrix<K>& b) {
  Matrix<K> ab(a.field(), a.rows(), a.cols() + b.cols());
  ab.set_block(0, 0, a);
  ab.set_block(0, a.cols(), b);
  Matrix<K> ker = kernel_basis(ab);
  return a * ker.block(0, 0, a.cols(), ker.cols());
}

}  // namespace cct
