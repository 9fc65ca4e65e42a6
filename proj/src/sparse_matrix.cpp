#include "arclp/sparse_matrix.hpp"

#include <algorithm>
#include <stdexcept>

#include "arclp/errors.hpp"

namespace arclp {

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols,
                                         const std::vector<Triplet>& entries) {
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw std::invalid_argument("triplet index out of range");
  }
  std::vector<Triplet> sorted = entries;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });

  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_offsets_.assign(1, 0);
  m.row_offsets_.reserve(rows + 1);
  m.col_indices_.reserve(sorted.size());
  m.values_.reserve(sorted.size());

  std::size_t i = 0;
  for (Index r = 0; r < rows; ++r) {
    while (i < sorted.size() && sorted[i].row == r) {
      Index c = sorted[i].col;
      double v = 0.0;
      while (i < sorted.size() && sorted[i].row == r && sorted[i].col == c) {
        v += sorted[i].value;
        ++i;
      }
      if (v != 0.0) {
        m.col_indices_.push_back(c);
        m.values_.push_back(v);
      }
    }
    m.row_offsets_.push_back(static_cast<Index>(m.values_.size()));
  }
  return m;
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (Index i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, t);
}

void SparseMatrix::multiply(const std::vector<double>& x,
                            std::vector<double>& y) const {
  if (static_cast<Index>(x.size()) != cols_)
    throw std::invalid_argument("multiply: dimension mismatch");
  y.assign(rows_, 0.0);
  for (Index r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
      acc += values_[k] * x[col_indices_[k]];
    y[r] = acc;
  }
}

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y;
  multiply(x, y);
  return y;
}

void SparseMatrix::multiply_transpose(const std::vector<double>& x,
                                      std::vector<double>& y) const {
  if (static_cast<Index>(x.size()) != rows_)
    throw std::invalid_argument("multiply_transpose: dimension mismatch");
  y.assign(cols_, 0.0);
  for (Index r = 0; r < rows_; ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
      y[col_indices_[k]] += values_[k] * xr;
  }
}

std::vector<double> SparseMatrix::multiply_transpose(
    const std::vector<double>& x) const {
  std::vector<double> y;
  multiply_transpose(x, y);
  return y;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t;
  t.rows_ = cols_;
  t.cols_ = rows_;
  t.row_offsets_.assign(cols_ + 1, 0);
  for (Index c : col_indices_) ++t.row_offsets_[c + 1];
  for (Index r = 0; r < cols_; ++r) t.row_offsets_[r + 1] += t.row_offsets_[r];
  t.col_indices_.resize(values_.size());
  t.values_.resize(values_.size());
  std::vector<Index> next(t.row_offsets_.begin(), t.row_offsets_.end() - 1);
  for (Index r = 0; r < rows_; ++r) {
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      Index pos = next[col_indices_[k]]++;
      t.col_indices_[pos] = r;
      t.values_[pos] = values_[k];
    }
  }
  return t;
}

SparseMatrix SparseMatrix::select_rows(const std::vector<Index>& keep) const {
  SparseMatrix out;
  out.rows_ = static_cast<Index>(keep.size());
  out.cols_ = cols_;
  out.row_offsets_.assign(1, 0);
  for (Index r : keep) {
    if (r < 0 || r >= rows_)
      throw std::invalid_argument("select_rows: row index out of range");
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      out.col_indices_.push_back(col_indices_[k]);
      out.values_.push_back(values_[k]);
    }
    out.row_offsets_.push_back(static_cast<Index>(out.values_.size()));
  }
  return out;
}

double SparseMatrix::diagonal_entry(Index i) const {
  for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
    if (col_indices_[k] == i) return values_[k];
  return 0.0;
}

std::vector<double> SparseMatrix::diagonal() const {
  Index n = std::min(rows_, cols_);
  std::vector<double> d(n);
  for (Index i = 0; i < n; ++i) d[i] = diagonal_entry(i);
  return d;
}

SparseMatrix SparseMatrix::shifted(double shift) const {
  if (rows_ != cols_)
    throw std::invalid_argument("shifted: matrix must be square");
  std::vector<Triplet> t;
  t.reserve(values_.size() + rows_);
  for (Index r = 0; r < rows_; ++r)
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
      t.push_back({r, col_indices_[k], values_[k]});
  for (Index i = 0; i < rows_; ++i) t.push_back({i, i, shift});
  return from_triplets(rows_, cols_, t);
}

SparseMatrix normal_matrix(const SparseMatrix& a,
                           const std::vector<double>& d2) {
  if (static_cast<Index>(d2.size()) != a.cols())
    throw std::invalid_argument("normal_matrix: d2 dimension mismatch");
  for (double v : d2)
    if (!(v > 0.0))
      throw std::invalid_argument("normal_matrix: d2 must be positive");

  const Index m = a.rows();
  const SparseMatrix at = a.transpose();

  // Upper triangle via a sparse accumulator, then mirrored below.
  std::vector<Triplet> upper;
  std::vector<double> acc(m, 0.0);
  std::vector<Index> touched;
  touched.reserve(64);
  const auto& offs = a.row_offsets();
  const auto& cols = a.col_indices();
  const auto& vals = a.values();
  const auto& toffs = at.row_offsets();
  const auto& tcols = at.col_indices();
  const auto& tvals = at.values();

  for (Index i = 0; i < m; ++i) {
    touched.clear();
    for (Index k = offs[i]; k < offs[i + 1]; ++k) {
      const Index col = cols[k];
      const double w = vals[k] * d2[col];
      // Column `col` of A is row `col` of A^T.
      for (Index t = toffs[col]; t < toffs[col + 1]; ++t) {
        const Index j = tcols[t];
        if (j < i) continue;
        if (acc[j] == 0.0) touched.push_back(j);
        acc[j] += w * tvals[t];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (Index j : touched) {
      if (acc[j] != 0.0) upper.push_back({i, j, acc[j]});
      acc[j] = 0.0;
    }
  }

  std::vector<Triplet> full;
  full.reserve(2 * upper.size());
  for (const Triplet& t : upper) {
    full.push_back(t);
    if (t.row != t.col) full.push_back({t.col, t.row, t.value});
  }
  return SparseMatrix::from_triplets(m, m, full);
}

}  // namespace arclp
