#ifndef ARCLP_SPARSE_MATRIX_HPP
#define ARCLP_SPARSE_MATRIX_HPP

#include <vector>

#include "arclp/vector_ops.hpp"

namespace arclp {

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

// Row-compressed sparse matrix. Column indices are strictly increasing
// within each row and explicitly stored zeros are dropped at construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Duplicate (row, col) entries are summed; entries that cancel to zero
  // are not stored.
  static SparseMatrix from_triplets(Index rows, Index cols,
                                    const std::vector<Triplet>& entries);
  static SparseMatrix identity(Index n);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index non_zeros() const { return static_cast<Index>(values_.size()); }

  const std::vector<Index>& row_offsets() const { return row_offsets_; }
  const std::vector<Index>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }

  // y = A x
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  std::vector<double> multiply(const std::vector<double>& x) const;

  // y = A^T x
  void multiply_transpose(const std::vector<double>& x,
                          std::vector<double>& y) const;
  std::vector<double> multiply_transpose(const std::vector<double>& x) const;

  SparseMatrix transpose() const;

  // Keeps the rows listed in `keep` (in the given order).
  SparseMatrix select_rows(const std::vector<Index>& keep) const;

  double diagonal_entry(Index i) const;
  std::vector<double> diagonal() const;

  // A + shift * I (square matrices only).
  SparseMatrix shifted(double shift) const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

// M = A * diag(d2) * A^T for d2 > 0. The upper triangle is assembled and
// mirrored, so the stored matrix is exactly symmetric.
SparseMatrix normal_matrix(const SparseMatrix& a,
                           const std::vector<double>& d2);

}  // namespace arclp

#endif
