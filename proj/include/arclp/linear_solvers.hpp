#ifndef ARCLP_LINEAR_SOLVERS_HPP
#define ARCLP_LINEAR_SOLVERS_HPP

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "arclp/sparse_matrix.hpp"

namespace arclp {

// Symmetric positive definite operator y = M x.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual Index size() const = 0;
  virtual void apply(const std::vector<double>& x,
                     std::vector<double>& y) const = 0;
  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> y;
    apply(x, y);
    return y;
  }
};

class SparseOperator final : public LinearOperator {
 public:
  explicit SparseOperator(const SparseMatrix& m) : m_(m) {}
  Index size() const override { return m_.rows(); }
  void apply(const std::vector<double>& x,
             std::vector<double>& y) const override {
    m_.multiply(x, y);
  }

 private:
  const SparseMatrix& m_;
};

// base + shift * I, used for the +1e-3 I regularization retry.
class ShiftedOperator final : public LinearOperator {
 public:
  ShiftedOperator(const LinearOperator& base, double shift)
      : base_(base), shift_(shift) {}
  Index size() const override { return base_.size(); }
  void apply(const std::vector<double>& x,
             std::vector<double>& y) const override {
    base_.apply(x, y);
    for (Index i = 0; i < size(); ++i) y[i] += shift_ * x[i];
  }

 private:
  const LinearOperator& base_;
  double shift_;
};

struct CGReport {
  double tolerance = 0.0;       // requested absolute residual bound
  double achieved = 0.0;        // recomputed ||M x - rhs||, not the recurrence
  int iterations = 0;
  bool converged = false;
  bool regularized = false;
};

constexpr double kRegularizationShift = 1e-3;

// Inverse diagonal of M, or nullopt when some diagonal entry is not
// strictly positive (caller should take the regularization path).
std::optional<std::vector<double>> jacobi_preconditioner(const SparseMatrix& m);

// Preconditioned CG from the zero vector. `precond` holds the inverse
// diagonal; pass an empty vector for no preconditioning. Convergence is
// decided on the recomputed true residual. Throws NumericalError when the
// recurrence produces NaN/Inf.
std::pair<std::vector<double>, CGReport> cg_solve(
    const LinearOperator& m, const std::vector<double>& rhs, double tol,
    int max_iterations, const std::vector<double>& precond);

// Solves (M + 1e-3 I) x = rhs after a failed cg_solve on M. The tolerance
// contract applies to the shifted system; the report is flagged.
std::pair<std::vector<double>, CGReport> regularize_and_retry(
    const LinearOperator& m, const std::vector<double>& rhs, double tol,
    int max_iterations, const std::vector<double>& precond_of_m);

// Dense Cholesky factor of a sparse SPD matrix, cached so the two solves
// of one interior-point iteration share the factorization. Solutions are
// refined against the sparse matrix until
// ||M x - rhs|| <= 1e-9 * (1 + ||rhs||).
class CholeskyFactor {
 public:
  // Throws NumericalError when the factorization hits a non-positive pivot.
  explicit CholeskyFactor(const SparseMatrix& m);
  ~CholeskyFactor();
  CholeskyFactor(CholeskyFactor&&) noexcept;
  CholeskyFactor& operator=(CholeskyFactor&&) noexcept;

  // Returns the solution and the recomputed residual norm.
  std::pair<std::vector<double>, double> solve(
      const std::vector<double>& rhs) const;

  bool regularized() const { return regularized_; }
  void mark_regularized() { regularized_ = true; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  bool regularized_ = false;
};

std::vector<double> cholesky_solve(const SparseMatrix& m,
                                   const std::vector<double>& rhs);

}  // namespace arclp

#endif
