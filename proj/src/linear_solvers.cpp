#include "arclp/linear_solvers.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>

#include "arclp/errors.hpp"
#include "arclp/vector_ops.hpp"

namespace arclp {

std::optional<std::vector<double>> jacobi_preconditioner(
    const SparseMatrix& m) {
  std::vector<double> p(m.rows());
  for (Index i = 0; i < m.rows(); ++i) {
    const double d = m.diagonal_entry(i);
    if (!(d > 0.0)) return std::nullopt;
    p[i] = 1.0 / d;
  }
  return p;
}

namespace {

double true_residual_norm(const LinearOperator& m,
                          const std::vector<double>& rhs,
                          const std::vector<double>& x,
                          std::vector<double>& scratch) {
  m.apply(x, scratch);
  double acc = 0.0;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    const double r = rhs[i] - scratch[i];
    acc += r * r;
  }
  return std::sqrt(acc);
}

}  // namespace

std::pair<std::vector<double>, CGReport> cg_solve(
    const LinearOperator& m, const std::vector<double>& rhs, double tol,
    int max_iterations, const std::vector<double>& precond) {
  if (!(tol > 0.0)) throw std::invalid_argument("cg_solve: tol must be > 0");
  const Index n = m.size();
  if (static_cast<Index>(rhs.size()) != n)
    throw std::invalid_argument("cg_solve: rhs dimension mismatch");

  CGReport report;
  report.tolerance = tol;

  std::vector<double> x(n, 0.0);
  std::vector<double> r = rhs;  // residual of the zero start
  std::vector<double> scratch(n, 0.0);

  auto precondition = [&](const std::vector<double>& v) {
    if (precond.empty()) return v;
    return hadamard(precond, v);
  };

  double rnorm = norm2(r);
  if (rnorm <= tol) {
    report.achieved = true_residual_norm(m, rhs, x, scratch);
    report.converged = report.achieved <= tol;
    return {x, report};
  }

  std::vector<double> z = precondition(r);
  std::vector<double> p = z;
  double rz = dot(r, z);

  int it = 0;
  while (it < max_iterations) {
    m.apply(p, scratch);
    const double pap = dot(p, scratch);
    if (!std::isfinite(pap) || !std::isfinite(rz))
      throw NumericalError("cg_solve: non-finite value in recurrence");
    if (pap <= 0.0) {
      // Not positive definite along p; let the caller regularize.
      break;
    }
    const double alpha = rz / pap;
    axpy(alpha, p, x);
    axpy(-alpha, scratch, r);
    ++it;

    rnorm = norm2(r);
    if (!std::isfinite(rnorm))
      throw NumericalError("cg_solve: non-finite residual");
    if (rnorm <= tol) {
      // The recurrence says converged; trust only a recomputation.
      const double actual = true_residual_norm(m, rhs, x, scratch);
      if (actual <= tol) {
        report.achieved = actual;
        report.iterations = it;
        report.converged = true;
        return {x, report};
      }
      // Drift: restart the recurrence from the true residual.
      m.apply(x, scratch);
      for (Index i = 0; i < n; ++i) r[i] = rhs[i] - scratch[i];
      z = precondition(r);
      p = z;
      rz = dot(r, z);
      continue;
    }

    z = precondition(r);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (Index i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }

  report.achieved = true_residual_norm(m, rhs, x, scratch);
  report.iterations = it;
  report.converged = report.achieved <= tol;
  return {x, report};
}

std::pair<std::vector<double>, CGReport> regularize_and_retry(
    const LinearOperator& m, const std::vector<double>& rhs, double tol,
    int max_iterations, const std::vector<double>& precond_of_m) {
  ShiftedOperator shifted(m, kRegularizationShift);
  std::vector<double> precond;
  if (!precond_of_m.empty()) {
    precond.resize(precond_of_m.size());
    for (std::size_t i = 0; i < precond.size(); ++i)
      precond[i] = 1.0 / (1.0 / precond_of_m[i] + kRegularizationShift);
  }
  auto [x, report] = cg_solve(shifted, rhs, tol, max_iterations, precond);
  report.regularized = true;
  return {x, report};
}

struct CholeskyFactor::Impl {
  Eigen::LLT<Eigen::MatrixXd> llt;
  SparseMatrix matrix;  // kept for the refinement residuals
};

CholeskyFactor::CholeskyFactor(const SparseMatrix& m)
    : impl_(std::make_unique<Impl>()) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("CholeskyFactor: matrix must be square");
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  const auto& offs = m.row_offsets();
  const auto& cols = m.col_indices();
  const auto& vals = m.values();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index k = offs[r]; k < offs[r + 1]; ++k) dense(r, cols[k]) = vals[k];
  impl_->llt.compute(dense);
  if (impl_->llt.info() != Eigen::Success)
    throw NumericalError("cholesky: non-positive pivot");
  impl_->matrix = m;
}

CholeskyFactor::~CholeskyFactor() = default;
CholeskyFactor::CholeskyFactor(CholeskyFactor&&) noexcept = default;
CholeskyFactor& CholeskyFactor::operator=(CholeskyFactor&&) noexcept = default;

std::pair<std::vector<double>, double> CholeskyFactor::solve(
    const std::vector<double>& rhs) const {
  const SparseMatrix& m = impl_->matrix;
  if (static_cast<Index>(rhs.size()) != m.rows())
    throw std::invalid_argument("cholesky solve: rhs dimension mismatch");

  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), rhs.size());
  Eigen::VectorXd xe = impl_->llt.solve(b);
  std::vector<double> x(xe.data(), xe.data() + xe.size());

  const double bound = 1e-9 * (1.0 + norm2(rhs));
  std::vector<double> mx;
  double res = 0.0;
  for (int refine = 0; refine <= 3; ++refine) {
    m.multiply(x, mx);
    std::vector<double> r(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) r[i] = rhs[i] - mx[i];
    res = norm2(r);
    if (res <= bound || refine == 3) break;
    Eigen::Map<const Eigen::VectorXd> re(r.data(), r.size());
    Eigen::VectorXd dx = impl_->llt.solve(re);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
  }
  return {x, res};
}

std::vector<double> cholesky_solve(const SparseMatrix& m,
                                   const std::vector<double>& rhs) {
  CholeskyFactor factor(m);
  return factor.solve(rhs).first;
}

}  // namespace arclp
