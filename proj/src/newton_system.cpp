#include "arclp/newton_system.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "arclp/errors.hpp"
#include "arclp/vector_ops.hpp"

namespace arclp {

ScalingState ScalingState::from(const Iterate& it) {
  ScalingState sc;
  sc.mu = it.mu;
  sc.d2.resize(it.x.size());
  sc.d.resize(it.x.size());
  for (std::size_t i = 0; i < it.x.size(); ++i) {
    sc.d2[i] = it.x[i] / it.s[i];
    sc.d[i] = std::sqrt(sc.d2[i]);
  }
  return sc;
}

struct BasisSelection::Impl {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

BasisSelection::BasisSelection(const SparseMatrix& a, double pivot_tol)
    : impl_(std::make_unique<Impl>()) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (m > n) throw ModelError("basis selection needs m <= n");

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, n);
  const auto& offs = a.row_offsets();
  const auto& cols = a.col_indices();
  const auto& vals = a.values();
  for (Index r = 0; r < m; ++r)
    for (Index k = offs[r]; k < offs[r + 1]; ++k) w(r, cols[k]) = vals[k];

  // Complete-pivoted elimination; the order in which columns are chosen
  // as pivots defines the basis.
  std::vector<bool> used(n, false);
  std::vector<Index> row_of_step(m);
  std::vector<bool> row_used(m, false);
  double first_pivot = 0.0;
  for (Index step = 0; step < m; ++step) {
    Index prow = -1, pcol = -1;
    double pmax = 0.0;
    for (Index c = 0; c < n; ++c) {
      if (used[c]) continue;
      for (Index r = 0; r < m; ++r) {
        if (row_used[r]) continue;
        const double v = std::abs(w(r, c));
        if (v > pmax) {
          pmax = v;
          prow = r;
          pcol = c;
        }
      }
    }
    if (step == 0) first_pivot = pmax;
    if (pcol < 0 || pmax <= pivot_tol * first_pivot)
      throw ModelError("basis selection: A is numerically rank deficient");
    used[pcol] = true;
    row_used[prow] = true;
    row_of_step[step] = prow;
    columns_.push_back(pcol);
    const double pivot = w(prow, pcol);
    for (Index r = 0; r < m; ++r) {
      if (row_used[r] || w(r, pcol) == 0.0) continue;
      const double factor = w(r, pcol) / pivot;
      for (Index c = 0; c < n; ++c)
        if (!used[c] || c == pcol) w(r, c) -= factor * w(prow, c);
      w(r, pcol) = 0.0;
    }
  }

  // A_B from the original sparse data, columns in pivot order.
  Eigen::MatrixXd ab = Eigen::MatrixXd::Zero(m, m);
  const SparseMatrix at = a.transpose();
  const auto& toffs = at.row_offsets();
  const auto& tcols = at.col_indices();
  const auto& tvals = at.values();
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const Index c = columns_[j];
    for (Index k = toffs[c]; k < toffs[c + 1]; ++k) ab(tcols[k], j) = tvals[k];
  }
  impl_->lu.compute(ab);
}

BasisSelection::~BasisSelection() = default;
BasisSelection::BasisSelection(BasisSelection&&) noexcept = default;
BasisSelection& BasisSelection::operator=(BasisSelection&&) noexcept = default;

std::vector<double> BasisSelection::solve(const std::vector<double>& rhs) const {
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), rhs.size());
  Eigen::VectorXd x = impl_->lu.solve(b);
  return std::vector<double>(x.data(), x.data() + x.size());
}

std::vector<double> BasisSelection::solve_transpose(
    const std::vector<double>& rhs) const {
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), rhs.size());
  Eigen::VectorXd x = impl_->lu.transpose().solve(b);
  return std::vector<double>(x.data(), x.data() + x.size());
}

std::vector<double> first_rhs_nes(const StandardFormLP& lp, const Iterate& it,
                                  double sigma) {
  if (!(sigma > 0.0) || sigma > 1.0)
    throw std::invalid_argument("first_rhs_nes: sigma must be in (0, 1]");
  const Index n = lp.n();
  std::vector<double> w(n);
  const double smu = sigma * it.mu;
  for (Index j = 0; j < n; ++j) {
    const double d2 = it.x[j] / it.s[j];
    w[j] = d2 * it.rc[j] - it.x[j] + smu / it.s[j];
  }
  std::vector<double> rho = lp.a.multiply(w);
  for (Index i = 0; i < lp.m(); ++i) rho[i] += it.rb[i];
  return rho;
}

std::vector<double> second_rhs(const StandardFormLP& lp, const Iterate& it,
                               const std::vector<double>& xdot,
                               const std::vector<double>& sdot) {
  const Index n = lp.n();
  std::vector<double> w(n);
  for (Index j = 0; j < n; ++j) w[j] = 2.0 * xdot[j] * sdot[j] / it.s[j];
  return lp.a.multiply(w);
}

MnesSystem::MnesSystem(const SparseMatrix& m_nes, const BasisSelection& basis,
                       const ScalingState& scaling, Index dense_limit)
    : m_(m_nes.rows()), m_nes_(m_nes), basis_(basis) {
  db_.resize(m_);
  const auto& cols = basis.columns();
  for (Index j = 0; j < m_; ++j) db_[j] = scaling.d[cols[j]];

  if (m_ <= dense_limit) {
    dense_.assign(m_, std::vector<double>(m_, 0.0));
    std::vector<double> e(m_, 0.0), col;
    for (Index j = 0; j < m_; ++j) {
      e[j] = 1.0;
      apply_impl(e, col);
      for (Index i = 0; i < m_; ++i) dense_[i][j] = col[i];
      e[j] = 0.0;
    }
    // Mirror rounding asymmetry away.
    for (Index i = 0; i < m_; ++i)
      for (Index j = i + 1; j < m_; ++j) {
        const double v = 0.5 * (dense_[i][j] + dense_[j][i]);
        dense_[i][j] = dense_[j][i] = v;
      }
    jacobi_.resize(m_);
    bool ok = true;
    for (Index i = 0; i < m_; ++i) {
      if (!(dense_[i][i] > 0.0)) {
        ok = false;
        break;
      }
      jacobi_[i] = 1.0 / dense_[i][i];
    }
    if (!ok) jacobi_.clear();
  }
}

void MnesSystem::apply_impl(const std::vector<double>& x,
                            std::vector<double>& y) const {
  std::vector<double> u(m_);
  for (Index i = 0; i < m_; ++i) u[i] = x[i] / db_[i];
  u = basis_.solve_transpose(u);
  std::vector<double> t = m_nes_.multiply(u);
  t = basis_.solve(t);
  y.resize(m_);
  for (Index i = 0; i < m_; ++i) y[i] = t[i] / db_[i];
}

void MnesSystem::apply(const std::vector<double>& x,
                       std::vector<double>& y) const {
  if (!dense_.empty()) {
    y.assign(m_, 0.0);
    for (Index i = 0; i < m_; ++i) {
      double acc = 0.0;
      for (Index j = 0; j < m_; ++j) acc += dense_[i][j] * x[j];
      y[i] = acc;
    }
    return;
  }
  apply_impl(x, y);
}

std::vector<double> MnesSystem::transform_rhs(
    const std::vector<double>& rho) const {
  std::vector<double> u = basis_.solve(rho);
  for (Index i = 0; i < m_; ++i) u[i] /= db_[i];
  return u;
}

std::vector<double> first_rhs_mnes(const std::vector<double>& rho1,
                                   const MnesSystem& system) {
  return system.transform_rhs(rho1);
}

void recover_first_nes(const StandardFormLP& lp, const Iterate& it,
                       const ScalingState& sc, double sigma,
                       const std::vector<double>& ydot, DirectionPair& out) {
  const Index n = lp.n();
  out.yd = ydot;
  out.sd = lp.a.multiply_transpose(ydot);
  for (Index j = 0; j < n; ++j) out.sd[j] = it.rc[j] - out.sd[j];
  out.v1.assign(n, 0.0);
  out.xd.resize(n);
  const double smu = sigma * sc.mu;
  for (Index j = 0; j < n; ++j)
    out.xd[j] = it.x[j] - sc.d2[j] * out.sd[j] - smu / it.s[j];
}

namespace {

// v = (D_B r_hat, 0), scattered over the basis columns.
std::vector<double> embed_error(const MnesSystem& system,
                                const BasisSelection& basis, Index n,
                                const std::vector<double>& r_hat) {
  std::vector<double> v(n, 0.0);
  const auto& cols = basis.columns();
  const auto& db = system.basis_scaling();
  for (std::size_t j = 0; j < cols.size(); ++j) v[cols[j]] = db[j] * r_hat[j];
  return v;
}

std::vector<double> residual_of(const LinearOperator& op,
                                const std::vector<double>& rhs,
                                const std::vector<double>& z) {
  std::vector<double> r = op.apply(z);
  for (std::size_t i = 0; i < rhs.size(); ++i) r[i] -= rhs[i];
  return r;  // M z - rhs
}

}  // namespace

void recover_first_mnes(const StandardFormLP& lp, const Iterate& it,
                        const ScalingState& sc, double sigma,
                        const MnesSystem& system,
                        const std::vector<double>& rho1_hat,
                        const std::vector<double>& z_tilde,
                        DirectionPair& out) {
  const Index n = lp.n();
  // ydot = (D_B^{-1} A_B^{-1})^T z = A_B^{-T} D_B^{-1} z.
  std::vector<double> u(z_tilde.size());
  const auto& db = system.basis_scaling();
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = z_tilde[i] / db[i];
  out.yd = system.basis().solve_transpose(u);
  out.sd = lp.a.multiply_transpose(out.yd);
  for (Index j = 0; j < n; ++j) out.sd[j] = it.rc[j] - out.sd[j];
  const std::vector<double> r_hat = residual_of(system, rho1_hat, z_tilde);
  out.v1 = embed_error(system, system.basis(), n, r_hat);
  out.xd.resize(n);
  const double smu = sigma * sc.mu;
  for (Index j = 0; j < n; ++j)
    out.xd[j] = it.x[j] - sc.d2[j] * out.sd[j] - smu / it.s[j] - out.v1[j];
}

void recover_second_nes(const StandardFormLP& lp, const Iterate& it,
                        const ScalingState& sc,
                        const std::vector<double>& yddot, DirectionPair& out) {
  const Index n = lp.n();
  out.ydd = yddot;
  out.sdd = lp.a.multiply_transpose(yddot);
  for (Index j = 0; j < n; ++j) out.sdd[j] = -out.sdd[j];
  out.v2.assign(n, 0.0);
  out.xdd.resize(n);
  for (Index j = 0; j < n; ++j)
    out.xdd[j] = -sc.d2[j] * out.sdd[j] -
                 2.0 * out.xd[j] * out.sd[j] / it.s[j];
}

void recover_second_mnes(const StandardFormLP& lp, const Iterate& it,
                         const ScalingState& sc, const MnesSystem& system,
                         const std::vector<double>& rho2_hat,
                         const std::vector<double>& z_tilde,
                         DirectionPair& out) {
  const Index n = lp.n();
  std::vector<double> u(z_tilde.size());
  const auto& db = system.basis_scaling();
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = z_tilde[i] / db[i];
  out.ydd = system.basis().solve_transpose(u);
  out.sdd = lp.a.multiply_transpose(out.ydd);
  for (Index j = 0; j < n; ++j) out.sdd[j] = -out.sdd[j];
  const std::vector<double> r_hat = residual_of(system, rho2_hat, z_tilde);
  out.v2 = embed_error(system, system.basis(), n, r_hat);
  out.xdd.resize(n);
  for (Index j = 0; j < n; ++j)
    out.xdd[j] = -sc.d2[j] * out.sdd[j] -
                 2.0 * out.xd[j] * out.sd[j] / it.s[j] - out.v2[j];
}

bool second_solution_rejected(const SparseMatrix& m_nes,
                              const std::vector<double>& yddot,
                              const std::vector<double>& rho2) {
  std::vector<double> check = m_nes.multiply(yddot);
  for (std::size_t i = 0; i < rho2.size(); ++i) check[i] -= rho2[i];
  return norm2(check) > norm2(rho2);
}

void zero_second_direction(const StandardFormLP& lp, const Iterate& it,
                           DirectionPair& dirs) {
  const Index n = lp.n();
  dirs.xdd.resize(n);
  for (Index j = 0; j < n; ++j)
    dirs.xdd[j] = -2.0 * dirs.xd[j] * dirs.sd[j] / it.s[j];
  dirs.ydd.assign(lp.m(), 0.0);
  dirs.sdd.assign(n, 0.0);
  dirs.v2.assign(n, 0.0);
  dirs.second_zeroed = true;
}

NewtonSystem::NewtonSystem(const StandardFormLP& lp, const NewtonOptions& opts)
    : lp_(lp), opts_(opts) {}

NewtonSystem::~NewtonSystem() = default;

double NewtonSystem::cg_tolerance(double tighten) const {
  return opts_.eta * std::sqrt(scaling_.mu / static_cast<double>(lp_.n())) *
         tighten;
}

void NewtonSystem::prepare(const Iterate& it) {
  scaling_ = ScalingState::from(it);
  m_ = normal_matrix(lp_.a, scaling_.d2);
  auto p = jacobi_preconditioner(m_);
  jacobi_ok_ = p.has_value();
  jacobi_ = jacobi_ok_ ? std::move(*p) : std::vector<double>();
  chol_.reset();
  chol_regularized_ = false;
  mnes_.reset();
  if (opts_.mode == SystemMode::mnes) {
    if (!basis_) basis_.emplace(lp_.a);
    mnes_ = std::make_unique<MnesSystem>(m_, *basis_, scaling_);
  }
}

std::vector<double> NewtonSystem::solve_spd(const std::vector<double>& rhs,
                                            double tighten,
                                            bool allow_nonconverged,
                                            CGReport& report) {
  const bool mnes = opts_.mode == SystemMode::mnes;

  if (opts_.backend == Backend::cholesky) {
    if (!chol_) {
      SparseMatrix target;
      if (mnes) {
        // Assemble the transformed matrix explicitly for factorization.
        std::vector<Triplet> trips;
        const Index m = lp_.m();
        std::vector<double> e(m, 0.0), col;
        for (Index j = 0; j < m; ++j) {
          e[j] = 1.0;
          mnes_->apply(e, col);
          for (Index i = 0; i < m; ++i)
            if (col[i] != 0.0) trips.push_back({i, j, col[i]});
          e[j] = 0.0;
        }
        target = SparseMatrix::from_triplets(m, m, trips);
      } else {
        target = m_;
      }
      try {
        chol_ = std::make_unique<CholeskyFactor>(target);
      } catch (const NumericalError&) {
        chol_ = std::make_unique<CholeskyFactor>(
            target.shifted(kRegularizationShift));
        chol_->mark_regularized();
        chol_regularized_ = true;
      }
    }
    auto [x, res] = chol_->solve(rhs);
    report = CGReport{};
    report.tolerance = opts_.exact_tol_scale * (1.0 + norm2(rhs));
    report.achieved = res;
    report.iterations = 0;
    report.converged = res <= report.tolerance;
    report.regularized = chol_regularized_;
    return x;
  }

  const double tol = cg_tolerance(tighten);
  const int cap = opts_.cg_cap_multiplier * static_cast<int>(lp_.m());
  const LinearOperator* op;
  SparseOperator nes_op(m_);
  const std::vector<double>* precond = &jacobi_;
  static const std::vector<double> kEmpty;
  if (mnes) {
    op = mnes_.get();
    precond = &mnes_->jacobi();
  } else {
    op = &nes_op;
    if (!jacobi_ok_) precond = &kEmpty;
  }

  std::pair<std::vector<double>, CGReport> result{{}, {}};
  bool solved = false;
  if (!mnes && !jacobi_ok_) {
    // Nonpositive diagonal: go straight to the regularized system.
    result = regularize_and_retry(*op, rhs, tol, cap, kEmpty);
    solved = result.second.converged;
  } else {
    result = cg_solve(*op, rhs, tol, cap, *precond);
    solved = result.second.converged;
    if (!solved) {
      result = regularize_and_retry(*op, rhs, tol, cap, *precond);
      solved = result.second.converged;
    }
  }
  if (!solved && !allow_nonconverged)
    throw NumericalError(
        "conjugate gradient failed to reach tolerance after regularization");
  report = result.second;
  return std::move(result.first);
}

std::vector<double> NewtonSystem::solve_exact(const std::vector<double>& rhs,
                                              CGReport& report) {
  return solve_spd(rhs, 1.0, true, report);
}

DirectionPair NewtonSystem::solve_first(const Iterate& it, double sigma,
                                        double tighten) {
  DirectionPair out;
  const std::vector<double> rho1 = first_rhs_nes(lp_, it, sigma);
  if (opts_.mode == SystemMode::mnes) {
    const std::vector<double> rho1_hat = first_rhs_mnes(rho1, *mnes_);
    std::vector<double> z = solve_spd(rho1_hat, tighten, false, out.cg1);
    recover_first_mnes(lp_, it, scaling_, sigma, *mnes_, rho1_hat, z, out);
  } else {
    std::vector<double> ydot = solve_spd(rho1, tighten, false, out.cg1);
    recover_first_nes(lp_, it, scaling_, sigma, ydot, out);
  }
  return out;
}

void NewtonSystem::solve_second(const Iterate& it, DirectionPair& dirs,
                                double tighten) {
  const Index n = lp_.n();

  // Skip rule: a zero second derivative already satisfies the error budget.
  double prod_inf = 0.0;
  for (Index j = 0; j < n; ++j)
    prod_inf = std::max(prod_inf, std::abs(-2.0 * dirs.xd[j] * dirs.sd[j]));
  if (prod_inf <= opts_.eta * scaling_.mu) {
    dirs.xdd.assign(n, 0.0);
    dirs.ydd.assign(lp_.m(), 0.0);
    dirs.sdd.assign(n, 0.0);
    dirs.v2.assign(n, 0.0);
    dirs.second_skipped = true;
    dirs.cg2 = CGReport{};
    return;
  }

  const std::vector<double> rho2 = second_rhs(lp_, it, dirs.xd, dirs.sd);

  if (opts_.mode == SystemMode::mnes) {
    const std::vector<double> rho2_hat = mnes_->transform_rhs(rho2);
    std::vector<double> z = solve_spd(rho2_hat, tighten, true, dirs.cg2);
    recover_second_mnes(lp_, it, scaling_, *mnes_, rho2_hat, z, dirs);
  } else {
    std::vector<double> ydd = solve_spd(rho2, tighten, true, dirs.cg2);
    recover_second_nes(lp_, it, scaling_, ydd, dirs);
  }

  // Fallback: a solution worse than the trivial zero vector is discarded.
  if (second_solution_rejected(m_, dirs.ydd, rho2))
    zero_second_direction(lp_, it, dirs);
}

}  // namespace arclp
