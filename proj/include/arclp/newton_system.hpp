#ifndef ARCLP_NEWTON_SYSTEM_HPP
#define ARCLP_NEWTON_SYSTEM_HPP

#include <memory>
#include <optional>
#include <vector>

#include "arclp/iterate.hpp"
#include "arclp/linear_solvers.hpp"
#include "arclp/sparse_matrix.hpp"
#include "arclp/standard_form.hpp"

namespace arclp {

enum class Backend { cg, cholesky };
enum class SystemMode { nes, mnes };

// Diagonal scaling D = X^{1/2} S^{-1/2} of the current iterate.
struct ScalingState {
  std::vector<double> d2;  // x_i / s_i
  std::vector<double> d;   // sqrt(x_i / s_i)
  double mu = 0.0;
  static ScalingState from(const Iterate& it);
};

// Ordered column basis B with A_B nonsingular, fixed for a whole solve.
class BasisSelection {
 public:
  // Complete-pivoted elimination on a dense copy of A; the pivot order
  // defines the basis. Throws ModelError when rank(A) < m.
  explicit BasisSelection(const SparseMatrix& a,
                          double pivot_tol = 1e-10);
  ~BasisSelection();
  BasisSelection(BasisSelection&&) noexcept;
  BasisSelection& operator=(BasisSelection&&) noexcept;

  const std::vector<Index>& columns() const { return columns_; }

  std::vector<double> solve(const std::vector<double>& rhs) const;            // A_B u = rhs
  std::vector<double> solve_transpose(const std::vector<double>& rhs) const;  // A_B^T u = rhs

 private:
  std::vector<Index> columns_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// rho_1 = A D^2 r_c + r_b - A S^{-1} (x o s - sigma mu e).
std::vector<double> first_rhs_nes(const StandardFormLP& lp, const Iterate& it,
                                  double sigma);

// rho_2 = 2 A S^{-1} (xdot o sdot).
std::vector<double> second_rhs(const StandardFormLP& lp, const Iterate& it,
                               const std::vector<double>& xdot,
                               const std::vector<double>& sdot);

// The congruence-transformed system M_hat z = rho_hat over the basis.
// M_hat is formed densely only for small systems; otherwise it is applied
// as a composition.
class MnesSystem : public LinearOperator {
 public:
  MnesSystem(const SparseMatrix& m_nes, const BasisSelection& basis,
             const ScalingState& scaling, Index dense_limit = 200);

  Index size() const override { return m_; }
  void apply(const std::vector<double>& x,
             std::vector<double>& y) const override;

  std::vector<double> transform_rhs(const std::vector<double>& rho) const;
  const std::vector<double>& basis_scaling() const { return db_; }
  const std::vector<double>& jacobi() const { return jacobi_; }
  const BasisSelection& basis() const { return basis_; }

 private:
  void apply_impl(const std::vector<double>& x, std::vector<double>& y) const;

  Index m_ = 0;
  const SparseMatrix& m_nes_;
  const BasisSelection& basis_;
  std::vector<double> db_;  // D_B diagonal in basis order
  std::vector<std::vector<double>> dense_;  // dense M_hat rows when small
  std::vector<double> jacobi_;
};

std::vector<double> first_rhs_mnes(const std::vector<double>& rho1,
                                   const MnesSystem& system);

struct DirectionPair {
  // First derivative and its error carrier v1.
  std::vector<double> xd, yd, sd, v1;
  // Second derivative and its error carrier v2.
  std::vector<double> xdd, ydd, sdd, v2;
  bool second_skipped = false;
  bool second_zeroed = false;
  CGReport cg1, cg2;
};

// Recovery steps shared by the production solver and the algebra tests.
// The MNES variants recompute the residual r_hat of the supplied inexact
// solution and fold it into v.
void recover_first_nes(const StandardFormLP& lp, const Iterate& it,
                       const ScalingState& sc, double sigma,
                       const std::vector<double>& ydot, DirectionPair& out);
void recover_first_mnes(const StandardFormLP& lp, const Iterate& it,
                        const ScalingState& sc, double sigma,
                        const MnesSystem& system,
                        const std::vector<double>& rho1_hat,
                        const std::vector<double>& z_tilde,
                        DirectionPair& out);
void recover_second_nes(const StandardFormLP& lp, const Iterate& it,
                        const ScalingState& sc,
                        const std::vector<double>& yddot, DirectionPair& out);
void recover_second_mnes(const StandardFormLP& lp, const Iterate& it,
                         const ScalingState& sc, const MnesSystem& system,
                         const std::vector<double>& rho2_hat,
                         const std::vector<double>& z_tilde,
                         DirectionPair& out);

// Zero fallback test: the inexact solution is discarded when its residual
// exceeds that of the trivial zero vector.
bool second_solution_rejected(const SparseMatrix& m_nes,
                              const std::vector<double>& yddot,
                              const std::vector<double>& rho2);

// (xdd, ydd, sdd) = (-2 S^{-1}(xd o sd), 0, 0) with v2 = 0.
void zero_second_direction(const StandardFormLP& lp, const Iterate& it,
                           DirectionPair& dirs);

struct NewtonOptions {
  Backend backend = Backend::cg;
  SystemMode mode = SystemMode::nes;
  double eta = 0.3;
  int cg_cap_multiplier = 10;
  double exact_tol_scale = 1e-9;  // cholesky budget 1e-9 * (1 + ||rhs||)
};

// Per-solve assembly and solution of the two derivative systems. prepare()
// rebuilds the iterate-dependent state; the Cholesky factorization is
// shared by the two solves of one iteration.
class NewtonSystem {
 public:
  NewtonSystem(const StandardFormLP& lp, const NewtonOptions& opts);
  ~NewtonSystem();
  NewtonSystem(const NewtonSystem&) = delete;
  NewtonSystem& operator=(const NewtonSystem&) = delete;

  void prepare(const Iterate& it);

  // tighten scales the CG tolerance below the eta sqrt(mu/n) budget.
  DirectionPair solve_first(const Iterate& it, double sigma,
                            double tighten = 1.0);
  void solve_second(const Iterate& it, DirectionPair& dirs,
                    double tighten = 1.0);

  // Raw solve of M u = rhs with the prepared backend; the predictor and
  // corrector of the Mehrotra baseline reuse the factorization this way.
  std::vector<double> solve_exact(const std::vector<double>& rhs,
                                  CGReport& report);

  const ScalingState& scaling() const { return scaling_; }
  const SparseMatrix& normal() const { return m_; }
  double cg_tolerance(double tighten = 1.0) const;

 private:
  std::vector<double> solve_spd(const std::vector<double>& rhs, double tighten,
                                bool allow_nonconverged, CGReport& report);

  const StandardFormLP& lp_;
  NewtonOptions opts_;
  ScalingState scaling_;
  SparseMatrix m_;
  std::vector<double> jacobi_;
  bool jacobi_ok_ = false;
  std::optional<BasisSelection> basis_;
  std::unique_ptr<MnesSystem> mnes_;
  std::unique_ptr<CholeskyFactor> chol_;
  bool chol_regularized_ = false;
};

}  // namespace arclp

#endif
