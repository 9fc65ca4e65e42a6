#ifndef ARCLP_STANDARD_FORM_HPP
#define ARCLP_STANDARD_FORM_HPP

#include <string>
#include <vector>

#include "arclp/mps_reader.hpp"
#include "arclp/sparse_matrix.hpp"

namespace arclp {

// How an original variable is recovered from the standard-form solution.
struct VarRecovery {
  enum class Kind { direct, shifted, negated, split, fixed };
  Kind kind = Kind::direct;
  Index col = -1;      // standard-form column
  Index col_neg = -1;  // negative part for split variables
  double offset = 0.0; // shifted: x = col + offset; negated: x = offset - col
  double value = 0.0;  // fixed variables
};

// Where a standard-form row comes from.
struct RowOrigin {
  enum class Kind { constraint, variable_bound };
  Kind kind = Kind::constraint;
  Index original_row = -1;  // constraint index (objective excluded) or variable
  Index slack_col = -1;     // standard column of the slack, -1 if none
  double slack_sign = 0.0;  // +1 (<=) or -1 (>=)
  double effective_rhs = 0.0;
};

struct Provenance {
  std::vector<std::string> var_names;
  std::vector<VarRecovery> vars;
  std::vector<RowOrigin> row_origins;
  double objective_constant = 0.0;  // in the original sense
  bool maximize = false;

  std::vector<double> recover(const std::vector<double>& x_std) const;
  // c_std^T x plus constant, flipped back to the original sense.
  double original_objective(double std_objective) const {
    return (maximize ? -std_objective : std_objective) + objective_constant;
  }
};

// min c^T x  s.t.  A x = b, x >= 0.
struct StandardFormLP {
  SparseMatrix a;
  std::vector<double> b;
  std::vector<double> c;
  Provenance provenance;

  Index m() const { return a.rows(); }
  Index n() const { return a.cols(); }
};

// Inequalities receive slack/surplus columns, free variables are split,
// bounded variables are shifted, finite upper bounds become extra rows and
// the objective is normalized to minimization.
StandardFormLP to_standard_form(const RawLPModel& model);

struct PreprocessOptions {
  double zero_row_tol = 1e-10;
  double duplicate_tol = 1e-12;     // after scaling rows to unit max-norm
  double rank_pivot_tol = 1e-10;    // relative to the largest pivot
  Index max_dense_rank_dim = 8000;  // dense QR repair limit on m
};

// Removes zero rows, duplicate rows (erroring when their right-hand sides
// conflict) and linearly dependent rows so that rank(A) = m holds.
StandardFormLP preprocess(const StandardFormLP& lp,
                          const PreprocessOptions& opts = {});

}  // namespace arclp

#endif
