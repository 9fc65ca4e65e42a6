#ifndef ARCLP_SOLVER_HPP
#define ARCLP_SOLVER_HPP

#include <string>
#include <vector>

#include "arclp/arc_step.hpp"
#include "arclp/iterate.hpp"
#include "arclp/newton_system.hpp"
#include "arclp/standard_form.hpp"

namespace arclp {

enum class Method { ii_arc, ii_line, ei_arc, ei_line };

enum class SolveStatus {
  zeta_optimal,      // mu <= zeta and ||(r_b, r_c)|| <= zeta
  relative_optimal,  // the relative stopping test fired
  step_too_small,    // alpha fell below the floor
  iteration_cap,
  time_limit,
  solver_failure
};

std::string to_string(Method method);
std::string to_string(SolveStatus status);
Method method_from_string(const std::string& name);

struct SolverConfig {
  double sigma = 0.4;   // centering
  double eta = 0.3;     // enforcing (inexactness budget)
  double gamma1 = 0.1;
  double gamma2 = 1.0;
  double beta = 0.9;    // per-step duality-gap decrement
  double zeta = 1e-2;
  double epsilon = 1e-7;
  double alpha_floor = 1e-7;
  int max_iterations = 500;
  Backend backend = Backend::cg;
  SystemMode system_mode = SystemMode::nes;
  Method method = Method::ii_arc;
  double initial_scale = 1e4;
  double time_limit_s = 0.0;  // 0 disables the limit
  bool collect_trace = false;

  // Applies the method's backend/system defaults (ei_* force cholesky).
  SolverConfig resolved() const;
  // Throws std::invalid_argument when the parameter conditions
  // (1 - gamma1) sigma - (1 + gamma1) eta > 0 and beta > sigma + eta or the
  // basic ranges are violated.
  void validate() const;
};

struct IterationRecord {
  int k = 0;
  double mu = 0.0;       // duality measure of iterate k
  double rb_norm = 0.0;  // recomputed from the stored iterate
  double rc_norm = 0.0;
  double alpha = 0.0;    // step taken at iteration k
  double nu = 1.0;       // prod_{i<k} (1 - sin alpha_i)
  int cg1_iters = 0;
  double cg1_res = 0.0;
  int cg2_iters = 0;
  double cg2_res = 0.0;
  bool skipped = false;
  bool zeroed = false;
  double ms = 0.0;
};

// Per-iteration state kept when collect_trace is on.
struct TraceEntry {
  Iterate iterate;  // state at the start of the iteration
  DirectionPair dirs;
  double alpha = 0.0;
  bool in_neighborhood = true;  // membership of the accepted candidate
};

struct SolveResult {
  SolveStatus status = SolveStatus::solver_failure;
  Iterate final_iterate;         // standard-form variables
  std::vector<double> original_x;
  double objective = 0.0;        // original-space objective value
  double std_objective = 0.0;    // c^T x in standard form
  int iterations = 0;
  double seconds = 0.0;
  std::string message;
  std::vector<IterationRecord> log;
  std::vector<TraceEntry> trace;  // only when collect_trace
  Iterate initial_iterate;
  double initial_ratio = 0.0;     // ||(r_b0, r_c0)|| / mu_0
};

// Termination gates, exposed for tests. `last_alpha < 0` means no step has
// been taken yet.
SolveStatus check_termination(const StandardFormLP& lp, const Iterate& it,
                              const SolverConfig& config, double b_norm,
                              double c_norm, int iteration, double last_alpha,
                              bool* stop);

SolveResult solve(const StandardFormLP& lp, const SolverConfig& config);

}  // namespace arclp

#endif
