#ifndef ARCLP_ARC_STEP_HPP
#define ARCLP_ARC_STEP_HPP

#include <optional>
#include <vector>

#include "arclp/iterate.hpp"
#include "arclp/newton_system.hpp"

namespace arclp {

// Candidate point on the ellipsoidal arc together with the values of the
// acceptance functions at that angle.
struct StepEvaluation {
  double alpha = 0.0;
  std::vector<double> x, y, s;
  double mu_alpha = 0.0;
  double min_g_i = 0.0;  // min_i x_i(alpha) s_i(alpha) - gamma1 mu(alpha)
  double g = 0.0;        // x(a)^T s(a) - (1 - sin a) x^T s
  double h = 0.0;        // (1 - (1 - beta) sin a) x^T s - x(a)^T s(a)
  bool positive = false;
  bool accepted = false;
};

struct StepControls {
  double gamma1 = 0.1;
  double beta = 0.9;
  double alpha_floor = 1e-7;
  double backtrack_ratio = 0.8;  // applied to sin(alpha)
};

// x(a) = x - xd sin a + xdd (1 - cos a), likewise y and s. With a zero
// second derivative this is exactly the line update x - xd sin a.
void arc_point(const Iterate& it, const DirectionPair& dirs, double alpha,
               std::vector<double>& x, std::vector<double>& y,
               std::vector<double>& s);

StepEvaluation evaluate_conditions(const Iterate& it, const DirectionPair& dirs,
                                   double alpha, double gamma1, double beta);

// Backtracks from alpha = pi/2, multiplying sin(alpha) by the backtrack
// ratio, until the acceptance conditions hold. Returns nullopt when alpha
// falls below the floor first (the caller reports StepTooSmall).
std::optional<StepEvaluation> select_step(const Iterate& it,
                                          const DirectionPair& dirs,
                                          const StepControls& controls);

// Membership in N(gamma1, gamma2). initial_ratio is
// ||(r_b(x0), r_c(y0, s0))|| / mu_0, cached at solver start.
bool neighborhood_membership(const Iterate& it, double gamma1, double gamma2,
                             double initial_ratio);

}  // namespace arclp

#endif
