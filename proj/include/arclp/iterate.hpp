#ifndef ARCLP_ITERATE_HPP
#define ARCLP_ITERATE_HPP

#include <utility>
#include <vector>

#include "arclp/standard_form.hpp"

namespace arclp {

// r_b = A x - b,  r_c = A^T y + s - c.
std::pair<std::vector<double>, std::vector<double>> residuals(
    const StandardFormLP& lp, const std::vector<double>& x,
    const std::vector<double>& y, const std::vector<double>& s);

// mu = x^T s / n.
double duality_measure(const std::vector<double>& x,
                       const std::vector<double>& s);

// Primal-dual point with cached residuals and duality measure. x and s are
// strictly positive in every retained iterate.
struct Iterate {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> s;
  std::vector<double> rb;
  std::vector<double> rc;
  double mu = 0.0;

  static Iterate make(const StandardFormLP& lp, std::vector<double> x,
                      std::vector<double> y, std::vector<double> s);
};

// (x0, y0, s0) = scale * (e, 0, e). In the neighborhood by construction:
// all pairwise products are equal and the residual ratio bound holds with
// equality at k = 0.
Iterate initial_point(const StandardFormLP& lp, double scale = 1e4);

}  // namespace arclp

#endif
