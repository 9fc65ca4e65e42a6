#ifndef ARCLP_TESTS_SUPPORT_TEST_INSTANCES_HPP
#define ARCLP_TESTS_SUPPORT_TEST_INSTANCES_HPP

#include <random>
#include <vector>

#include "arclp/standard_form.hpp"

namespace arclp::testing {

// Feasible-and-bounded standard-form LP built around a known interior
// point: b = A xbar with xbar > 0 and c = A^T ybar + sbar with sbar > 0,
// so both primal and dual have strictly feasible points. A carries a
// well-conditioned m x m block, making rank(A) = m.
StandardFormLP random_standard_lp(std::mt19937& rng, Index m, Index n);

// Strictly positive random point (not feasible in general).
std::vector<double> random_positive(std::mt19937& rng, Index size, double lo,
                                    double hi);

std::vector<double> random_vector(std::mt19937& rng, Index size, double lo,
                                  double hi);

}  // namespace arclp::testing

#endif
