#include "support/test_instances.hpp"

namespace arclp::testing {

std::vector<double> random_positive(std::mt19937& rng, Index size, double lo,
                                    double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(size);
  for (Index i = 0; i < size; ++i) v[i] = dist(rng);
  return v;
}

std::vector<double> random_vector(std::mt19937& rng, Index size, double lo,
                                  double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(size);
  for (Index i = 0; i < size; ++i) v[i] = dist(rng);
  return v;
}

StandardFormLP random_standard_lp(std::mt19937& rng, Index m, Index n) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Triplet> trips;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      trips.push_back({i, j, (i == j ? 1.0 : 0.0) + 0.3 * coeff(rng)});
  for (Index i = 0; i < m; ++i)
    for (Index j = m; j < n; ++j)
      if (unit(rng) < 0.6) trips.push_back({i, j, coeff(rng)});

  StandardFormLP lp;
  lp.a = SparseMatrix::from_triplets(m, n, trips);

  const std::vector<double> xbar = random_positive(rng, n, 0.5, 2.0);
  lp.b = lp.a.multiply(xbar);
  const std::vector<double> ybar = random_vector(rng, m, -1.0, 1.0);
  const std::vector<double> sbar = random_positive(rng, n, 0.5, 2.0);
  lp.c = lp.a.multiply_transpose(ybar);
  for (Index j = 0; j < n; ++j) lp.c[j] += sbar[j];

  lp.provenance.maximize = false;
  lp.provenance.objective_constant = 0.0;
  lp.provenance.vars.resize(n);
  lp.provenance.var_names.resize(n);
  for (Index j = 0; j < n; ++j) {
    lp.provenance.vars[j].kind = VarRecovery::Kind::direct;
    lp.provenance.vars[j].col = j;
    lp.provenance.var_names[j] = "x" + std::to_string(j);
  }
  lp.provenance.row_origins.resize(m);
  for (Index i = 0; i < m; ++i) {
    lp.provenance.row_origins[i].kind = RowOrigin::Kind::constraint;
    lp.provenance.row_origins[i].original_row = i;
    lp.provenance.row_origins[i].effective_rhs = lp.b[i];
  }
  return lp;
}

}  // namespace arclp::testing
