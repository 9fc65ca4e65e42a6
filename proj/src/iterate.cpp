#include "arclp/iterate.hpp"

#include <stdexcept>

#include "arclp/errors.hpp"
#include "arclp/vector_ops.hpp"

namespace arclp {

std::pair<std::vector<double>, std::vector<double>> residuals(
    const StandardFormLP& lp, const std::vector<double>& x,
    const std::vector<double>& y, const std::vector<double>& s) {
  if (static_cast<Index>(x.size()) != lp.n() ||
      static_cast<Index>(y.size()) != lp.m() ||
      static_cast<Index>(s.size()) != lp.n())
    throw std::invalid_argument("residuals: dimension mismatch");
  std::vector<double> rb = lp.a.multiply(x);
  for (Index i = 0; i < lp.m(); ++i) rb[i] -= lp.b[i];
  std::vector<double> rc = lp.a.multiply_transpose(y);
  for (Index j = 0; j < lp.n(); ++j) rc[j] += s[j] - lp.c[j];
  return {std::move(rb), std::move(rc)};
}

double duality_measure(const std::vector<double>& x,
                       const std::vector<double>& s) {
  if (x.size() != s.size() || x.empty())
    throw std::invalid_argument("duality_measure: dimension mismatch");
  return dot(x, s) / static_cast<double>(x.size());
}

Iterate Iterate::make(const StandardFormLP& lp, std::vector<double> x,
                      std::vector<double> y, std::vector<double> s) {
  if (!all_positive(x) || !all_positive(s))
    throw std::invalid_argument("iterate: x and s must be strictly positive");
  Iterate it;
  it.mu = duality_measure(x, s);
  auto [rb, rc] = residuals(lp, x, y, s);
  it.x = std::move(x);
  it.y = std::move(y);
  it.s = std::move(s);
  it.rb = std::move(rb);
  it.rc = std::move(rc);
  return it;
}

Iterate initial_point(const StandardFormLP& lp, double scale) {
  if (!(scale > 0.0))
    throw std::invalid_argument("initial_point: scale must be positive");
  return Iterate::make(lp, std::vector<double>(lp.n(), scale),
                       std::vector<double>(lp.m(), 0.0),
                       std::vector<double>(lp.n(), scale));
}

}  // namespace arclp
