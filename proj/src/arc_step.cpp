#include "arclp/arc_step.hpp"

#include <cmath>
#include <limits>

#include "arclp/vector_ops.hpp"

namespace arclp {

void arc_point(const Iterate& it, const DirectionPair& dirs, double alpha,
               std::vector<double>& x, std::vector<double>& y,
               std::vector<double>& s) {
  const double sin_a = std::sin(alpha);
  const double omc = 1.0 - std::cos(alpha);
  const std::size_t n = it.x.size();
  const std::size_t m = it.y.size();
  x.resize(n);
  y.resize(m);
  s.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    x[j] = it.x[j] - dirs.xd[j] * sin_a + dirs.xdd[j] * omc;
  for (std::size_t i = 0; i < m; ++i)
    y[i] = it.y[i] - dirs.yd[i] * sin_a + dirs.ydd[i] * omc;
  for (std::size_t j = 0; j < n; ++j)
    s[j] = it.s[j] - dirs.sd[j] * sin_a + dirs.sdd[j] * omc;
}

StepEvaluation evaluate_conditions(const Iterate& it, const DirectionPair& dirs,
                                   double alpha, double gamma1, double beta) {
  StepEvaluation ev;
  ev.alpha = alpha;
  arc_point(it, dirs, alpha, ev.x, ev.y, ev.s);

  const double sin_a = std::sin(alpha);
  const std::size_t n = it.x.size();
  const double xs = dot(it.x, it.s);
  const double xs_alpha = dot(ev.x, ev.s);
  ev.mu_alpha = xs_alpha / static_cast<double>(n);
  ev.g = xs_alpha - (1.0 - sin_a) * xs;
  ev.h = (1.0 - (1.0 - beta) * sin_a) * xs - xs_alpha;

  ev.positive = true;
  double min_gi = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    if (!(ev.x[j] > 0.0) || !(ev.s[j] > 0.0)) ev.positive = false;
    min_gi = std::min(min_gi, ev.x[j] * ev.s[j] - gamma1 * ev.mu_alpha);
  }
  ev.min_g_i = min_gi;
  ev.accepted = ev.positive && ev.min_g_i >= 0.0 && ev.g >= 0.0 && ev.h >= 0.0;
  return ev;
}

std::optional<StepEvaluation> select_step(const Iterate& it,
                                          const DirectionPair& dirs,
                                          const StepControls& controls) {
  double sin_a = 1.0;  // alpha = pi/2
  while (true) {
    const double alpha = std::asin(sin_a);
    if (alpha < controls.alpha_floor) return std::nullopt;
    StepEvaluation ev =
        evaluate_conditions(it, dirs, alpha, controls.gamma1, controls.beta);
    if (ev.accepted) return ev;
    sin_a *= controls.backtrack_ratio;
  }
}

bool neighborhood_membership(const Iterate& it, double gamma1, double gamma2,
                             double initial_ratio) {
  if (!all_positive(it.x) || !all_positive(it.s)) return false;
  for (std::size_t j = 0; j < it.x.size(); ++j)
    if (it.x[j] * it.s[j] - gamma1 * it.mu < 0.0) return false;
  const double res = stacked_norm2(it.rb, it.rc);
  // Slack of a few ulps so the by-construction equality at k = 0 passes.
  return res <= initial_ratio * gamma2 * it.mu * (1.0 + 1e-12);
}

}  // namespace arclp
