#include "arclp/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "arclp/errors.hpp"
#include "arclp/vector_ops.hpp"

namespace arclp {

std::string to_string(Method method) {
  switch (method) {
    case Method::ii_arc: return "ii-arc";
    case Method::ii_line: return "ii-line";
    case Method::ei_arc: return "ei-arc";
    case Method::ei_line: return "ei-line";
  }
  return "?";
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::zeta_optimal: return "ZetaOptimal";
    case SolveStatus::relative_optimal: return "RelativeOptimal";
    case SolveStatus::step_too_small: return "StepTooSmall";
    case SolveStatus::iteration_cap: return "IterationCap";
    case SolveStatus::time_limit: return "TimeLimit";
    case SolveStatus::solver_failure: return "SolverFailure";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  if (name == "ii-arc") return Method::ii_arc;
  if (name == "ii-line") return Method::ii_line;
  if (name == "ei-arc") return Method::ei_arc;
  if (name == "ei-line") return Method::ei_line;
  throw std::invalid_argument("unknown method '" + name + "'");
}

SolverConfig SolverConfig::resolved() const {
  SolverConfig out = *this;
  if (method == Method::ei_arc || method == Method::ei_line)
    out.backend = Backend::cholesky;
  return out;
}

void SolverConfig::validate() const {
  const SolverConfig cfg = resolved();
  if (!(cfg.sigma > 0.0) || cfg.sigma > 1.0)
    throw std::invalid_argument("sigma must be in (0, 1]");
  if (cfg.eta < 0.0 || cfg.eta >= 1.0)
    throw std::invalid_argument("eta must be in [0, 1)");
  if (!(cfg.gamma1 > 0.0) || cfg.gamma1 >= 1.0)
    throw std::invalid_argument("gamma1 must be in (0, 1)");
  if (cfg.gamma2 < 1.0) throw std::invalid_argument("gamma2 must be >= 1");
  if (!(cfg.beta > 0.0) || cfg.beta >= 1.0)
    throw std::invalid_argument("beta must be in (0, 1)");
  if (cfg.zeta < 0.0) throw std::invalid_argument("zeta must be >= 0");
  if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(cfg.alpha_floor > 0.0))
    throw std::invalid_argument("alpha_floor must be > 0");
  if (cfg.max_iterations <= 0)
    throw std::invalid_argument("max_iterations must be > 0");
  if (!(cfg.initial_scale > 0.0))
    throw std::invalid_argument("initial_scale must be > 0");

  if (cfg.method != Method::ei_line) {
    const double eta_eff = cfg.backend == Backend::cholesky ? 0.0 : cfg.eta;
    if (!((1.0 - cfg.gamma1) * cfg.sigma - (1.0 + cfg.gamma1) * eta_eff > 0.0))
      throw std::invalid_argument(
          "parameter condition (1 - gamma1) sigma - (1 + gamma1) eta > 0 "
          "violated");
    if (!(cfg.beta > cfg.sigma + eta_eff))
      throw std::invalid_argument(
          "parameter condition beta > sigma + eta violated");
  }
}

SolveStatus check_termination(const StandardFormLP& lp, const Iterate& it,
                              const SolverConfig& config, double b_norm,
                              double c_norm, int iteration, double last_alpha,
                              bool* stop) {
  *stop = true;
  const double res_norm = stacked_norm2(it.rb, it.rc);
  if (it.mu <= config.zeta && res_norm <= config.zeta)
    return SolveStatus::zeta_optimal;

  const double cx = dot(lp.c, it.x);
  const double by = dot(lp.b, it.y);
  const double rel = std::max(
      {norm2(it.rb) / std::max(1.0, b_norm), norm2(it.rc) / std::max(1.0, c_norm),
       it.mu / std::max({1.0, std::abs(cx), std::abs(by)})});
  if (rel < config.epsilon) return SolveStatus::relative_optimal;

  if (last_alpha >= 0.0 && last_alpha < config.alpha_floor)
    return SolveStatus::step_too_small;
  if (iteration >= config.max_iterations) return SolveStatus::iteration_cap;

  *stop = false;
  return SolveStatus::solver_failure;  // ignored when *stop is false
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Iterate lustig_initial_point(const StandardFormLP& lp) {
  const double xi1 = std::max(1.0, norm_inf(lp.b));
  const double xi2 = std::max(1.0, norm_inf(lp.c));
  return Iterate::make(lp, std::vector<double>(lp.n(), xi1),
                       std::vector<double>(lp.m(), 0.0),
                       std::vector<double>(lp.n(), xi2));
}

Iterate mehrotra_initial_point(const StandardFormLP& lp) {
  const SparseMatrix gram =
      normal_matrix(lp.a, std::vector<double>(lp.n(), 1.0));
  CholeskyFactor factor(gram);  // throws on rank problems

  // Least-squares point: x = A^T (A A^T)^{-1} b, y = (A A^T)^{-1} A c.
  std::vector<double> w = factor.solve(lp.b).first;
  std::vector<double> x = lp.a.multiply_transpose(w);
  std::vector<double> y = factor.solve(lp.a.multiply(lp.c)).first;
  std::vector<double> s = lp.a.multiply_transpose(y);
  for (Index j = 0; j < lp.n(); ++j) s[j] = lp.c[j] - s[j];

  double xmin = 0.0, smin = 0.0;
  for (double v : x) xmin = std::min(xmin, v);
  for (double v : s) smin = std::min(smin, v);
  const double dx = -1.5 * xmin;
  const double ds = -1.5 * smin;
  double dot_xs = 0.0, sum_x = 0.0, sum_s = 0.0;
  for (Index j = 0; j < lp.n(); ++j) {
    dot_xs += (x[j] + dx) * (s[j] + ds);
    sum_x += x[j] + dx;
    sum_s += s[j] + ds;
  }
  const double dx_hat = dx + (sum_s > 0.0 ? 0.5 * dot_xs / sum_s : 1.0);
  const double ds_hat = ds + (sum_x > 0.0 ? 0.5 * dot_xs / sum_x : 1.0);
  for (Index j = 0; j < lp.n(); ++j) {
    x[j] += dx_hat;
    s[j] += ds_hat;
  }
  // Degenerate data can still leave nonpositive entries.
  for (Index j = 0; j < lp.n(); ++j) {
    if (!(x[j] > 0.0)) x[j] = 1.0;
    if (!(s[j] > 0.0)) s[j] = 1.0;
  }
  return Iterate::make(lp, std::move(x), std::move(y), std::move(s));
}

bool pairwise_centered(const Iterate& it, double gamma1) {
  for (std::size_t j = 0; j < it.x.size(); ++j)
    if (it.x[j] * it.s[j] - gamma1 * it.mu < 0.0) return false;
  return true;
}

// Candidate with the smaller initial mu; the arc variant additionally
// needs the pairwise centering condition, falling back to the cold start.
Iterate exact_method_initial_point(const StandardFormLP& lp,
                                   const SolverConfig& cfg) {
  std::vector<Iterate> candidates;
  try {
    candidates.push_back(mehrotra_initial_point(lp));
  } catch (const NumericalError&) {
  }
  candidates.push_back(lustig_initial_point(lp));

  const bool need_centered = cfg.method == Method::ei_arc;
  const Iterate* best = nullptr;
  for (const Iterate& cand : candidates) {
    if (need_centered && !pairwise_centered(cand, cfg.gamma1)) continue;
    if (!best || cand.mu < best->mu) best = &cand;
  }
  if (!best) return initial_point(lp, cfg.initial_scale);
  return *best;
}

struct MehrotraStep {
  DirectionPair dirs;
  double alpha_p = 0.0;
  double alpha_d = 0.0;
};

// Longest step with x - alpha d > 0, capped at 1.
double max_step(const std::vector<double>& x, const std::vector<double>& d) {
  double amax = 1.0 / 0.99;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (d[j] > 0.0) amax = std::min(amax, x[j] / d[j]);
  return std::min(1.0, 0.99 * amax);
}

// One Mehrotra predictor-corrector iteration sharing the prepared
// factorization: an affine solve, the centering power sigma, a corrected
// solve, then separate primal/dual steps to 0.99 of the boundary.
MehrotraStep mehrotra_iteration(const StandardFormLP& lp, const Iterate& it,
                                NewtonSystem& ns) {
  MehrotraStep out;
  const Index n = lp.n();

  CGReport rep_aff;
  std::vector<double> w(n);
  for (Index j = 0; j < n; ++j)
    w[j] = (it.x[j] / it.s[j]) * it.rc[j] - it.x[j];
  std::vector<double> rhs = lp.a.multiply(w);
  for (Index i = 0; i < lp.m(); ++i) rhs[i] += it.rb[i];
  std::vector<double> dy_aff = ns.solve_exact(rhs, rep_aff);
  std::vector<double> ds_aff = lp.a.multiply_transpose(dy_aff);
  for (Index j = 0; j < n; ++j) ds_aff[j] = it.rc[j] - ds_aff[j];
  std::vector<double> dx_aff(n);
  for (Index j = 0; j < n; ++j)
    dx_aff[j] = it.x[j] - (it.x[j] / it.s[j]) * ds_aff[j];

  const double ap = max_step(it.x, dx_aff);
  const double ad = max_step(it.s, ds_aff);
  double mu_aff = 0.0;
  for (Index j = 0; j < n; ++j)
    mu_aff += (it.x[j] - ap * dx_aff[j]) * (it.s[j] - ad * ds_aff[j]);
  mu_aff /= static_cast<double>(n);
  const double ratio = std::max(0.0, std::min(1.0, mu_aff / it.mu));
  const double sigma = ratio * ratio * ratio;

  CGReport rep_cor;
  const double smu = sigma * it.mu;
  for (Index j = 0; j < n; ++j)
    w[j] = (it.x[j] / it.s[j]) * it.rc[j] - it.x[j] + smu / it.s[j] -
           dx_aff[j] * ds_aff[j] / it.s[j];
  rhs = lp.a.multiply(w);
  for (Index i = 0; i < lp.m(); ++i) rhs[i] += it.rb[i];
  std::vector<double> dy = ns.solve_exact(rhs, rep_cor);
  std::vector<double> ds = lp.a.multiply_transpose(dy);
  for (Index j = 0; j < n; ++j) ds[j] = it.rc[j] - ds[j];
  std::vector<double> dx(n);
  for (Index j = 0; j < n; ++j)
    dx[j] = it.x[j] - smu / it.s[j] + dx_aff[j] * ds_aff[j] / it.s[j] -
            (it.x[j] / it.s[j]) * ds[j];

  out.alpha_p = max_step(it.x, dx);
  out.alpha_d = max_step(it.s, ds);
  out.dirs.xd = std::move(dx);
  out.dirs.yd = std::move(dy);
  out.dirs.sd = std::move(ds);
  out.dirs.v1.assign(n, 0.0);
  out.dirs.xdd.assign(n, 0.0);
  out.dirs.ydd.assign(lp.m(), 0.0);
  out.dirs.sdd.assign(n, 0.0);
  out.dirs.v2.assign(n, 0.0);
  out.dirs.cg1 = rep_aff;
  out.dirs.cg2 = rep_cor;
  return out;
}

}  // namespace

SolveResult solve(const StandardFormLP& lp, const SolverConfig& config) {
  const SolverConfig cfg = config.resolved();
  cfg.validate();

  const auto t0 = Clock::now();
  SolveResult result;

  NewtonOptions nopts;
  nopts.backend = cfg.backend;
  nopts.mode = cfg.system_mode;
  nopts.eta = cfg.backend == Backend::cholesky ? 0.0 : cfg.eta;

  Iterate it = (cfg.method == Method::ei_arc || cfg.method == Method::ei_line)
                   ? exact_method_initial_point(lp, cfg)
                   : initial_point(lp, cfg.initial_scale);
  result.initial_iterate = it;
  const double b_norm = norm2(lp.b);
  const double c_norm = norm2(lp.c);
  const double r0_norm = stacked_norm2(it.rb, it.rc);
  const double ratio = r0_norm / it.mu;
  result.initial_ratio = ratio;

  const bool is_arc = cfg.method == Method::ii_arc || cfg.method == Method::ei_arc;
  const bool is_mehrotra = cfg.method == Method::ei_line;
  const StepControls controls{cfg.gamma1, cfg.beta, cfg.alpha_floor, 0.8};

  NewtonSystem ns(lp, nopts);
  double nu = 1.0;
  double tighten = 1.0;
  constexpr double kTightenStep = 8.0;
  constexpr int kMaxTightenRetries = 10;
  int k = 0;
  double last_alpha = -1.0;
  SolveStatus status = SolveStatus::iteration_cap;

  try {
    while (true) {
      if (cfg.time_limit_s > 0.0 && seconds_since(t0) > cfg.time_limit_s) {
        status = SolveStatus::time_limit;
        break;
      }
      bool stop = false;
      status = check_termination(lp, it, cfg, b_norm, c_norm, k, last_alpha,
                                 &stop);
      if (stop) break;

      const auto iter_start = Clock::now();
      IterationRecord rec;
      rec.k = k;
      rec.mu = it.mu;
      rec.rb_norm = norm2(it.rb);
      rec.rc_norm = norm2(it.rc);
      rec.nu = nu;

      if (is_mehrotra) {
        ns.prepare(it);
        MehrotraStep step = mehrotra_iteration(lp, it, ns);
        std::vector<double> x(lp.n()), y(lp.m()), s(lp.n());
        for (Index j = 0; j < lp.n(); ++j)
          x[j] = it.x[j] - step.alpha_p * step.dirs.xd[j];
        for (Index i = 0; i < lp.m(); ++i)
          y[i] = it.y[i] - step.alpha_d * step.dirs.yd[i];
        for (Index j = 0; j < lp.n(); ++j)
          s[j] = it.s[j] - step.alpha_d * step.dirs.sd[j];
        Iterate next = Iterate::make(lp, std::move(x), std::move(y),
                                     std::move(s));
        rec.alpha = step.alpha_p;
        rec.cg1_iters = step.dirs.cg1.iterations;
        rec.cg1_res = step.dirs.cg1.achieved;
        rec.cg2_iters = step.dirs.cg2.iterations;
        rec.cg2_res = step.dirs.cg2.achieved;
        rec.ms = seconds_since(iter_start) * 1e3;
        result.log.push_back(rec);
        if (cfg.collect_trace)
          result.trace.push_back({it, step.dirs, step.alpha_p, true});
        nu *= (1.0 - step.alpha_p);
        it = std::move(next);
        last_alpha = step.alpha_p;
        ++k;
        continue;
      }

      // Arc and line-search methods share the direction machinery.
      ns.prepare(it);
      tighten = std::min(1.0, tighten * kTightenStep);
      DirectionPair dirs;
      StepEvaluation accepted;
      Iterate candidate;
      bool member = false;
      for (int attempt = 0;; ++attempt) {
        dirs = ns.solve_first(it, cfg.sigma, tighten);
        if (is_arc) {
          ns.solve_second(it, dirs, tighten);
        } else {
          dirs.xdd.assign(lp.n(), 0.0);
          dirs.ydd.assign(lp.m(), 0.0);
          dirs.sdd.assign(lp.n(), 0.0);
          dirs.v2.assign(lp.n(), 0.0);
          dirs.cg2 = CGReport{};
        }
        auto step = select_step(it, dirs, controls);
        if (!step) {
          status = SolveStatus::step_too_small;
          break;
        }
        accepted = std::move(*step);
        candidate = Iterate::make(lp, accepted.x, accepted.y, accepted.s);
        member = neighborhood_membership(candidate, cfg.gamma1, cfg.gamma2,
                                         ratio);
        // The CG error lands in r_b, which Lemma 3.1 does not cover; a
        // tighter solve restores the neighborhood invariant.
        if (member || cfg.backend != Backend::cg ||
            attempt >= kMaxTightenRetries) {
          break;
        }
        tighten /= kTightenStep;
      }
      if (status == SolveStatus::step_too_small) break;

      rec.alpha = accepted.alpha;
      rec.cg1_iters = dirs.cg1.iterations;
      rec.cg1_res = dirs.cg1.achieved;
      rec.cg2_iters = dirs.cg2.iterations;
      rec.cg2_res = dirs.cg2.achieved;
      rec.skipped = dirs.second_skipped;
      rec.zeroed = dirs.second_zeroed;
      rec.ms = seconds_since(iter_start) * 1e3;
      result.log.push_back(rec);
      if (cfg.collect_trace)
        result.trace.push_back({it, dirs, accepted.alpha, member});

      nu *= (1.0 - std::sin(accepted.alpha));
      it = std::move(candidate);
      last_alpha = accepted.alpha;
      ++k;
    }
  } catch (const NumericalError& err) {
    status = SolveStatus::solver_failure;
    result.message = err.what();
  }

  result.status = status;
  result.iterations = k;
  result.seconds = seconds_since(t0);
  result.std_objective = dot(lp.c, it.x);
  result.objective = lp.provenance.original_objective(result.std_objective);
  result.original_x = lp.provenance.recover(it.x);
  result.final_iterate = std::move(it);
  return result;
}

}  // namespace arclp
