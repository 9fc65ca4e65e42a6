#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "arclp/vector_ops.hpp"

#include "arclp/bench.hpp"
#include "arclp/errors.hpp"
#include "arclp/iteration_log.hpp"
#include "arclp/mps_reader.hpp"
#include "arclp/solver.hpp"
#include "arclp/standard_form.hpp"
#include "arclp/triple_format.hpp"

namespace {

using namespace arclp;

// 0 optimal, 2 step-too-small, 3 iteration cap, 4 timeout, 5 input error.
int exit_code_of(SolveStatus status) {
  switch (status) {
    case SolveStatus::zeta_optimal:
    case SolveStatus::relative_optimal:
      return 0;
    case SolveStatus::step_too_small:
      return 2;
    case SolveStatus::iteration_cap:
      return 3;
    case SolveStatus::time_limit:
      return 4;
    case SolveStatus::solver_failure:
      return 1;
  }
  return 1;
}

StandardFormLP load_problem(const std::string& path) {
  std::filesystem::path p(path);
  std::string ext = p.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(c));
  StandardFormLP lp = ext == ".mps"
                          ? to_standard_form(parse_mps_file(path))
                          : read_triple_format_file(path);
  return preprocess(lp);
}

void add_config_flags(CLI::App* cmd, SolverConfig& cfg, std::string& backend,
                      std::string& mode) {
  cmd->add_option("--sigma", cfg.sigma, "centering parameter");
  cmd->add_option("--eta", cfg.eta, "inexactness budget");
  cmd->add_option("--gamma1", cfg.gamma1, "pairwise neighborhood bound");
  cmd->add_option("--gamma2", cfg.gamma2, "residual neighborhood factor");
  cmd->add_option("--beta", cfg.beta, "duality-gap decrement");
  cmd->add_option("--zeta", cfg.zeta, "absolute optimality target");
  cmd->add_option("--eps", cfg.epsilon, "relative stopping threshold");
  cmd->add_option("--max-iter", cfg.max_iterations, "iteration cap");
  cmd->add_option("--time-limit", cfg.time_limit_s, "seconds per solve");
  cmd->add_option("--initial-scale", cfg.initial_scale,
                  "cold-start point scale");
  cmd->add_option("--backend", backend, "cg or cholesky");
  cmd->add_option("--mode", mode, "nes or mnes");
}

void apply_backend_mode(SolverConfig& cfg, const std::string& backend,
                        const std::string& mode) {
  if (backend == "cg")
    cfg.backend = Backend::cg;
  else if (backend == "cholesky")
    cfg.backend = Backend::cholesky;
  else if (!backend.empty())
    throw CLI::ValidationError("--backend must be cg or cholesky");
  if (mode == "nes")
    cfg.system_mode = SystemMode::nes;
  else if (mode == "mnes")
    cfg.system_mode = SystemMode::mnes;
  else if (!mode.empty())
    throw CLI::ValidationError("--mode must be nes or mnes");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arc-search interior-point LP solver and benchmark harness"};
  app.require_subcommand(1);

  // solve
  std::string solve_file, solve_method = "ii-arc", solve_log;
  std::string solve_backend, solve_mode;
  SolverConfig solve_cfg;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve one problem");
  solve_cmd->add_option("file", solve_file, "MPS or triple-format file")
      ->required();
  solve_cmd->add_option("--method", solve_method,
                        "ii-arc | ii-line | ei-arc | ei-line");
  solve_cmd->add_option("--log", solve_log,
                        "iteration log path (.jsonl or .csv)");
  add_config_flags(solve_cmd, solve_cfg, solve_backend, solve_mode);

  // bench
  std::string bench_dir, bench_out = "bench_out";
  std::vector<std::string> bench_methods{"ii-arc", "ii-line", "ei-arc",
                                         "ei-line"};
  int bench_jobs = 1;
  SolverConfig bench_cfg;
  std::string bench_backend, bench_mode;
  double bench_time_limit = 3600.0;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "run a directory of problems");
  bench_cmd->add_option("dir", bench_dir, "problem directory")->required();
  bench_cmd->add_option("--methods", bench_methods, "methods to run")
      ->delimiter(',');
  bench_cmd->add_option("--out", bench_out, "output directory");
  bench_cmd->add_option("--jobs", bench_jobs, "parallel worker slots");
  bench_cmd->add_option("--time-limit", bench_time_limit, "seconds per run");
  add_config_flags(bench_cmd, bench_cfg, bench_backend, bench_mode);

  // profile
  std::string profile_in, profile_metric = "iterations", profile_out = ".";
  CLI::App* profile_cmd =
      app.add_subcommand("profile", "performance profile from results.csv");
  profile_cmd->add_option("--in", profile_in, "results.csv path")->required();
  profile_cmd->add_option("--metric", profile_metric, "iterations | time");
  profile_cmd->add_option("--out", profile_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) {
      apply_backend_mode(solve_cfg, solve_backend, solve_mode);
      solve_cfg.method = method_from_string(solve_method);
      const StandardFormLP lp = load_problem(solve_file);
      const SolveResult result = solve(lp, solve_cfg);
      if (!solve_log.empty()) write_log_file(solve_log, result.log);
      std::printf("status: %s\n", to_string(result.status).c_str());
      std::printf("iterations: %d\n", result.iterations);
      std::printf("objective: %.10g\n", result.objective);
      std::printf("mu: %.4g  ||rb||: %.4g  ||rc||: %.4g\n",
                  result.final_iterate.mu, norm2(result.final_iterate.rb),
                  norm2(result.final_iterate.rc));
      std::printf("time: %.3f s\n", result.seconds);
      if (!result.message.empty())
        std::printf("message: %s\n", result.message.c_str());
      return exit_code_of(result.status);
    }

    if (bench_cmd->parsed()) {
      apply_backend_mode(bench_cfg, bench_backend, bench_mode);
      SuiteOptions opts;
      for (const std::string& name : bench_methods)
        opts.methods.push_back(method_from_string(name));
      opts.config = bench_cfg;
      opts.time_limit_s = bench_time_limit;
      opts.jobs = bench_jobs;
      std::filesystem::create_directories(bench_out);
      opts.incremental_csv =
          (std::filesystem::path(bench_out) / "results.csv").string();
      const std::vector<BenchmarkRow> rows = run_suite(bench_dir, opts);
      emit_reports(rows, bench_out);
      std::printf("%zu rows -> %s\n", rows.size(), bench_out.c_str());
      return 0;
    }

    if (profile_cmd->parsed()) {
      const std::vector<BenchmarkRow> rows =
          read_results_csv_file(profile_in);
      const ProfileMetric metric = profile_metric == "time"
                                       ? ProfileMetric::time
                                       : ProfileMetric::iterations;
      const std::vector<ProfileCurve> curves =
          performance_profile(rows, metric);
      std::filesystem::create_directories(profile_out);
      const std::string name = profile_metric == "time"
                                   ? "profile_time.tsv"
                                   : "profile_iterations.tsv";
      std::ofstream out(std::filesystem::path(profile_out) / name);
      write_profile_tsv(out, curves);
      std::printf("wrote %s/%s\n", profile_out.c_str(), name.c_str());
      return 0;
    }
  } catch (const ParseError& err) {
    std::fprintf(stderr, "input error: %s\n", err.what());
    return 5;
  } catch (const ModelError& err) {
    std::fprintf(stderr, "input error: %s\n", err.what());
    return 5;
  } catch (const InfeasibleError& err) {
    std::fprintf(stderr, "infeasible: %s\n", err.what());
    return 5;
  } catch (const DegenerateProblemError& err) {
    std::fprintf(stderr, "input error: %s\n", err.what());
    return 5;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
