#ifndef ARCLP_BENCH_HPP
#define ARCLP_BENCH_HPP

#include <string>
#include <vector>

#include "arclp/solver.hpp"

namespace arclp {

struct BenchmarkRow {
  std::string problem;
  Index n = 0;
  Index m = 0;
  std::string method;
  std::string status;   // solver status, "ParseFailure" for unreadable input
  int iterations = 0;
  double time_s = 0.0;
};

enum class ProfileMetric { iterations, time };

struct ProfileCurve {
  std::string method;
  std::vector<std::pair<double, double>> points;  // (tau, fraction)
};

struct SuiteOptions {
  std::vector<Method> methods;
  SolverConfig config;       // per-method config template
  double time_limit_s = 3600.0;
  int jobs = 1;
  std::string incremental_csv;  // rows appended here as they finish
};

bool row_succeeded(const BenchmarkRow& row);

// Runs every (problem, method) cell over the MPS/triple files in a
// directory. Unreadable files produce ParseFailure rows; rows are written
// incrementally so partial suites survive interruption.
std::vector<BenchmarkRow> run_suite(const std::string& problem_dir,
                                    const SuiteOptions& options);

// Dolan-More construction: r_{p,m} = metric / best successful metric on p,
// failures count as infinity; curves share a geometric tau grid.
std::vector<ProfileCurve> performance_profile(
    const std::vector<BenchmarkRow>& rows, ProfileMetric metric);

// results.csv, profile_iterations.tsv, profile_time.tsv and summary.md.
void emit_reports(const std::vector<BenchmarkRow>& rows,
                  const std::string& out_dir);

void write_results_csv(std::ostream& out,
                       const std::vector<BenchmarkRow>& rows);
std::vector<BenchmarkRow> read_results_csv(std::istream& in);
std::vector<BenchmarkRow> read_results_csv_file(const std::string& path);
void write_profile_tsv(std::ostream& out,
                       const std::vector<ProfileCurve>& curves);

}  // namespace arclp

#endif
