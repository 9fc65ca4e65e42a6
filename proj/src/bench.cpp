#include "arclp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "arclp/errors.hpp"
#include "arclp/mps_reader.hpp"
#include "arclp/standard_form.hpp"
#include "arclp/triple_format.hpp"

namespace arclp {

namespace fs = std::filesystem;

bool row_succeeded(const BenchmarkRow& row) {
  return row.status == "ZetaOptimal" || row.status == "RelativeOptimal";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool has_extension(const fs::path& p, const std::string& ext) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return e == ext;
}

StandardFormLP load_problem(const fs::path& path) {
  StandardFormLP lp;
  if (has_extension(path, ".mps")) {
    lp = to_standard_form(parse_mps_file(path.string()));
  } else {
    lp = read_triple_format_file(path.string());
  }
  return preprocess(lp);
}

std::string format_row(const BenchmarkRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%s,%lld,%lld,%s,%s,%d,%.3f\n",
                r.problem.c_str(), static_cast<long long>(r.n),
                static_cast<long long>(r.m), r.method.c_str(),
                r.status.c_str(), r.iterations, r.time_s);
  return buf;
}

}  // namespace

std::vector<BenchmarkRow> run_suite(const std::string& problem_dir,
                                    const SuiteOptions& options) {
  if (options.methods.empty())
    throw std::invalid_argument("run_suite: no methods given");

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(problem_dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    if (has_extension(p, ".mps") || has_extension(p, ".txt") ||
        has_extension(p, ".lp3"))
      files.push_back(p);
  }
  std::sort(files.begin(), files.end());

  struct Cell {
    std::size_t file = 0;
    Method method{};
  };
  std::vector<Cell> cells;
  for (std::size_t f = 0; f < files.size(); ++f)
    for (Method m : options.methods) cells.push_back({f, m});

  std::vector<BenchmarkRow> rows(cells.size());
  std::mutex io_mutex;
  std::ofstream incremental;
  if (!options.incremental_csv.empty()) {
    incremental.open(options.incremental_csv);
    if (!incremental)
      throw ModelError("cannot write '" + options.incremental_csv + "'");
    incremental << "problem,n,m,method,status,iterations,time_s\n";
    incremental.flush();
  }

  // Problems are shared immutably between the cells of one file.
  std::vector<std::shared_ptr<const StandardFormLP>> problems(files.size());
  std::vector<std::string> load_errors(files.size());
  for (std::size_t f = 0; f < files.size(); ++f) {
    try {
      problems[f] = std::make_shared<const StandardFormLP>(load_problem(files[f]));
    } catch (const std::exception& err) {
      load_errors[f] = err.what();
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      BenchmarkRow row;
      row.problem = files[cell.file].stem().string();
      row.method = to_string(cell.method);
      if (!problems[cell.file]) {
        row.status = "ParseFailure";
      } else {
        const StandardFormLP& lp = *problems[cell.file];
        row.n = lp.n();
        row.m = lp.m();
        SolverConfig cfg = options.config;
        cfg.method = cell.method;
        cfg.time_limit_s = options.time_limit_s;
        const SolveResult res = solve(lp, cfg);
        row.status = to_string(res.status);
        row.iterations = res.iterations;
        row.time_s = res.seconds;
      }
      rows[i] = row;
      if (incremental.is_open()) {
        std::lock_guard<std::mutex> lock(io_mutex);
        incremental << format_row(row);
        incremental.flush();
      }
    }
  };

  const int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::sort(rows.begin(), rows.end(),
            [](const BenchmarkRow& a, const BenchmarkRow& b) {
              return a.problem != b.problem ? a.problem < b.problem
                                            : a.method < b.method;
            });
  return rows;
}

std::vector<ProfileCurve> performance_profile(
    const std::vector<BenchmarkRow>& rows, ProfileMetric metric) {
  std::vector<std::string> methods;
  std::vector<std::string> problems;
  for (const BenchmarkRow& r : rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
      methods.push_back(r.method);
    if (std::find(problems.begin(), problems.end(), r.problem) ==
        problems.end())
      problems.push_back(r.problem);
  }
  if (methods.size() < 2)
    throw std::invalid_argument("performance_profile: need >= 2 methods");

  auto metric_of = [&](const BenchmarkRow& r) {
    if (!row_succeeded(r)) return kInf;
    return metric == ProfileMetric::iterations
               ? static_cast<double>(r.iterations)
               : r.time_s;
  };

  // ratios[method][problem]
  std::map<std::string, std::map<std::string, double>> ratios;
  bool any_success = false;
  for (const std::string& p : problems) {
    double best = kInf;
    for (const BenchmarkRow& r : rows)
      if (r.problem == p) best = std::min(best, metric_of(r));
    for (const BenchmarkRow& r : rows) {
      if (r.problem != p) continue;
      const double v = metric_of(r);
      double ratio;
      if (v == kInf) {
        ratio = kInf;
      } else if (best == 0.0) {
        ratio = v == 0.0 ? 1.0 : kInf;
      } else {
        ratio = v / best;
        any_success = true;
      }
      ratios[r.method][p] = ratio;
    }
  }
  if (!any_success)
    throw std::invalid_argument(
        "performance_profile: no successful run on any problem");

  double max_ratio = 1.0;
  for (const auto& [m, per_problem] : ratios)
    for (const auto& [p, v] : per_problem)
      if (v != kInf) max_ratio = std::max(max_ratio, v);

  // Geometric grid on [1, max_ratio], 256 points, tau = 1 included exactly.
  std::vector<double> grid;
  grid.push_back(1.0);
  if (max_ratio > 1.0) {
    const int points = 256;
    for (int i = 1; i <= points; ++i)
      grid.push_back(std::exp(std::log(max_ratio) * i / points));
  }

  std::vector<ProfileCurve> curves;
  const double total = static_cast<double>(problems.size());
  for (const std::string& m : methods) {
    ProfileCurve curve;
    curve.method = m;
    for (double tau : grid) {
      int count = 0;
      for (const std::string& p : problems) {
        auto it = ratios[m].find(p);
        if (it != ratios[m].end() && it->second <= tau) ++count;
      }
      curve.points.push_back({tau, count / total});
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

void write_results_csv(std::ostream& out,
                       const std::vector<BenchmarkRow>& rows) {
  out << "problem,n,m,method,status,iterations,time_s\n";
  for (const BenchmarkRow& r : rows) out << format_row(r);
}

std::vector<BenchmarkRow> read_results_csv(std::istream& in) {
  std::vector<BenchmarkRow> rows;
  std::string line;
  bool header = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7)
      throw ParseError("results.csv: expected 7 fields", line_no);
    BenchmarkRow r;
    r.problem = fields[0];
    r.n = std::stoll(fields[1]);
    r.m = std::stoll(fields[2]);
    r.method = fields[3];
    r.status = fields[4];
    r.iterations = std::stoi(fields[5]);
    r.time_s = std::stod(fields[6]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<BenchmarkRow> read_results_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open '" + path + "'");
  return read_results_csv(in);
}

void write_profile_tsv(std::ostream& out,
                       const std::vector<ProfileCurve>& curves) {
  out << "tau";
  for (const ProfileCurve& c : curves) out << '\t' << c.method;
  out << '\n';
  if (curves.empty()) return;
  char buf[64];
  for (std::size_t i = 0; i < curves[0].points.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.10g", curves[0].points[i].first);
    out << buf;
    for (const ProfileCurve& c : curves) {
      std::snprintf(buf, sizeof(buf), "%.10g", c.points[i].second);
      out << '\t' << buf;
    }
    out << '\n';
  }
}

namespace {

// summary.md mirrors the benchmark-table layout: one row per problem,
// iteration/time pairs per method, best entries bold ('-' step failure,
// '*' timeout). Ties are all marked.
void write_summary_md(std::ostream& out, const std::vector<BenchmarkRow>& rows,
                      const std::vector<std::string>& methods,
                      const std::vector<std::string>& problems) {
  auto find_row = [&](const std::string& p,
                      const std::string& m) -> const BenchmarkRow* {
    for (const BenchmarkRow& r : rows)
      if (r.problem == p && r.method == m) return &r;
    return nullptr;
  };

  out << "# Benchmark summary\n\n";
  out << "| problem | n | m |";
  for (const std::string& m : methods) out << ' ' << m << " iters | time (s) |";
  out << "\n|---|---|---|";
  for (std::size_t i = 0; i < methods.size(); ++i) out << "---|---|";
  out << "\n";

  for (const std::string& p : problems) {
    int best_iters = std::numeric_limits<int>::max();
    double best_time = kInf;
    for (const std::string& m : methods) {
      const BenchmarkRow* r = find_row(p, m);
      if (r && row_succeeded(*r)) {
        best_iters = std::min(best_iters, r->iterations);
        best_time = std::min(best_time, r->time_s);
      }
    }
    const BenchmarkRow* any = nullptr;
    for (const std::string& m : methods)
      if ((any = find_row(p, m))) break;
    out << "| " << p << " | " << (any ? any->n : 0) << " | "
        << (any ? any->m : 0) << " |";
    for (const std::string& m : methods) {
      const BenchmarkRow* r = find_row(p, m);
      if (!r) {
        out << " | |";
        continue;
      }
      if (r->status == "TimeLimit") {
        out << " * | * |";
      } else if (!row_succeeded(*r)) {
        out << " - | - |";
      } else {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.2f", r->time_s);
        const bool bold_i = r->iterations == best_iters;
        const bool bold_t = r->time_s == best_time;
        out << ' ' << (bold_i ? "**" : "") << r->iterations
            << (bold_i ? "**" : "") << " | " << (bold_t ? "**" : "") << buf
            << (bold_t ? "**" : "") << " |";
      }
    }
    out << "\n";
  }
  out << "\nBold marks the best successful result per column group; ties are "
         "all marked. `-` is a premature stop, `*` a time limit.\n";
  out << "\nProfiles count failed runs as unsolved (ratio = infinity).\n";
}

}  // namespace

void emit_reports(const std::vector<BenchmarkRow>& rows,
                  const std::string& out_dir) {
  if (rows.empty())
    throw std::invalid_argument("emit_reports: empty row table");
  fs::create_directories(out_dir);

  std::vector<std::string> methods, problems;
  for (const BenchmarkRow& r : rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
      methods.push_back(r.method);
    if (std::find(problems.begin(), problems.end(), r.problem) ==
        problems.end())
      problems.push_back(r.problem);
  }

  {
    std::ofstream out(fs::path(out_dir) / "results.csv");
    if (!out) throw ModelError("cannot write results.csv");
    write_results_csv(out, rows);
  }
  if (methods.size() >= 2) {
    std::ofstream it_out(fs::path(out_dir) / "profile_iterations.tsv");
    write_profile_tsv(it_out, performance_profile(rows, ProfileMetric::iterations));
    std::ofstream t_out(fs::path(out_dir) / "profile_time.tsv");
    write_profile_tsv(t_out, performance_profile(rows, ProfileMetric::time));
  }
  {
    std::ofstream out(fs::path(out_dir) / "summary.md");
    write_summary_md(out, rows, methods, problems);
  }
}

}  // namespace arclp
