#include "arclp/iteration_log.hpp"

#include <fstream>
#include <ostream>

#include <json.hpp>

#include "arclp/errors.hpp"

namespace arclp {

namespace {

nlohmann::json to_json(const IterationRecord& r) {
  return nlohmann::json{{"k", r.k},
                        {"mu", r.mu},
                        {"rb_norm", r.rb_norm},
                        {"rc_norm", r.rc_norm},
                        {"alpha", r.alpha},
                        {"nu", r.nu},
                        {"cg1_iters", r.cg1_iters},
                        {"cg1_res", r.cg1_res},
                        {"cg2_iters", r.cg2_iters},
                        {"cg2_res", r.cg2_res},
                        {"skipped", r.skipped},
                        {"zeroed", r.zeroed},
                        {"ms", r.ms}};
}

}  // namespace

void write_log_jsonl(std::ostream& out,
                     const std::vector<IterationRecord>& log) {
  for (const IterationRecord& r : log) out << to_json(r).dump() << '\n';
}

void write_log_csv(std::ostream& out, const std::vector<IterationRecord>& log) {
  out << "k,mu,rb_norm,rc_norm,alpha,nu,cg1_iters,cg1_res,cg2_iters,cg2_res,"
         "skipped,zeroed,ms\n";
  char buf[512];
  for (const IterationRecord& r : log) {
    std::snprintf(buf, sizeof(buf),
                  "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%d,%.17g,%d,%d,"
                  "%.3f\n",
                  r.k, r.mu, r.rb_norm, r.rc_norm, r.alpha, r.nu, r.cg1_iters,
                  r.cg1_res, r.cg2_iters, r.cg2_res, r.skipped ? 1 : 0,
                  r.zeroed ? 1 : 0, r.ms);
    out << buf;
  }
}

void write_log_file(const std::string& path,
                    const std::vector<IterationRecord>& log) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write '" + path + "'");
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    write_log_csv(out, log);
  else
    write_log_jsonl(out, log);
}

std::vector<IterationRecord> read_log_jsonl(std::istream& in) {
  std::vector<IterationRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    IterationRecord r;
    r.k = j.at("k").get<int>();
    r.mu = j.at("mu").get<double>();
    r.rb_norm = j.at("rb_norm").get<double>();
    r.rc_norm = j.at("rc_norm").get<double>();
    r.alpha = j.at("alpha").get<double>();
    r.nu = j.at("nu").get<double>();
    r.cg1_iters = j.at("cg1_iters").get<int>();
    r.cg1_res = j.at("cg1_res").get<double>();
    r.cg2_iters = j.at("cg2_iters").get<int>();
    r.cg2_res = j.at("cg2_res").get<double>();
    r.skipped = j.at("skipped").get<bool>();
    r.zeroed = j.at("zeroed").get<bool>();
    r.ms = j.at("ms").get<double>();
    out.push_back(r);
  }
  return out;
}

}  // namespace arclp
