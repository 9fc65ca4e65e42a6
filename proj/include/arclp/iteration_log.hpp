#ifndef ARCLP_ITERATION_LOG_HPP
#define ARCLP_ITERATION_LOG_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "arclp/solver.hpp"

namespace arclp {

// One record per line:
// k, mu, rb_norm, rc_norm, alpha, nu, cg1_iters, cg1_res, cg2_iters,
// cg2_res, skipped, zeroed, ms.
void write_log_jsonl(std::ostream& out,
                     const std::vector<IterationRecord>& log);
void write_log_csv(std::ostream& out, const std::vector<IterationRecord>& log);

// Dispatches on the file extension (.csv vs anything else -> JSON lines).
void write_log_file(const std::string& path,
                    const std::vector<IterationRecord>& log);

std::vector<IterationRecord> read_log_jsonl(std::istream& in);

}  // namespace arclp

#endif
