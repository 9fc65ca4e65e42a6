#ifndef ARCLP_MPS_READER_HPP
#define ARCLP_MPS_READER_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "arclp/vector_ops.hpp"

namespace arclp {

enum class RowRelation { less_equal, greater_equal, equal, objective };

enum class BoundKind { lower, upper, fixed, free, minus_infinity, plus_infinity };

struct RowDecl {
  std::string name;
  RowRelation relation = RowRelation::equal;
};

struct ColumnEntry {
  std::string column;
  std::string row;
  double value = 0.0;
};

struct RhsEntry {
  std::string row;
  double value = 0.0;
};

struct RangeEntry {
  std::string row;
  double value = 0.0;
};

struct BoundEntry {
  std::string column;
  BoundKind kind = BoundKind::lower;
  double value = 0.0;
};

// Direct transcription of an MPS file, before any conversion.
struct RawLPModel {
  std::string name;
  bool maximize = false;
  std::vector<RowDecl> rows;                  // includes the objective row
  std::vector<ColumnEntry> column_entries;
  std::vector<RhsEntry> rhs_entries;
  std::vector<RangeEntry> range_entries;
  std::vector<BoundEntry> bound_entries;

  Index objective_row() const;                // index into rows
  Index constraint_count() const;             // rows excluding the objective
  std::vector<std::string> column_names() const;  // first-appearance order
};

// Accepts fixed- and free-format MPS. Names are case-sensitive; the
// default variable bound is [0, inf). SOS/quadratic/integer-marker
// sections are rejected.
RawLPModel parse_mps(std::istream& in);
RawLPModel parse_mps(const std::string& text);
RawLPModel parse_mps_file(const std::string& path);

}  // namespace arclp

#endif
