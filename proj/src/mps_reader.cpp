#include "arclp/mps_reader.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "arclp/errors.hpp"

namespace arclp {

Index RawLPModel::objective_row() const {
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].relation == RowRelation::objective)
      return static_cast<Index>(i);
  return -1;
}

Index RawLPModel::constraint_count() const {
  Index n = 0;
  for (const RowDecl& r : rows)
    if (r.relation != RowRelation::objective) ++n;
  return n;
}

std::vector<std::string> RawLPModel::column_names() const {
  std::vector<std::string> names;
  std::unordered_set<std::string> seen;
  for (const ColumnEntry& e : column_entries)
    if (seen.insert(e.column).second) names.push_back(e.column);
  return names;
}

namespace {

enum class Section {
  none,
  name,
  objsense,
  rows,
  columns,
  rhs,
  ranges,
  bounds,
  endata
};

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_number(const std::string& tok, int line_no) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    throw ParseError("expected a number, got '" + tok + "'", line_no);
  return v;
}

bool is_marker_line(const std::vector<std::string>& toks) {
  for (const std::string& t : toks)
    if (t == "'MARKER'") return true;
  return false;
}

}  // namespace

RawLPModel parse_mps(std::istream& in) {
  RawLPModel model;
  std::unordered_map<std::string, RowRelation> row_relation;
  std::unordered_set<std::string> row_names;
  bool have_objective = false;
  bool saw_endata = false;
  Section section = Section::none;

  static const std::set<std::string> kUnsupported = {
      "SOS", "QUADOBJ", "QMATRIX", "QSECTION", "CSECTION", "QCMATRIX"};

  auto require_row = [&](const std::string& name, int line_no) {
    auto it = row_relation.find(name);
    if (it == row_relation.end())
      throw ModelError("reference to undeclared row '" + name + "' at line " +
                       std::to_string(line_no));
    return it->second;
  };

  std::string line;
  int line_no = 0;
  bool pending_objsense_value = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '*' || line[0] == '$') continue;  // comment

    const bool is_header = !std::isspace(static_cast<unsigned char>(line[0]));
    std::vector<std::string> toks = tokenize(line);
    if (toks.empty()) continue;

    if (is_header) {
      const std::string& head = toks[0];
      pending_objsense_value = false;
      if (head == "NAME") {
        section = Section::name;
        if (toks.size() > 1) model.name = toks[1];
      } else if (head == "OBJSENSE") {
        section = Section::objsense;
        if (toks.size() > 1) {
          model.maximize = (toks[1] == "MAX" || toks[1] == "MAXIMIZE");
        } else {
          pending_objsense_value = true;
        }
      } else if (head == "ROWS") {
        section = Section::rows;
      } else if (head == "COLUMNS") {
        section = Section::columns;
      } else if (head == "RHS") {
        section = Section::rhs;
      } else if (head == "RANGES") {
        section = Section::ranges;
      } else if (head == "BOUNDS") {
        section = Section::bounds;
      } else if (head == "ENDATA") {
        section = Section::endata;
        saw_endata = true;
        break;
      } else if (kUnsupported.count(head)) {
        throw ParseError("unsupported section '" + head + "'", line_no);
      } else {
        throw ParseError("malformed section header '" + head + "'", line_no);
      }
      continue;
    }

    switch (section) {
      case Section::name:
        break;
      case Section::objsense: {
        if (pending_objsense_value) {
          model.maximize = (toks[0] == "MAX" || toks[0] == "MAXIMIZE");
          pending_objsense_value = false;
        }
        break;
      }
      case Section::rows: {
        if (toks.size() != 2)
          throw ParseError("ROWS line needs a type and a name", line_no);
        RowRelation rel;
        if (toks[0] == "N") {
          rel = RowRelation::objective;
        } else if (toks[0] == "L") {
          rel = RowRelation::less_equal;
        } else if (toks[0] == "G") {
          rel = RowRelation::greater_equal;
        } else if (toks[0] == "E") {
          rel = RowRelation::equal;
        } else {
          throw ParseError("unknown row type '" + toks[0] + "'", line_no);
        }
        if (rel == RowRelation::objective) {
          if (have_objective)
            throw ModelError("duplicate objective row '" + toks[1] +
                             "' at line " + std::to_string(line_no));
          have_objective = true;
        }
        if (!row_names.insert(toks[1]).second)
          throw ModelError("duplicate row name '" + toks[1] + "' at line " +
                           std::to_string(line_no));
        model.rows.push_back({toks[1], rel});
        row_relation.emplace(toks[1], rel);
        break;
      }
      case Section::columns: {
        if (is_marker_line(toks))
          throw ParseError("integer markers are not supported", line_no);
        if (toks.size() != 3 && toks.size() != 5)
          throw ParseError("COLUMNS line needs name/row/value pairs", line_no);
        for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
          require_row(toks[i], line_no);
          model.column_entries.push_back(
              {toks[0], toks[i], parse_number(toks[i + 1], line_no)});
        }
        break;
      }
      case Section::rhs:
      case Section::ranges: {
        // An odd token count means the first token is the set name.
        std::size_t start = (toks.size() % 2 == 1) ? 1 : 0;
        if (toks.size() - start < 2 || (toks.size() - start) % 2 != 0)
          throw ParseError("expected row/value pairs", line_no);
        for (std::size_t i = start; i + 1 < toks.size(); i += 2) {
          require_row(toks[i], line_no);
          const double v = parse_number(toks[i + 1], line_no);
          if (section == Section::rhs) {
            model.rhs_entries.push_back({toks[i], v});
          } else {
            if (row_relation.at(toks[i]) == RowRelation::objective)
              throw ModelError("RANGES entry on the objective row at line " +
                               std::to_string(line_no));
            model.range_entries.push_back({toks[i], v});
          }
        }
        break;
      }
      case Section::bounds: {
        const std::string& type = toks[0];
        BoundKind kind;
        bool needs_value = false;
        if (type == "LO" || type == "LI") {
          kind = BoundKind::lower;
          needs_value = true;
        } else if (type == "UP" || type == "UI") {
          kind = BoundKind::upper;
          needs_value = true;
        } else if (type == "FX") {
          kind = BoundKind::fixed;
          needs_value = true;
        } else if (type == "FR") {
          kind = BoundKind::free;
        } else if (type == "MI") {
          kind = BoundKind::minus_infinity;
        } else if (type == "PL") {
          kind = BoundKind::plus_infinity;
        } else if (type == "BV") {
          throw ParseError("binary bounds are not supported", line_no);
        } else {
          throw ParseError("unknown bound type '" + type + "'", line_no);
        }
        const std::size_t expect_with_name = needs_value ? 4u : 3u;
        std::size_t col_idx;
        if (toks.size() == expect_with_name) {
          col_idx = 2;  // toks[1] is the bound set name
        } else if (toks.size() == expect_with_name - 1) {
          col_idx = 1;
        } else {
          throw ParseError("malformed BOUNDS line", line_no);
        }
        BoundEntry entry;
        entry.column = toks[col_idx];
        entry.kind = kind;
        if (needs_value) entry.value = parse_number(toks[col_idx + 1], line_no);
        model.bound_entries.push_back(entry);
        break;
      }
      case Section::none:
        throw ParseError("data before any section header", line_no);
      case Section::endata:
        break;
    }
  }

  if (!saw_endata && model.rows.empty())
    throw ParseError("not an MPS file (no sections found)", line_no);
  if (!have_objective) throw ModelError("no objective row declared");

  // Bound entries must reference known columns.
  std::unordered_set<std::string> columns;
  for (const ColumnEntry& e : model.column_entries) columns.insert(e.column);
  for (const BoundEntry& e : model.bound_entries)
    if (!columns.count(e.column))
      throw ModelError("bound on undeclared column '" + e.column + "'");

  return model;
}

RawLPModel parse_mps(const std::string& text) {
  std::istringstream is(text);
  return parse_mps(is);
}

RawLPModel parse_mps_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open '" + path + "'");
  return parse_mps(in);
}

}  // namespace arclp
