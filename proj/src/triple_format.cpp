#include "arclp/triple_format.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "arclp/errors.hpp"

namespace arclp {

StandardFormLP read_triple_format(std::istream& in) {
  Index m = 0, n = 0, nnz = 0;
  if (!(in >> m >> n >> nnz))
    throw ParseError("triple format: bad header", 1);
  if (m <= 0 || n <= 0 || nnz < 0)
    throw ParseError("triple format: nonpositive dimensions", 1);

  std::vector<Triplet> trips;
  trips.reserve(nnz);
  for (Index k = 0; k < nnz; ++k) {
    Triplet t;
    if (!(in >> t.row >> t.col >> t.value))
      throw ParseError("triple format: truncated COO entries",
                       static_cast<int>(k + 2));
    trips.push_back(t);
  }
  StandardFormLP lp;
  lp.a = SparseMatrix::from_triplets(m, n, trips);
  lp.b.resize(m);
  for (Index i = 0; i < m; ++i)
    if (!(in >> lp.b[i])) throw ParseError("triple format: truncated b", 0);
  lp.c.resize(n);
  for (Index j = 0; j < n; ++j)
    if (!(in >> lp.c[j])) throw ParseError("triple format: truncated c", 0);

  // Standard-form input maps to itself.
  lp.provenance.maximize = false;
  lp.provenance.objective_constant = 0.0;
  lp.provenance.vars.resize(n);
  lp.provenance.var_names.resize(n);
  for (Index j = 0; j < n; ++j) {
    lp.provenance.vars[j].kind = VarRecovery::Kind::direct;
    lp.provenance.vars[j].col = j;
    lp.provenance.var_names[j] = "x" + std::to_string(j);
  }
  lp.provenance.row_origins.resize(m);
  for (Index i = 0; i < m; ++i) {
    lp.provenance.row_origins[i].kind = RowOrigin::Kind::constraint;
    lp.provenance.row_origins[i].original_row = i;
    lp.provenance.row_origins[i].effective_rhs = lp.b[i];
  }
  return lp;
}

StandardFormLP read_triple_format_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open '" + path + "'");
  return read_triple_format(in);
}

void write_triple_format(std::ostream& out, const StandardFormLP& lp) {
  out.precision(17);
  out << lp.m() << ' ' << lp.n() << ' ' << lp.a.non_zeros() << '\n';
  const auto& offs = lp.a.row_offsets();
  const auto& cols = lp.a.col_indices();
  const auto& vals = lp.a.values();
  for (Index r = 0; r < lp.m(); ++r)
    for (Index k = offs[r]; k < offs[r + 1]; ++k)
      out << r << ' ' << cols[k] << ' ' << vals[k] << '\n';
  for (double v : lp.b) out << v << '\n';
  for (double v : lp.c) out << v << '\n';
}

}  // namespace arclp
