#include "arclp/standard_form.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "arclp/errors.hpp"

namespace arclp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct VarBounds {
  double lo = 0.0;
  double up = kInf;
};

}  // namespace

std::vector<double> Provenance::recover(const std::vector<double>& x) const {
  std::vector<double> out(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const VarRecovery& v = vars[j];
    switch (v.kind) {
      case VarRecovery::Kind::direct:
        out[j] = x[v.col];
        break;
      case VarRecovery::Kind::shifted:
        out[j] = x[v.col] + v.offset;
        break;
      case VarRecovery::Kind::negated:
        out[j] = v.offset - x[v.col];
        break;
      case VarRecovery::Kind::split:
        out[j] = x[v.col] - x[v.col_neg];
        break;
      case VarRecovery::Kind::fixed:
        out[j] = v.value;
        break;
    }
  }
  return out;
}

StandardFormLP to_standard_form(const RawLPModel& model) {
  const Index obj_row = model.objective_row();
  if (obj_row < 0) throw ModelError("model has no objective row");

  // Constraint rows in declaration order, objective excluded.
  std::vector<Index> constraint_rows;
  std::unordered_map<std::string, Index> constraint_index;  // name -> position
  for (std::size_t i = 0; i < model.rows.size(); ++i) {
    if (static_cast<Index>(i) == obj_row) continue;
    constraint_index.emplace(model.rows[i].name,
                             static_cast<Index>(constraint_rows.size()));
    constraint_rows.push_back(static_cast<Index>(i));
  }
  const std::string& obj_name = model.rows[obj_row].name;

  std::unordered_map<std::string, double> rhs;
  for (const RhsEntry& e : model.rhs_entries) rhs[e.row] = e.value;
  std::unordered_map<std::string, double> range;
  for (const RangeEntry& e : model.range_entries) range[e.row] = e.value;

  // Variables in first-appearance order, with bounds.
  const std::vector<std::string> var_names = model.column_names();
  std::unordered_map<std::string, Index> var_index;
  for (std::size_t j = 0; j < var_names.size(); ++j)
    var_index.emplace(var_names[j], static_cast<Index>(j));
  const Index num_vars = static_cast<Index>(var_names.size());

  std::vector<VarBounds> bounds(num_vars);
  for (const BoundEntry& e : model.bound_entries) {
    VarBounds& vb = bounds[var_index.at(e.column)];
    switch (e.kind) {
      case BoundKind::lower:
        vb.lo = e.value;
        break;
      case BoundKind::upper:
        vb.up = e.value;
        break;
      case BoundKind::fixed:
        vb.lo = vb.up = e.value;
        break;
      case BoundKind::free:
        vb.lo = -kInf;
        vb.up = kInf;
        break;
      case BoundKind::minus_infinity:
        vb.lo = -kInf;
        break;
      case BoundKind::plus_infinity:
        vb.up = kInf;
        break;
    }
  }
  for (Index j = 0; j < num_vars; ++j)
    if (bounds[j].lo > bounds[j].up)
      throw ModelError("infeasible bound pair on variable '" +
                       var_names[j] + "'");

  // Objective coefficients and per-constraint coefficient lists.
  std::vector<double> c_orig(num_vars, 0.0);
  std::vector<std::vector<std::pair<Index, double>>> row_coeffs(
      constraint_rows.size());
  for (const ColumnEntry& e : model.column_entries) {
    const Index j = var_index.at(e.column);
    if (e.row == obj_name) {
      c_orig[j] += e.value;
    } else {
      row_coeffs[constraint_index.at(e.row)].push_back({j, e.value});
    }
  }

  // Variable transforms. Shifted/negated/fixed variables contribute the
  // constant part const_j to every row they appear in.
  Provenance prov;
  prov.var_names = var_names;
  prov.maximize = model.maximize;
  prov.vars.resize(num_vars);
  std::vector<double> var_const(num_vars, 0.0);
  std::vector<double> var_coeff_sign(num_vars, 1.0);
  std::vector<double> col_upper;  // finite upper bound of each std column
  Index next_col = 0;

  std::vector<double> c1;  // objective on standard columns (original sense)
  auto push_col = [&](double obj_coeff, double upper) {
    c1.push_back(obj_coeff);
    col_upper.push_back(upper);
    return next_col++;
  };

  double obj_constant = 0.0;
  {
    auto it = rhs.find(obj_name);
    if (it != rhs.end()) obj_constant = -it->second;
  }

  for (Index j = 0; j < num_vars; ++j) {
    VarRecovery& rec = prov.vars[j];
    const VarBounds& vb = bounds[j];
    if (vb.lo == vb.up) {
      rec.kind = VarRecovery::Kind::fixed;
      rec.value = vb.lo;
      var_const[j] = vb.lo;
      var_coeff_sign[j] = 0.0;
      obj_constant += c_orig[j] * vb.lo;
    } else if (vb.lo == -kInf && vb.up == kInf) {
      rec.kind = VarRecovery::Kind::split;
      rec.col = push_col(c_orig[j], kInf);
      rec.col_neg = push_col(-c_orig[j], kInf);
    } else if (vb.lo == -kInf) {
      // Only an upper bound: substitute x = up - x'.
      rec.kind = VarRecovery::Kind::negated;
      rec.offset = vb.up;
      rec.col = push_col(-c_orig[j], kInf);
      var_const[j] = vb.up;
      var_coeff_sign[j] = -1.0;
      obj_constant += c_orig[j] * vb.up;
    } else if (vb.lo == 0.0) {
      rec.kind = VarRecovery::Kind::direct;
      rec.col = push_col(c_orig[j], vb.up == kInf ? kInf : vb.up);
    } else {
      rec.kind = VarRecovery::Kind::shifted;
      rec.offset = vb.lo;
      rec.col = push_col(c_orig[j], vb.up == kInf ? kInf : vb.up - vb.lo);
      var_const[j] = vb.lo;
      obj_constant += c_orig[j] * vb.lo;
    }
  }
  prov.objective_constant = obj_constant;

  // Constraint rows: every row with lo < up gets one slack column.
  std::vector<Triplet> triplets;
  std::vector<double> b_std;
  std::vector<RowOrigin> origins;
  Index next_row = 0;

  for (std::size_t ci = 0; ci < constraint_rows.size(); ++ci) {
    const RowDecl& decl = model.rows[constraint_rows[ci]];
    double r = 0.0;
    {
      auto it = rhs.find(decl.name);
      if (it != rhs.end()) r = it->second;
    }
    double lo = -kInf, up = kInf;
    switch (decl.relation) {
      case RowRelation::less_equal:
        up = r;
        lo = -kInf;
        break;
      case RowRelation::greater_equal:
        lo = r;
        up = kInf;
        break;
      case RowRelation::equal:
        lo = up = r;
        break;
      case RowRelation::objective:
        continue;  // unreachable
    }
    if (auto it = range.find(decl.name); it != range.end()) {
      const double rv = it->second;
      switch (decl.relation) {
        case RowRelation::less_equal:
          lo = up - std::abs(rv);
          break;
        case RowRelation::greater_equal:
          up = lo + std::abs(rv);
          break;
        case RowRelation::equal:
          lo = r + std::min(0.0, rv);
          up = r + std::max(0.0, rv);
          break;
        case RowRelation::objective:
          break;
      }
    }

    // Substituted constants move to the right-hand side.
    double absorbed = 0.0;
    const Index row = next_row++;
    for (const auto& [j, a] : row_coeffs[ci]) {
      absorbed += a * var_const[j];
      const VarRecovery& rec = prov.vars[j];
      switch (rec.kind) {
        case VarRecovery::Kind::fixed:
          break;
        case VarRecovery::Kind::split:
          triplets.push_back({row, rec.col, a});
          triplets.push_back({row, rec.col_neg, -a});
          break;
        case VarRecovery::Kind::negated:
          triplets.push_back({row, rec.col, -a});
          break;
        default:
          triplets.push_back({row, rec.col, a});
          break;
      }
    }

    RowOrigin origin;
    origin.kind = RowOrigin::Kind::constraint;
    origin.original_row = static_cast<Index>(ci);
    if (lo == up) {
      origin.effective_rhs = up;
      b_std.push_back(up - absorbed);
    } else if (up < kInf) {
      // a^T x + t = up with t in [0, up - lo].
      const Index slack = push_col(0.0, lo == -kInf ? kInf : up - lo);
      triplets.push_back({row, slack, 1.0});
      origin.slack_col = slack;
      origin.slack_sign = 1.0;
      origin.effective_rhs = up;
      b_std.push_back(up - absorbed);
    } else {
      // a^T x - t = lo with t in [0, inf).
      const Index slack = push_col(0.0, kInf);
      triplets.push_back({row, slack, -1.0});
      origin.slack_col = slack;
      origin.slack_sign = -1.0;
      origin.effective_rhs = lo;
      b_std.push_back(lo - absorbed);
    }
    origins.push_back(origin);
  }

  // Upper-bounded columns: x_j + t = u.
  const Index cols_before_bound_rows = next_col;
  for (Index col = 0; col < cols_before_bound_rows; ++col) {
    if (col_upper[col] == kInf) continue;
    const Index row = next_row++;
    const Index slack = push_col(0.0, kInf);
    triplets.push_back({row, col, 1.0});
    triplets.push_back({row, slack, 1.0});
    b_std.push_back(col_upper[col]);
    RowOrigin origin;
    origin.kind = RowOrigin::Kind::variable_bound;
    origin.original_row = col;
    origin.slack_col = slack;
    origin.slack_sign = 1.0;
    origin.effective_rhs = col_upper[col];
    origins.push_back(origin);
  }

  StandardFormLP lp;
  lp.a = SparseMatrix::from_triplets(next_row, next_col, triplets);
  lp.b = std::move(b_std);
  lp.c.resize(next_col);
  const double sense = model.maximize ? -1.0 : 1.0;
  for (Index j = 0; j < next_col; ++j) lp.c[j] = sense * c1[j];
  prov.row_origins = std::move(origins);
  lp.provenance = std::move(prov);
  return lp;
}

namespace {

// Full row rank check through a sparse LDLT of A A^T. Diagonal entries of
// D behave like squared singular values, hence the squared pivot threshold.
bool rank_verified(const SparseMatrix& a, const PreprocessOptions& opts);

// Column-pivoted QR on A^T. Returns the kept row indices (ascending) after
// verifying that dropped rows are consistent with the kept ones.
std::vector<Index> rank_repair(const SparseMatrix& a,
                               const std::vector<double>& b,
                               const PreprocessOptions& opts);

struct NormalizedRow {
  std::vector<Index> cols;
  std::vector<double> vals;  // scaled so the largest-magnitude entry is +1
  double b = 0.0;            // scaled consistently
};

NormalizedRow normalize_row(const SparseMatrix& a, const std::vector<double>& b,
                            Index r) {
  NormalizedRow out;
  const auto& offs = a.row_offsets();
  const auto& cols = a.col_indices();
  const auto& vals = a.values();
  double pivot = 0.0;
  for (Index k = offs[r]; k < offs[r + 1]; ++k)
    if (std::abs(vals[k]) > std::abs(pivot)) pivot = vals[k];
  for (Index k = offs[r]; k < offs[r + 1]; ++k) {
    out.cols.push_back(cols[k]);
    out.vals.push_back(vals[k] / pivot);
  }
  out.b = b[r] / pivot;
  return out;
}

Eigen::SparseMatrix<double> to_eigen_sparse(const SparseMatrix& a) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(a.non_zeros());
  const auto& offs = a.row_offsets();
  const auto& cols = a.col_indices();
  const auto& vals = a.values();
  for (Index r = 0; r < a.rows(); ++r)
    for (Index k = offs[r]; k < offs[r + 1]; ++k)
      trips.emplace_back(static_cast<int>(r), static_cast<int>(cols[k]),
                         vals[k]);
  Eigen::SparseMatrix<double> out(a.rows(), a.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

bool rank_verified(const SparseMatrix& a, const PreprocessOptions& opts) {
  const SparseMatrix gram = normal_matrix(a, std::vector<double>(a.cols(), 1.0));
  Eigen::SparseMatrix<double> g = to_eigen_sparse(gram);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(g);
  if (ldlt.info() != Eigen::Success) return false;
  const Eigen::VectorXd d = ldlt.vectorD();
  const double dmax = d.maxCoeff();
  if (!(dmax > 0.0)) return false;
  const double threshold =
      opts.rank_pivot_tol * opts.rank_pivot_tol * dmax;
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (!(d[i] > threshold)) return false;
  return true;
}

std::vector<Index> rank_repair(const SparseMatrix& a,
                               const std::vector<double>& b,
                               const PreprocessOptions& opts) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (m > opts.max_dense_rank_dim)
    throw ModelError("rank repair needs a dense factorization; matrix has " +
                     std::to_string(m) + " rows (limit " +
                     std::to_string(opts.max_dense_rank_dim) + ")");

  Eigen::MatrixXd at = Eigen::MatrixXd::Zero(n, m);
  const auto& offs = a.row_offsets();
  const auto& cols = a.col_indices();
  const auto& vals = a.values();
  for (Index r = 0; r < m; ++r)
    for (Index k = offs[r]; k < offs[r + 1]; ++k) at(cols[k], r) = vals[k];

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(at);
  const Eigen::MatrixXd r_factor =
      qr.matrixR().topLeftCorner(std::min(n, m), m).triangularView<Eigen::Upper>();
  const double pivot_max = std::abs(r_factor(0, 0));
  Index rank = 0;
  for (Index i = 0; i < std::min(n, m); ++i) {
    if (std::abs(r_factor(i, i)) > opts.rank_pivot_tol * pivot_max)
      ++rank;
    else
      break;
  }

  const auto perm = qr.colsPermutation().indices();
  std::vector<Index> kept(perm.data(), perm.data() + rank);
  std::sort(kept.begin(), kept.end());
  std::vector<Index> removed;
  for (Index i = rank; i < m; ++i) removed.push_back(perm.data()[i]);

  if (!removed.empty()) {
    // Dropped rows must be consistent combinations of the kept ones.
    Eigen::MatrixXd kept_t(n, kept.size());
    Eigen::VectorXd kept_b(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      kept_t.col(i) = at.col(kept[i]);
      kept_b[i] = b[kept[i]];
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> lsq(kept_t);
    double bscale = 1.0;
    for (double v : b) bscale = std::max(bscale, std::abs(v));
    for (Index r : removed) {
      const Eigen::VectorXd lambda = lsq.solve(at.col(r));
      const double predicted = lambda.dot(kept_b);
      if (std::abs(predicted - b[r]) > 1e-8 * (1.0 + bscale))
        throw InfeasibleError(
            "linearly dependent row " + std::to_string(r) +
            " has an inconsistent right-hand side");
    }
  }
  return kept;
}

}  // namespace

StandardFormLP preprocess(const StandardFormLP& lp,
                          const PreprocessOptions& opts) {
  const Index m = lp.m();
  const Index n = lp.n();
  if (m == 0 || n == 0) throw DegenerateProblemError("empty problem");

  double bmax = 0.0;
  for (double v : lp.b) bmax = std::max(bmax, std::abs(v));

  // Pass 1: zero rows.
  std::vector<Index> keep;
  for (Index r = 0; r < m; ++r) {
    const bool zero_row = lp.a.row_offsets()[r] == lp.a.row_offsets()[r + 1];
    if (!zero_row) {
      keep.push_back(r);
      continue;
    }
    if (std::abs(lp.b[r]) > opts.zero_row_tol * (1.0 + bmax))
      throw InfeasibleError("zero row with nonzero right-hand side");
  }

  // Pass 2: duplicate rows (scalar multiples included), keeping the first.
  {
    std::unordered_map<std::size_t, std::vector<std::pair<Index, NormalizedRow>>>
        groups;
    std::vector<Index> unique_rows;
    for (Index r : keep) {
      NormalizedRow nr = normalize_row(lp.a, lp.b, r);
      std::size_t h = nr.cols.size();
      for (Index c : nr.cols) h = h * 1000003u + static_cast<std::size_t>(c);
      bool duplicate = false;
      for (auto& [prev_row, prev] : groups[h]) {
        if (prev.cols != nr.cols) continue;
        bool same = true;
        for (std::size_t k = 0; k < nr.vals.size(); ++k) {
          if (std::abs(prev.vals[k] - nr.vals[k]) > opts.duplicate_tol) {
            same = false;
            break;
          }
        }
        if (!same) continue;
        if (std::abs(prev.b - nr.b) >
            opts.duplicate_tol * (1.0 + std::abs(prev.b)) + opts.duplicate_tol)
          throw InfeasibleError("contradictory duplicate rows " +
                                std::to_string(prev_row) + " and " +
                                std::to_string(r));
        duplicate = true;
        break;
      }
      if (!duplicate) {
        groups[h].push_back({r, std::move(nr)});
        unique_rows.push_back(r);
      }
    }
    keep = std::move(unique_rows);
  }

  StandardFormLP out;
  out.c = lp.c;
  out.provenance = lp.provenance;

  auto finalize = [&](const std::vector<Index>& rows) {
    out.a = lp.a.select_rows(rows);
    out.b.clear();
    out.b.reserve(rows.size());
    for (Index r : rows) out.b.push_back(lp.b[r]);
    std::vector<RowOrigin> origins;
    origins.reserve(rows.size());
    for (Index r : rows) origins.push_back(lp.provenance.row_origins[r]);
    out.provenance.row_origins = std::move(origins);
  };
  finalize(keep);
  if (out.m() == 0) throw DegenerateProblemError("no rows left after removal");

  // Pass 3: rank verification, with dense repair when it fails.
  if (!rank_verified(out.a, opts)) {
    const std::vector<Index> kept_local = rank_repair(out.a, out.b, opts);
    std::vector<Index> final_rows;
    final_rows.reserve(kept_local.size());
    for (Index r : kept_local) final_rows.push_back(keep[r]);
    finalize(final_rows);
  }
  if (out.m() == 0) throw DegenerateProblemError("no rows left after removal");
  return out;
}

}  // namespace arclp
