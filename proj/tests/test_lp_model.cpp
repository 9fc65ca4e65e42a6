#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <random>
#include <sstream>

#include "arclp/arc_step.hpp"
#include "arclp/errors.hpp"
#include "arclp/iterate.hpp"
#include "arclp/mps_reader.hpp"
#include "arclp/standard_form.hpp"
#include "arclp/triple_format.hpp"
#include "arclp/vector_ops.hpp"
#include "support/oracles.hpp"
#include "support/test_instances.hpp"

using namespace arclp;
namespace at = arclp::testing;

namespace {

const char* kMinimalMps = R"(NAME          TINY
ROWS
 N  COST
 E  R1
COLUMNS
    X1        COST      1.0        R1        1.0
    X2        COST      2.0        R1        1.0
RHS
    RHS       R1        1.0
ENDATA
)";

}  // namespace

TEST_CASE("parse minimal MPS") {
  const RawLPModel model = parse_mps(std::string(kMinimalMps));
  CHECK(model.name == "TINY");
  CHECK(model.constraint_count() == 1);
  CHECK(model.column_names().size() == 2);
  CHECK_FALSE(model.maximize);
  CHECK(model.rows[0].relation == RowRelation::objective);
}

TEST_CASE("parse errors carry context") {
  CHECK_THROWS_AS(parse_mps(std::string("GARBAGE_SECTION\n X Y\n")),
                  ParseError);
  // Undeclared row reference.
  CHECK_THROWS_AS(parse_mps(std::string(R"(NAME T
ROWS
 N obj
COLUMNS
    X1 obj 1.0 NOPE 2.0
ENDATA
)")),
                  ModelError);
  // Duplicate objective row.
  CHECK_THROWS_AS(parse_mps(std::string(R"(NAME T
ROWS
 N obj
 N obj2
ENDATA
)")),
                  ModelError);
  try {
    parse_mps(std::string("NAME T\nROWS\n Z r1\nENDATA\n"));
    CHECK(false);
  } catch (const ParseError& err) {
    CHECK(err.line() == 3);
  }
}

TEST_CASE("unsupported sections are rejected") {
  CHECK_THROWS_AS(parse_mps(std::string(R"(NAME T
ROWS
 N obj
SOS
 S1 set1
ENDATA
)")),
                  ParseError);
}

TEST_CASE("to_standard_form: slack insertion for max problem") {
  // max x1 s.t. x1 <= 1, x1 >= 0  ->  min -x1 s.t. x1 + slack = 1.
  const char* text = R"(NAME T
OBJSENSE
    MAX
ROWS
 N  obj
 L  r1
COLUMNS
    x1 obj 1.0 r1 1.0
RHS
    rhs r1 1.0
ENDATA
)";
  const StandardFormLP lp = to_standard_form(parse_mps(std::string(text)));
  CHECK(lp.m() == 1);
  CHECK(lp.n() == 2);
  CHECK(lp.c[0] == -1.0);  // minimize -x1
  CHECK(lp.c[1] == 0.0);
  CHECK(lp.b[0] == 1.0);
  const Eigen::MatrixXd a = at::to_dense(lp.a);
  CHECK(a(0, 0) == 1.0);
  CHECK(a(0, 1) == 1.0);
  CHECK(lp.provenance.maximize);
  // x_std = (1, 0) is optimal with std objective -1 -> original +1.
  CHECK(lp.provenance.original_objective(-1.0) == doctest::Approx(1.0));
}

TEST_CASE("to_standard_form: free variable split") {
  const char* text = R"(NAME T
ROWS
 N obj
 E r1
COLUMNS
    v obj 3.0 r1 1.0
    w obj 1.0 r1 1.0
RHS
    rhs r1 2.0
BOUNDS
 FR bnd v
ENDATA
)";
  const StandardFormLP lp = to_standard_form(parse_mps(std::string(text)));
  const VarRecovery& rec = lp.provenance.vars[0];
  CHECK(rec.kind == VarRecovery::Kind::split);
  CHECK(lp.c[rec.col] == 3.0);
  CHECK(lp.c[rec.col_neg] == -3.0);
  const Eigen::MatrixXd a = at::to_dense(lp.a);
  CHECK(a(0, rec.col) == 1.0);
  CHECK(a(0, rec.col_neg) == -1.0);

  // Recovery reproduces v = v+ - v-.
  std::vector<double> x(lp.n(), 0.0);
  x[rec.col] = 5.0;
  x[rec.col_neg] = 1.5;
  const std::vector<double> orig = lp.provenance.recover(x);
  CHECK(orig[0] == doctest::Approx(3.5));
}

TEST_CASE("ranges on a <= row match a hand conversion") {
  const char* text = R"(NAME T
ROWS
 N obj
 L r1
COLUMNS
    x1 obj 1.0 r1 2.0
    x2 obj -1.0 r1 1.0
    x3 obj 0.5 r1 -1.0
RHS
    rhs r1 5.0
RANGES
    rng r1 3.0
ENDATA
)";
  // Hand conversion: 2 <= 2x1 + x2 - x3 <= 5 becomes
  //   2x1 + x2 - x3 + t = 5 with t in [0, 3], i.e. bound row t + t2 = 3.
  const StandardFormLP lp = to_standard_form(parse_mps(std::string(text)));
  REQUIRE(lp.m() == 2);
  REQUIRE(lp.n() == 5);
  const Eigen::MatrixXd a = at::to_dense(lp.a);
  CHECK(a(0, 0) == 2.0);
  CHECK(a(0, 1) == 1.0);
  CHECK(a(0, 2) == -1.0);
  CHECK(a(0, 3) == 1.0);  // slack t
  CHECK(a(0, 4) == 0.0);
  CHECK(a(1, 3) == 1.0);  // bound row: t + t2 = 3
  CHECK(a(1, 4) == 1.0);
  CHECK(lp.b[0] == 5.0);
  CHECK(lp.b[1] == 3.0);
  CHECK(lp.c[0] == 1.0);
  CHECK(lp.c[1] == -1.0);
  CHECK(lp.c[2] == 0.5);
  CHECK(lp.c[3] == 0.0);
  CHECK(lp.c[4] == 0.0);
}

TEST_CASE("infeasible bound pair") {
  const char* text = R"(NAME T
ROWS
 N obj
 E r1
COLUMNS
    x1 obj 1.0 r1 1.0
RHS
    rhs r1 1.0
BOUNDS
 LO bnd x1 2.0
 UP bnd x1 1.0
ENDATA
)";
  CHECK_THROWS_AS(to_standard_form(parse_mps(std::string(text))), ModelError);
}

TEST_CASE("random inequality LP keeps its optimum through conversion") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.5, 1.5);
  const Index m = 5, n = 8;

  Eigen::MatrixXd a(m, n);
  std::vector<double> b(m), c(n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = coeff(rng);
    b[i] = pos(rng);  // x = 0 feasible
  }
  for (Index j = 0; j < n; ++j) c[j] = coeff(rng);

  // The extra row sum(x) <= 10 bounds the feasible set.
  std::ostringstream mps;
  mps.precision(17);
  mps << "NAME R\nROWS\n N obj\n";
  for (Index i = 0; i < m; ++i) mps << " L r" << i << "\n";
  mps << " L cap\nCOLUMNS\n";
  for (Index j = 0; j < n; ++j) {
    mps << "    x" << j << " obj " << c[j] << "\n";
    for (Index i = 0; i < m; ++i)
      mps << "    x" << j << " r" << i << " " << a(i, j) << "\n";
    mps << "    x" << j << " cap 1.0\n";
  }
  mps << "RHS\n";
  for (Index i = 0; i < m; ++i) mps << "    rhs r" << i << " " << b[i] << "\n";
  mps << "    rhs cap 10.0\nENDATA\n";

  const StandardFormLP lp = to_standard_form(parse_mps(mps.str()));
  const auto opt_std = at::vertex_enumeration_optimum(lp);
  REQUIRE(opt_std.has_value());

  // Oracle on an independently assembled standard form [A I | b].
  StandardFormLP manual;
  std::vector<Triplet> trips;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j)
      if (a(i, j) != 0.0) trips.push_back({i, j, a(i, j)});
  for (Index j = 0; j < n; ++j) trips.push_back({m, j, 1.0});
  for (Index i = 0; i < m + 1; ++i) trips.push_back({i, n + i, 1.0});
  manual.a = SparseMatrix::from_triplets(m + 1, n + m + 1, trips);
  manual.b = b;
  manual.b.push_back(10.0);
  manual.c = c;
  manual.c.resize(n + m + 1, 0.0);
  const auto opt_manual = at::vertex_enumeration_optimum(manual);
  REQUIRE(opt_manual.has_value());
  CHECK(*opt_std == doctest::Approx(*opt_manual).epsilon(1e-9));
}

TEST_CASE("preprocess removes scalar-multiple rows") {
  StandardFormLP lp;
  lp.a = SparseMatrix::from_triplets(
      2, 3, {{0, 0, 1.0}, {0, 2, 2.0}, {1, 0, 2.0}, {1, 2, 4.0}});
  lp.b = {1.0, 2.0};
  lp.c = {1.0, 1.0, 1.0};
  lp.provenance.row_origins.resize(2);
  const StandardFormLP out = preprocess(lp);
  CHECK(out.m() == 1);
  CHECK(out.b[0] == 1.0);
  CHECK(at::to_dense(out.a)(0, 0) == 1.0);

  lp.b = {1.0, 3.0};
  CHECK_THROWS_AS(preprocess(lp), InfeasibleError);
}

TEST_CASE("preprocess removes zero rows, errors on contradictions") {
  StandardFormLP lp;
  lp.a = SparseMatrix::from_triplets(2, 2, {{1, 0, 1.0}, {1, 1, 1.0}});
  lp.b = {0.0, 2.0};
  lp.c = {1.0, 1.0};
  lp.provenance.row_origins.resize(2);
  const StandardFormLP out = preprocess(lp);
  CHECK(out.m() == 1);

  lp.b = {1.0, 2.0};  // zero row with nonzero rhs
  CHECK_THROWS_AS(preprocess(lp), InfeasibleError);
}

TEST_CASE("preprocess repairs rank with injected dependent rows") {
  std::mt19937 rng(11);
  const Index m0 = 7, n = 15;
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  Eigen::MatrixXd base(m0, n);
  for (Index i = 0; i < m0; ++i)
    for (Index j = 0; j < n; ++j)
      base(i, j) = coeff(rng) + (i == j ? 2.0 : 0.0);

  Eigen::MatrixXd full(m0 + 3, n);
  full.topRows(m0) = base;
  full.row(m0) = base.row(0) + base.row(1);
  full.row(m0 + 1) = 2.0 * base.row(2) - base.row(3);
  full.row(m0 + 2) = 0.5 * base.row(4) + 0.25 * base.row(6);

  const std::vector<double> xfeas = at::random_positive(rng, n, 0.5, 2.0);
  std::vector<Triplet> trips;
  for (Index i = 0; i < m0 + 3; ++i)
    for (Index j = 0; j < n; ++j)
      if (full(i, j) != 0.0) trips.push_back({i, j, full(i, j)});
  StandardFormLP lp;
  lp.a = SparseMatrix::from_triplets(m0 + 3, n, trips);
  lp.b = lp.a.multiply(xfeas);  // consistent by construction
  lp.c.assign(n, 1.0);
  lp.provenance.row_origins.resize(m0 + 3);

  const StandardFormLP out = preprocess(lp);
  CHECK(out.m() == 7);

  // Feasible-set preservation around the known feasible point.
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x = xfeas;
    const bool keep_feasible = t % 2 == 0;
    if (!keep_feasible)
      for (Index j = 0; j < n; ++j) x[j] += gauss(rng);

    std::vector<double> r_orig = lp.a.multiply(x);
    for (Index i = 0; i < lp.m(); ++i) r_orig[i] -= lp.b[i];
    std::vector<double> r_pre = out.a.multiply(x);
    for (Index i = 0; i < out.m(); ++i) r_pre[i] -= out.b[i];
    const bool feas_orig = norm2(r_orig) <= 1e-10 * (1.0 + norm2(lp.b));
    const bool feas_pre = norm2(r_pre) <= 1e-10 * (1.0 + norm2(out.b));
    CHECK(feas_orig == feas_pre);
  }
}

TEST_CASE("preprocess detects inconsistent dependent rows") {
  StandardFormLP lp;
  // Row 2 = row 0 + row 1 but with an inconsistent rhs.
  lp.a = SparseMatrix::from_triplets(3, 3,
                                     {{0, 0, 1.0},
                                      {0, 1, 1.0},
                                      {1, 1, 1.0},
                                      {1, 2, 1.0},
                                      {2, 0, 1.0},
                                      {2, 1, 2.0},
                                      {2, 2, 1.0}});
  lp.b = {1.0, 1.0, 5.0};
  lp.c = {1.0, 1.0, 1.0};
  lp.provenance.row_origins.resize(3);
  CHECK_THROWS_AS(preprocess(lp), InfeasibleError);
}

TEST_CASE("preprocess rejects empty problems") {
  StandardFormLP lp;
  lp.a = SparseMatrix::from_triplets(1, 1, {});
  lp.b = {0.0};
  lp.c = {1.0};
  lp.provenance.row_origins.resize(1);
  CHECK_THROWS_AS(preprocess(lp), DegenerateProblemError);
}

TEST_CASE("residuals") {
  std::mt19937 rng(8);
  const StandardFormLP lp = at::random_standard_lp(rng, 4, 6);

  SUBCASE("zero point gives (-b, -c)") {
    auto [rb, rc] = residuals(lp, std::vector<double>(6, 0.0),
                              std::vector<double>(4, 0.0),
                              std::vector<double>(6, 0.0));
    for (Index i = 0; i < 4; ++i) CHECK(rb[i] == -lp.b[i]);
    for (Index j = 0; j < 6; ++j) CHECK(rc[j] == -lp.c[j]);
  }

  SUBCASE("matches dense recomputation") {
    const std::vector<double> x = at::random_vector(rng, 6, -2.0, 2.0);
    const std::vector<double> y = at::random_vector(rng, 4, -2.0, 2.0);
    const std::vector<double> s = at::random_vector(rng, 6, -2.0, 2.0);
    auto [rb, rc] = residuals(lp, x, y, s);
    const Eigen::MatrixXd ad = at::to_dense(lp.a);
    Eigen::Map<const Eigen::VectorXd> xe(x.data(), 6), ye(y.data(), 4),
        se(s.data(), 6);
    const Eigen::VectorXd rbo =
        ad * xe - Eigen::Map<const Eigen::VectorXd>(lp.b.data(), 4);
    const Eigen::VectorXd rco =
        ad.transpose() * ye + se -
        Eigen::Map<const Eigen::VectorXd>(lp.c.data(), 6);
    for (Index i = 0; i < 4; ++i)
      CHECK(rb[i] == doctest::Approx(rbo[i]).epsilon(1e-14));
    for (Index j = 0; j < 6; ++j)
      CHECK(rc[j] == doctest::Approx(rco[j]).epsilon(1e-14));
  }

  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(residuals(lp, std::vector<double>(5, 1.0),
                              std::vector<double>(4, 0.0),
                              std::vector<double>(6, 1.0)),
                    std::invalid_argument);
  }
}

TEST_CASE("interior point of the generator is feasible") {
  // b = A xbar and c = A^T ybar + sbar by construction; any (x, y, s)
  // solving those equations has zero residuals. Use least squares to
  // recover one such primal point.
  std::mt19937 rng(17);
  const StandardFormLP lp = at::random_standard_lp(rng, 4, 7);
  const Eigen::MatrixXd ad = at::to_dense(lp.a);
  Eigen::Map<const Eigen::VectorXd> be(lp.b.data(), 4);
  const Eigen::VectorXd x = ad.fullPivLu().solve(
      Eigen::VectorXd(be));  // wide system: any solution works
  Eigen::VectorXd rb = ad * x - be;
  CHECK(rb.norm() <= 1e-10 * (1.0 + be.norm()));
}

TEST_CASE("duality measure") {
  CHECK(duality_measure({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}) == 1.0);
  CHECK(duality_measure({2.0, 0.5}, {0.5, 2.0}) == 1.0);
  // The experiment initial point: mu0 = 1e8.
  const std::vector<double> e4(13, 1e4);
  CHECK(duality_measure(e4, e4) == 1e8);

  // mu is exactly x^T s / n with left-to-right accumulation.
  std::mt19937 rng(3);
  const std::vector<double> x = at::random_positive(rng, 9, 0.1, 3.0);
  const std::vector<double> s = at::random_positive(rng, 9, 0.1, 3.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * s[i];
  CHECK(duality_measure(x, s) == acc / 9.0);

  CHECK_THROWS_AS(duality_measure({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("initial point") {
  std::mt19937 rng(5);
  const StandardFormLP lp = at::random_standard_lp(rng, 1, 2);
  const Iterate it = initial_point(lp, 1e4);
  CHECK(it.x == std::vector<double>{1e4, 1e4});
  CHECK(it.y == std::vector<double>{0.0});
  CHECK(it.s == std::vector<double>{1e4, 1e4});
  CHECK(it.mu == 1e8);

  const Iterate unit = initial_point(lp, 1.0);
  CHECK(unit.mu == 1.0);

  const double ratio = stacked_norm2(it.rb, it.rc) / it.mu;
  CHECK(neighborhood_membership(it, 0.1, 1.0, ratio));

  CHECK_THROWS_AS(initial_point(lp, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(initial_point(lp, -2.0), std::invalid_argument);
}

TEST_CASE("iterate caches match recomputation") {
  std::mt19937 rng(12);
  const StandardFormLP lp = at::random_standard_lp(rng, 3, 5);
  const std::vector<double> x = at::random_positive(rng, 5, 0.2, 4.0);
  const std::vector<double> y = at::random_vector(rng, 3, -2.0, 2.0);
  const std::vector<double> s = at::random_positive(rng, 5, 0.2, 4.0);
  const Iterate it = Iterate::make(lp, x, y, s);
  auto [rb, rc] = residuals(lp, x, y, s);
  for (Index i = 0; i < 3; ++i)
    CHECK(it.rb[i] == doctest::Approx(rb[i]).epsilon(1e-12));
  for (Index j = 0; j < 5; ++j)
    CHECK(it.rc[j] == doctest::Approx(rc[j]).epsilon(1e-12));
  CHECK(it.mu == duality_measure(x, s));

  std::vector<double> bad = x;
  bad[2] = 0.0;
  CHECK_THROWS_AS(Iterate::make(lp, bad, y, s), std::invalid_argument);
}

TEST_CASE("original-residual consistency through to_standard_form") {
  const char* text = R"(NAME T
ROWS
 N obj
 L r1
 G r2
 E r3
COLUMNS
    u obj 1.0 r1 2.0
    u r2 1.0 r3 1.0
    v obj -2.0 r1 1.0
    v r2 -1.0
    w obj 0.5 r3 1.0
RHS
    rhs r1 4.0 r2 -1.0
    rhs r3 2.0
BOUNDS
 LO bnd u 0.5
 FR bnd v
 UP bnd w 3.0
ENDATA
)";
  const RawLPModel raw = parse_mps(std::string(text));
  const StandardFormLP lp = to_standard_form(raw);

  std::mt19937 rng(21);
  const std::vector<double> x = at::random_positive(rng, lp.n(), 0.1, 2.0);
  const std::vector<double> orig = lp.provenance.recover(x);
  auto [rb, rc] = residuals(lp, x, std::vector<double>(lp.m(), 0.0),
                            std::vector<double>(lp.n(), 1.0));

  // Original row activities, constraints in declaration order.
  std::vector<std::string> names;
  std::vector<double> activity;
  for (const RowDecl& r : raw.rows) {
    if (r.relation == RowRelation::objective) continue;
    names.push_back(r.name);
    activity.push_back(0.0);
  }
  const std::vector<std::string> var_names = raw.column_names();
  for (const ColumnEntry& e : raw.column_entries) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] != e.row) continue;
      const Index var =
          std::find(var_names.begin(), var_names.end(), e.column) -
          var_names.begin();
      activity[i] += e.value * orig[var];
    }
  }

  for (Index row = 0; row < lp.m(); ++row) {
    const RowOrigin& origin = lp.provenance.row_origins[row];
    if (origin.kind != RowOrigin::Kind::constraint) continue;
    double lhs = activity[origin.original_row];
    if (origin.slack_col >= 0) lhs += origin.slack_sign * x[origin.slack_col];
    const double expected = lhs - origin.effective_rhs;
    CHECK(std::abs(expected - rb[row]) <=
          1e-10 * (1.0 + std::abs(expected)));
  }
}

TEST_CASE("triple format round trip") {
  std::mt19937 rng(9);
  const StandardFormLP lp = at::random_standard_lp(rng, 3, 6);
  std::ostringstream out;
  write_triple_format(out, lp);
  std::istringstream in(out.str());
  const StandardFormLP back = read_triple_format(in);
  CHECK(back.m() == lp.m());
  CHECK(back.n() == lp.n());
  CHECK(back.a.non_zeros() == lp.a.non_zeros());
  for (Index i = 0; i < lp.m(); ++i)
    CHECK(back.b[i] == doctest::Approx(lp.b[i]).epsilon(1e-15));
  for (Index j = 0; j < lp.n(); ++j)
    CHECK(back.c[j] == doctest::Approx(lp.c[j]).epsilon(1e-15));

  std::istringstream bad("2 2\n");
  CHECK_THROWS_AS(read_triple_format(bad), ParseError);
}

TEST_CASE("netlib cre-a dimensions"
          * doctest::skip(std::getenv("ARCLP_CREA_MPS") == nullptr)) {
  const char* path = std::getenv("ARCLP_CREA_MPS");
  REQUIRE(path != nullptr);
  const RawLPModel raw = parse_mps_file(path);
  const StandardFormLP lp = preprocess(to_standard_form(raw));
  CHECK(lp.n() == 6997);
  CHECK(lp.m() == 3299);
}
