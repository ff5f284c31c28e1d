#include <cmath>

#include "helpers.hpp"

using namespace carnot;
using namespace carnot::test;

namespace {

Rational entry(const ApproxSystem& s, const std::string& row, const std::string& col, const GroupPtr& g) {
  auto find = [&](const std::vector<MultiIndex>& list, const std::string& text) {
    MultiIndex j = poly(text, g).terms().begin()->first;
    for (std::size_t i = 0; i < list.size(); ++i)
      if (list[i] == j) return static_cast<Eigen::Index>(i);
    ADD_FAILURE() << "missing monomial " << text;
    return Eigen::Index(0);
  };
  return s.matrix(find(s.rows, row), find(s.cols, col));
}

bool all_zero(const std::map<Word, Rational>& residuals) {
  for (const auto& [w, v] : residuals)
    if (v != 0) return false;
  return true;
}

// Signed Euclidean distance from (x, y, t) to {y = h(x, t)} by projected gradient descent.
double numeric_graph_distance(const std::function<double(double, double)>& h, double x, double y, double t) {
  double u = x, v = t;
  for (int it = 0; it < 4000; ++it) {
    const double e = 1e-7;
    double hu = (h(u + e, v) - h(u - e, v)) / (2 * e), hv = (h(u, v + e) - h(u, v - e)) / (2 * e);
    double r = h(u, v) - y;
    double gu = (u - x) + r * hu, gv = (v - t) + r * hv;
    u -= 0.5 * gu;
    v -= 0.5 * gv;
  }
  double dist = std::sqrt((x - u) * (x - u) + (y - h(u, v)) * (y - h(u, v)) + (t - v) * (t - v));
  return y > h(x, t) ? dist : -dist;
}

}  // namespace

TEST(Approximator, HeisenbergSystemAtOrderThree) {
  GroupPtr h = builtin_group("heisenberg1");
  ApproxSystem s = assemble_system(sub_laplacian(h), flat_distance(h, 3), 3);
  ASSERT_EQ(s.rows.size(), 3u);
  ASSERT_EQ(s.cols.size(), 7u);
  int nonzero = 0;
  for (Eigen::Index r = 0; r < s.matrix.rows(); ++r)
    for (Eigen::Index c = 0; c < s.matrix.cols(); ++c) nonzero += s.matrix(r, c) != 0;
  EXPECT_EQ(nonzero, 5);
  EXPECT_EQ(entry(s, "1", "y", h), 2);
  EXPECT_EQ(entry(s, "x", "x*y", h), 2);
  EXPECT_EQ(entry(s, "x", "t", h), 1);
  EXPECT_EQ(entry(s, "y", "x^2", h), 2);
  EXPECT_EQ(entry(s, "y", "y^2", h), 6);
  ApproxSystem two = assemble_system(sub_laplacian(h), flat_distance(h, 2), 2);
  EXPECT_EQ(two.rows.size(), 1u);
  EXPECT_EQ(two.determined_col.size(), 1u);
}

TEST(Approximator, WorkedInstances) {
  GroupPtr h = builtin_group("heisenberg1");
  DiffOperator lap = sub_laplacian(h);
  ApproxResult r = solve_approximating(lap, flat_distance(h, 3), poly("x", h), 3);
  EXPECT_EQ(r.p, poly("x*y/2", h));
  EXPECT_TRUE(all_zero(r.residuals));
  EXPECT_TRUE(solve_approximating(lap, flat_distance(h, 3), poly("0", h), 3).p.is_zero());
  EXPECT_EQ(solve_approximating(lap, flat_distance(h, 2), poly("1", h), 2).p, poly("y/2", h));
  EXPECT_TRUE(all_zero(verify_approximating(lap, flat_distance(h, 3), poly("t", h), poly("x", h), 3)));
  auto bad = verify_approximating(lap, flat_distance(h, 3), poly("0", h), poly("x", h), 3);
  EXPECT_NE(bad.at(Word{1}), 0);
  EXPECT_EQ(bad.at(Word{}), 0);
}

TEST(Approximator, FreeAssignments) {
  GroupPtr h = builtin_group("heisenberg1");
  DiffOperator lap = sub_laplacian(h);
  FreeAssignment free;
  free[poly("t", h).terms().begin()->first] = 1;
  ApproxResult r = solve_approximating(lap, flat_distance(h, 3), poly("x", h), 3, free);
  EXPECT_EQ(r.p, poly("t", h));
  FreeAssignment wrong;
  wrong[poly("x*y", h).terms().begin()->first] = 1;
  expect_error(ErrorKind::FreeKeyInvalid, [&] { solve_approximating(lap, flat_distance(h, 3), poly("x", h), 3, wrong); });
  FreeAssignment too_high;
  too_high[poly("x^3", h).terms().begin()->first] = 1;
  expect_error(ErrorKind::FreeKeyInvalid,
               [&] { solve_approximating(lap, flat_distance(h, 3), poly("x", h), 3, too_high); });
}

TEST(Approximator, TriangularityAndDiagonal) {
  for (const auto& name : kGroups) {
    GroupPtr g = builtin_group(name);
    for (int k = 2; k <= 5; ++k) {
      ApproxSystem s = assemble_system(sub_laplacian(g), flat_distance(g, k), k);
      ASSERT_EQ(s.rows.size(), s.determined_col.size());
      EXPECT_EQ(s.rows.size() + s.free_cols.size(), s.cols.size());
      for (std::size_t r = 0; r < s.rows.size(); ++r) {
        const int beta = s.rows[r].distinguished();
        EXPECT_EQ(s.matrix(r, s.determined_col[r]), Rational((beta + 1) * (beta + 2)));
        for (std::size_t q = r + 1; q < s.rows.size(); ++q) EXPECT_EQ(s.matrix(r, s.determined_col[q]), 0);
      }
    }
  }
}

TEST(Approximator, PerturbedProblemsNeedGeneralMode) {
  GroupPtr h = builtin_group("heisenberg1");
  DiffOperator lap = sub_laplacian(h);
  DistanceModel d = flat_distance(h, 4);
  d.poly_part += poly("x/2 + x*y", h);
  StratifiedPolynomial f = poly("1 + x + y^2", h);
  expect_error(ErrorKind::OffTriangular, [&] { solve_approximating(lap, d, f, 4); });
  ApproxResult r = solve_approximating(lap, d, f, 4, {}, SolveMode::General);
  EXPECT_TRUE(all_zero(verify_approximating(lap, d, r.p, f, 4)));
  DistanceModel degenerate{Rational(0), poly("x^2", h), 3, true};
  expect_error(ErrorKind::SingularSystem,
               [&] { solve_approximating(lap, degenerate, poly("1", h), 3, {}, SolveMode::General); });
}

TEST(Approximator, RandomizedDefiningProperty) {
  for (const std::string name : {"heisenberg1", "heisenberg2", "engel"}) {
    GroupPtr g = builtin_group(name);
    Engine rng(73);
    for (int k = 2; k <= 4; ++k) {
      DistanceModel d = flat_distance(g, k);
      d.poly_part += random_polynomial(g, k, 2, rng, 2) * Rational(1, 8);
      CoefficientMatrix a = identity_matrix(g);
      StratifiedPolynomial e = random_polynomial(g, 2, 2, rng, 1) * Rational(1, 8);
      a[0][1] += e;
      a[1][0] += e;
      DiffOperator op = operator_from_matrix(a, g);
      for (int trial = 0; trial < 5; ++trial) {
        StratifiedPolynomial f = random_polynomial(g, k - 2, 3, rng);
        ApproxResult r = solve_approximating(op, d, f, k, {}, SolveMode::General);
        EXPECT_TRUE(all_zero(verify_approximating(op, d, r.p, f, k))) << name << " k=" << k;
        EXPECT_LE(r.p.weighted_degree(), k - 1);
      }
    }
  }
}

TEST(Approximator, HarmonicCompanions) {
  GroupPtr h = builtin_group("heisenberg1");
  EXPECT_EQ(harmonic_companions(h, 0), (std::vector<StratifiedPolynomial>{poly("1", h)}));
  EXPECT_EQ(harmonic_companions(h, 1).size(), 2u);
  std::vector<StratifiedPolynomial> two = harmonic_companions(h, 2);
  ASSERT_EQ(two.size(), 4u);
  DiffOperator lap = sub_laplacian(h);
  for (const auto& q : two) EXPECT_TRUE(apply_operator(lap, poly("y", h) * q).is_zero()) << to_string(q);
  EXPECT_TRUE(apply_operator(lap, poly("y*t - x*y^2/2", h)).is_zero());
  EXPECT_TRUE(apply_operator(lap, poly("x^2*y - y^3/3", h)).is_zero());
  EXPECT_EQ(apply_operator(lap, poly("y^2", h)), poly("2", h));
}

TEST(Approximator, DistanceExpansionExamples) {
  GroupPtr h = builtin_group("heisenberg1");
  DistanceModel flat = distance_expansion(Domain::from_graph(ScalarField::constant(h, 0)), 4);
  EXPECT_EQ(flat.grad_norm, 1);
  EXPECT_EQ(flat.poly_part, poly("y", h));
  DistanceModel curved = distance_expansion(Domain::from_graph(ScalarField::parse("t^2", h)), 4);
  EXPECT_EQ(curved.poly_part, poly("y - t^2", h));
  DistanceModel tilted = distance_expansion(Domain::from_graph(ScalarField::parse("3/4*t", h)), 2);
  EXPECT_TRUE(tilted.exact);
  EXPECT_EQ(tilted.grad_norm, Rational(4, 5));
  DistanceModel irrational = distance_expansion(Domain::from_graph(ScalarField::parse("2*t", h)), 2);
  EXPECT_FALSE(irrational.exact);
  EXPECT_NEAR(to_double(irrational.grad_norm), 1 / std::sqrt(5.0), 1e-15);
}

TEST(Approximator, BadGraphs) {
  GroupPtr h = builtin_group("heisenberg1");
  expect_error(ErrorKind::BadGraph, [&] { Domain::from_graph(ScalarField::parse("y^2", h)); });
  expect_error(ErrorKind::BadGraph, [&] { Domain::from_graph(ScalarField::parse("1 + x^2", h)); });
  expect_error(ErrorKind::BadGraph, [&] { Domain::from_graph(ScalarField::parse("x", h)); });
}

TEST(Approximator, DistanceExpansionMatchesNearestPointDistance) {
  GroupPtr h = builtin_group("heisenberg1");
  struct Case {
    std::string text;
    std::function<double(double, double)> fn;
  };
  std::vector<Case> cases{{"t^2 + x^3", [](double x, double t) { return t * t + x * x * x; }},
                          {"x^2 - t/2", [](double x, double t) { return x * x - t / 2; }},
                          {"sin(t)*x", [](double x, double t) { return std::sin(t) * x; }}};
  const int k = 4;
  for (const auto& c : cases) {
    DistanceModel d = distance_expansion(Domain::from_graph(ScalarField::parse(c.text, h)), k);
    NumericPolynomial model = d.poly_part.cast<double>();
    Engine rng(79);
    std::vector<NumericElement> dirs = unit_ball_samples(h, 20, rng);
    for (double r : {0.04, 0.02}) {
      double worst = 0;
      for (const auto& u : dirs) {
        NumericElement p = dilate(r, u);
        double exact = numeric_graph_distance(c.fn, p.coords(0), p.coords(1), p.coords(2));
        worst = std::max(worst, std::abs(model.evaluate<double>(p.span()) - exact));
      }
      EXPECT_LT(worst, 5 * std::pow(r, k + 1)) << c.text << " r=" << r;
    }
  }
}

TEST(Approximator, MultiscaleSteps) {
  GroupPtr h = builtin_group("heisenberg1");
  Domain omega = Domain::from_graph(ScalarField::parse("t^2 + x^2", h));
  StratifiedPolynomial f = poly("1 + x", h);
  auto steps = multiscale_approximation(omega, identity_matrix(h), f, 3, {Rational(1), Rational(1, 2), Rational(1, 4)});
  ASSERT_EQ(steps.size(), 3u);
  for (const auto& s : steps) EXPECT_TRUE(all_zero(s.result.residuals)) << to_string(s.sigma);
  // The rescaled graph flattens: h_sigma = sigma x^2 + sigma^3 t^2.
  EXPECT_EQ(steps[1].distance.poly_part.truncated(2), poly("y - x^2/2", h));
}
