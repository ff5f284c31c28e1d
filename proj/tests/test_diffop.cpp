#include "helpers.hpp"

using namespace carnot;
using namespace carnot::test;

namespace {

std::vector<std::string> coefficient_text(const VectorField& x) {
  std::vector<std::string> out;
  for (const auto& c : x.coefficients) out.push_back(to_string(c));
  return out;
}

// d/ds P(p o exp(s e_i)) at s = 0 by central differences.
double numeric_field(const StratifiedPolynomial& p, const NumericElement& at, int i, double h = 1e-5) {
  std::vector<double> step(at.dim(), 0.0);
  step[i] = h;
  NumericElement plus = bch_product(at, make_element<double>(at.group, step));
  step[i] = -h;
  NumericElement minus = bch_product(at, make_element<double>(at.group, step));
  return (evaluate(p, plus) - evaluate(p, minus)) / (2 * h);
}

}  // namespace

TEST(DiffOp, HeisenbergFields) {
  GroupPtr h = builtin_group("heisenberg1");
  const auto& f = left_invariant_fields(h);
  EXPECT_EQ(coefficient_text(f[0]), (std::vector<std::string>{"1", "0", "-1/2*y"}));
  EXPECT_EQ(coefficient_text(f[1]), (std::vector<std::string>{"0", "1", "1/2*x"}));
  EXPECT_EQ(coefficient_text(field_bracket(f[0], f[1])), (std::vector<std::string>{"0", "0", "1"}));
}

TEST(DiffOp, FieldsAreDerivativesAlongRightTranslation) {
  for (const auto& name : kGroups) {
    GroupPtr g = builtin_group(name);
    const auto& fields = left_invariant_fields(g);
    Engine rng(53);
    for (int trial = 0; trial < 10; ++trial) {
      StratifiedPolynomial p = random_polynomial(g, 4, 4, rng);
      NumericElement at = box_sample(g, rng);
      for (int i = 0; i < g->dim(); ++i)
        EXPECT_NEAR(evaluate(apply_field(fields[i], p), at), numeric_field(p, at, i), 1e-6) << name;
    }
  }
}

TEST(DiffOp, BracketRelationsMatchAlgebra) {
  for (const auto& name : kGroups) {
    GroupPtr g = builtin_group(name);
    const auto& fields = left_invariant_fields(g);
    for (int a = 0; a < g->dim(); ++a)
      for (int b = 0; b < g->dim(); ++b) {
        VectorField lhs = field_bracket(fields[a], fields[b]);
        std::vector<StratifiedPolynomial> rhs(g->dim(), StratifiedPolynomial(g->grading()));
        for (const auto& [c, v] : g->basis_bracket(a, b))
          for (int s = 0; s < g->dim(); ++s) rhs[s] += fields[c].coefficients[s] * v;
        EXPECT_EQ(lhs.coefficients, rhs) << name << " " << a << "," << b;
      }
  }
}

TEST(DiffOp, ComposeMatchesIteratedApplication) {
  GroupPtr g = builtin_group("engel");
  const auto& fields = left_invariant_fields(g);
  Engine rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    StratifiedPolynomial p = random_polynomial(g, 5, 5, rng);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        EXPECT_EQ(apply_operator(compose(fields[i], fields[j]), p), apply_field(fields[i], apply_field(fields[j], p)));
  }
}

TEST(DiffOp, SubLaplacianExamples) {
  GroupPtr h = builtin_group("heisenberg1");
  DiffOperator lap = sub_laplacian(h);
  EXPECT_EQ(to_string(apply_operator(lap, poly("y*t", h))), "x");
  EXPECT_TRUE(apply_operator(lap, poly("x^2*y - y^3/3", h)).is_zero());
  EXPECT_EQ(operator_from_matrix(identity_matrix(h), h), lap);
}

TEST(DiffOp, MatrixOperatorIsSumOfProducts) {
  GroupPtr h = builtin_group("heisenberg1");
  const auto& f = left_invariant_fields(h);
  CoefficientMatrix a{{poly("2", h), poly("x", h)}, {poly("x", h), poly("1 + y^2", h)}};
  DiffOperator op = operator_from_matrix(a, h);
  Engine rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    StratifiedPolynomial p = random_polynomial(h, 5, 5, rng);
    StratifiedPolynomial expect(h->grading());
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) expect += a[i][j] * apply_field(f[i], apply_field(f[j], p));
    EXPECT_EQ(apply_operator(op, p), expect);
  }
}

TEST(DiffOp, MatrixValidation) {
  GroupPtr h = builtin_group("heisenberg1");
  CoefficientMatrix asym{{poly("1", h), poly("x", h)}, {poly("0", h), poly("1", h)}};
  expect_error(ErrorKind::NotSymmetric, [&] { operator_from_matrix(asym, h); });
  CoefficientMatrix indefinite{{poly("1", h), poly("2", h)}, {poly("2", h), poly("1", h)}};
  expect_error(ErrorKind::NotElliptic, [&] { operator_from_matrix(indefinite, h); });
  CoefficientMatrix wide{{poly("4", h), poly("0", h)}, {poly("0", h), poly("1", h)}};
  EXPECT_NO_THROW(operator_from_matrix(wide, h));
  expect_error(ErrorKind::NotElliptic, [&] { operator_from_matrix(wide, h, 0.5); });
}

TEST(DiffOp, WordsAndFiniteDifferences) {
  GroupPtr h = builtin_group("heisenberg1");
  StratifiedPolynomial p = poly("x^3*t - y*t^2 + x*y", h);
  expect_error(ErrorKind::BadWord, [&] { horizontal_derivative(Word{3}, p, h); });
  ScalarField f = ScalarField::from_polynomial(p, h);
  NumericElement at = nelem(h, {0.3, -0.4, 0.2});
  for (const Word& w : {Word{1}, Word{2}, Word{1, 2}, Word{2, 1}, Word{1, 1, 2}}) {
    double exact = evaluate(horizontal_derivative(w, p, h), at);
    EXPECT_NEAR(fd_horizontal_derivative(w, f, at, 1e-3), exact, 1e-4);
  }
  // [X1, X2] = T: the commutator of words recovers the vertical derivative.
  StratifiedPolynomial comm = horizontal_derivative(Word{1, 2}, p, h) - horizontal_derivative(Word{2, 1}, p, h);
  EXPECT_EQ(comm, apply_field(left_invariant_fields(h)[2], p));
}
