#include <cmath>

#include "helpers.hpp"

using namespace carnot;
using namespace carnot::test;

TEST(Expression, EvaluatesLikeDirectFormula) {
  GroupPtr h = builtin_group("heisenberg1");
  ScalarField f = ScalarField::parse("y*sin(t) - x^2/3 + exp(-x)*cos(2*y) + 0.5", h);
  Engine rng(67);
  for (int i = 0; i < 20; ++i) {
    NumericElement p = box_sample(h, rng);
    double x = p.coords(0), y = p.coords(1), t = p.coords(2);
    EXPECT_NEAR(f(p), y * std::sin(t) - x * x / 3 + std::exp(-x) * std::cos(2 * y) + 0.5, 1e-14);
  }
}

TEST(Expression, AliasesAndPrecedence) {
  GroupPtr h = builtin_group("heisenberg1");
  EXPECT_EQ(poly("x1*x2 + x2_1", h), poly("x*y + t", h));
  EXPECT_EQ(poly("-x^2", h), -poly("x*x", h));
  EXPECT_EQ(poly("2^3*x", h), poly("8*x", h));
  EXPECT_EQ(poly("(x + y)^2", h), poly("x^2 + 2*x*y + y^2", h));
  EXPECT_EQ(poly("x/4 - 0.75*y", h), poly("1/4*x - 3/4*y", h));
  GroupPtr g = builtin_group("heisenberg2");
  EXPECT_EQ(poly("x3", g), poly("y1", g));
}

TEST(Expression, Errors) {
  GroupPtr h = builtin_group("heisenberg1");
  expect_error(ErrorKind::ParseError, [&] { ScalarField::parse("x +", h); });
  expect_error(ErrorKind::ParseError, [&] { ScalarField::parse("w", h); });
  expect_error(ErrorKind::ParseError, [&] { ScalarField::parse("x^y", h); });
  expect_error(ErrorKind::ParseError, [&] { ScalarField::parse("sin(x", h); });
  expect_error(ErrorKind::NotPolynomial, [&] { ScalarField::parse("sin(x)", h).polynomial(); });
  expect_error(ErrorKind::NotPolynomial, [&] { ScalarField::parse("1/x", h).polynomial(); });
  expect_error(ErrorKind::ArityMismatch, [&] { ScalarField::parse("x", h)(std::vector<double>{1, 2}); });
  expect_error(ErrorKind::EvaluationFailure, [&] { ScalarField::parse("1/x", h)(nelem(h, {0, 0, 0})); });
}

TEST(Expression, TextRoundTrip) {
  GroupPtr h = builtin_group("heisenberg1");
  for (const char* text : {"y*sin(t) - x^2/3 + t", "exp(-(x + y))*cos(t^2)", "(1 - x)^3/7", "-x + 2.5"}) {
    ScalarField f = ScalarField::parse(text, h);
    ScalarField g = ScalarField::parse(f.to_string(), h);
    EXPECT_EQ(g.to_string(), f.to_string()) << text;
    NumericElement p = nelem(h, {0.3, -0.7, 0.4});
    EXPECT_DOUBLE_EQ(f(p), g(p));
  }
}

TEST(Expression, ExactJets) {
  GroupPtr h = builtin_group("heisenberg1");
  ExactElement e = identity<Rational>(h);
  EXPECT_EQ(to_string(ScalarField::parse("y*sin(t) - x^2/3 + t", h).jet(e, 8)), "-1/3*x^2 + t + y*t - 1/6*y*t^3");
  EXPECT_EQ(ScalarField::parse("sin(x)", h).jet(e, 5), poly("x - x^3/6 + x^5/120", h));
  EXPECT_EQ(ScalarField::parse("exp(x)*cos(y)", h).jet(e, 2), poly("1 + x + x^2/2 - y^2/2", h));
  StratifiedPolynomial p = poly("x^3*y + t^2", h);
  ExactElement g0 = elem(h, {1, 2, 3});
  EXPECT_EQ(ScalarField::from_polynomial(p, h).jet(g0, 3), left_translate(p, g0).truncated(3));
  expect_error(ErrorKind::EvaluationFailure, [&] { ScalarField::parse("sin(x)", h).jet(g0, 2); });
}

TEST(Expression, NumericJetsMatchFiniteDifferences) {
  GroupPtr h = builtin_group("heisenberg1");
  ScalarField f = ScalarField::parse("sin(x + t)*exp(y)", h);
  NumericElement g0 = nelem(h, {0.4, -0.2, 0.3});
  NumericPolynomial jet = f.jet(g0, 2);
  EXPECT_NEAR(jet.evaluate<double>(std::vector<double>{0, 0, 0}), f(g0), 1e-14);
  // d/ds f(g0 o s e_1) at 0 is the x-coefficient of the jet.
  double h_step = 1e-5;
  NumericElement plus = bch_product(g0, nelem(h, {h_step, 0, 0})), minus = bch_product(g0, nelem(h, {-h_step, 0, 0}));
  std::vector<int> ex{1, 0, 0};
  EXPECT_NEAR(jet.coefficient(MultiIndex(*h->grading(), ex)), (f(plus) - f(minus)) / (2 * h_step), 1e-8);
}

TEST(Expression, OpaqueAndConstantFields) {
  GroupPtr h = builtin_group("heisenberg1");
  ScalarField f = ScalarField::from_function(h, [](std::span<const double> p) { return p[0] + 2 * p[2]; }, "custom");
  EXPECT_TRUE(f.is_opaque());
  EXPECT_DOUBLE_EQ(f(nelem(h, {1, 0, 2})), 5);
  expect_error(ErrorKind::NotPolynomial, [&] { f.polynomial(); });
  double c = 0;
  EXPECT_TRUE(ScalarField::constant(h, Rational(3, 2)).is_constant(&c));
  EXPECT_DOUBLE_EQ(c, 1.5);
  EXPECT_FALSE(ScalarField::parse("x", h).is_constant());
}
