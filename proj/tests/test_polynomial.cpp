#include "helpers.hpp"

using namespace carnot;
using namespace carnot::test;

namespace {

// Number of monomials of weighted degree <= kappa, by brute-force enumeration.
int count_monomials(const Grading& g, int kappa) {
  int count = 0;
  std::vector<int> e(g.nvars(), 0);
  std::function<void(int, int)> rec = [&](int i, int budget) {
    if (i == g.nvars()) {
      ++count;
      return;
    }
    for (int k = 0; k * g.weights[i] <= budget; ++k) rec(i + 1, budget - k * g.weights[i]);
  };
  rec(0, kappa);
  return count;
}

}  // namespace

TEST(Polynomial, MonomialOrder) {
  GroupPtr h = builtin_group("heisenberg1");
  std::vector<MultiIndex> basis = monomial_basis(*h->grading(), 2);
  std::vector<std::string> text;
  for (const auto& j : basis) text.push_back(to_string(StratifiedPolynomial::monomial(h->grading(), j.exponents())));
  EXPECT_EQ(text, (std::vector<std::string>{"1", "x", "y", "x^2", "t", "x*y", "y^2"}));
  for (std::size_t i = 1; i < basis.size(); ++i) EXPECT_TRUE(basis[i - 1] < basis[i]);
}

TEST(Polynomial, BasisSizes) {
  for (const auto& name : kGroups) {
    GroupPtr g = builtin_group(name);
    for (int k = 0; k <= 5; ++k)
      EXPECT_EQ(static_cast<int>(monomial_basis(*g->grading(), k).size()), count_monomials(*g->grading(), k));
  }
}

TEST(Polynomial, ArithmeticAgreesWithEvaluation) {
  for (const auto& name : kGroups) {
    GroupPtr g = builtin_group(name);
    Engine rng(41);
    for (int i = 0; i < 20; ++i) {
      StratifiedPolynomial a = random_polynomial(g, 4, 4, rng), b = random_polynomial(g, 3, 3, rng);
      ExactElement p = random_exact_element(g, rng);
      Rational va = evaluate(a, p), vb = evaluate(b, p);
      EXPECT_EQ(evaluate(a + b, p), va + vb);
      EXPECT_EQ(evaluate(a - b, p), va - vb);
      EXPECT_EQ(evaluate(a * b, p), va * vb);
      EXPECT_EQ(multiply(a, b, 3), (a * b).truncated(3));
      EXPECT_EQ(evaluate(dilate_poly(a, Rational(3, 2)), p), evaluate(a, dilate(Rational(3, 2), p)));
    }
  }
}

TEST(Polynomial, DerivativeProductRule) {
  GroupPtr g = builtin_group("engel");
  Engine rng(43);
  for (int i = 0; i < 20; ++i) {
    StratifiedPolynomial a = random_polynomial(g, 4, 4, rng), b = random_polynomial(g, 4, 4, rng);
    for (int v = 0; v < g->dim(); ++v) EXPECT_EQ((a * b).derivative(v), a.derivative(v) * b + a * b.derivative(v));
  }
}

TEST(Polynomial, SubstitutionAgreesWithEvaluation) {
  GroupPtr g = builtin_group("heisenberg1");
  Engine rng(47);
  for (int i = 0; i < 20; ++i) {
    StratifiedPolynomial p = random_polynomial(g, 4, 4, rng);
    std::vector<StratifiedPolynomial> subs;
    for (int v = 0; v < g->dim(); ++v) subs.push_back(random_polynomial(g, 2, 2, rng, 1));
    StratifiedPolynomial composed = substitute<Rational>(p, subs, g->grading());
    ExactElement q = random_exact_element(g, rng);
    std::vector<Rational> inner;
    for (const auto& s : subs) inner.push_back(evaluate(s, q));
    EXPECT_EQ(evaluate(composed, q), p.evaluate<Rational>(inner));
    EXPECT_EQ(substitute<Rational>(p, subs, g->grading(), 3), composed.truncated(3));
  }
}

TEST(Polynomial, DegreesAndParts) {
  GroupPtr h = builtin_group("heisenberg1");
  StratifiedPolynomial p = poly("3 + x*t - y^2 + t^2", h);
  EXPECT_EQ(p.weighted_degree(), 4);
  EXPECT_EQ(p.min_degree(), 0);
  EXPECT_EQ(p.constant_term(), 3);
  EXPECT_EQ(to_string(p.homogeneous_part(2)), "-y^2");
  EXPECT_EQ(to_string(p.truncated(3)), "3 - y^2 + x*t");
  EXPECT_EQ(StratifiedPolynomial(h->grading()).weighted_degree(), kZeroDegree);
  expect_error(ErrorKind::GroupMismatch, [&] { (void)(p + poly("x", builtin_group("engel"))); });
}

TEST(Polynomial, ExactRationals) {
  EXPECT_EQ(parse_rational("-0.25"), Rational(-1, 4));
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(to_string(Rational(3, 1)), "3");
  EXPECT_EQ(to_fraction_string(Rational(3, 1)), "3/1");
  EXPECT_EQ(from_double(0.375), Rational(3, 8));
  EXPECT_EQ(pow(Rational(2, 3), -2), Rational(9, 4));
  Rational root;
  EXPECT_TRUE(exact_sqrt(Rational(9, 16), root));
  EXPECT_EQ(root, Rational(3, 4));
  EXPECT_FALSE(exact_sqrt(Rational(2), root));
}
