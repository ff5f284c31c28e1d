#include "helpers.hpp"

using namespace carnot;
using namespace carnot::test;

namespace {

using V = Vector<Rational>;

V br(const GroupPtr& g, const V& a, const V& b) { return bracket(AlgebraElement<Rational>{g, a}, AlgebraElement<Rational>{g, b}).coords; }

// Closed-form BCH through degree 4, exact for step <= 4.
V bch_degree4(const GroupPtr& g, const V& x, const V& y) {
  V xy = br(g, x, y);
  return x + y + xy / Rational(2) + br(g, x, xy) / Rational(12) - br(g, y, xy) / Rational(12) -
         br(g, y, br(g, x, xy)) / Rational(24);
}

}  // namespace

TEST(Group, SpecProducts) {
  GroupPtr h = builtin_group("heisenberg1");
  EXPECT_EQ(format_element(bch_product(elem(h, {1, 0, 0}), elem(h, {0, 1, 0}))), "1,1,1/2");
  GroupPtr e = builtin_group("engel");
  EXPECT_EQ(format_element(bch_product(elem(e, {1, 0, 0, 0}), elem(e, {0, 1, 0, 0}))), "1,1,1/2,1/12");
}

TEST(Group, HeisenbergClosedForm) {
  GroupPtr h = builtin_group("heisenberg1");
  Engine rng(3);
  for (int i = 0; i < 50; ++i) {
    ExactElement p = random_exact_element(h, rng), q = random_exact_element(h, rng);
    V expect(3);
    expect << p.coords(0) + q.coords(0), p.coords(1) + q.coords(1),
        p.coords(2) + q.coords(2) + (p.coords(0) * q.coords(1) - p.coords(1) * q.coords(0)) / 2;
    EXPECT_EQ(bch_product(p, q).coords, expect);
  }
}

TEST(Group, MatchesClosedFormBch) {
  for (const auto& name : kGroups) {
    GroupPtr g = builtin_group(name);
    Engine rng(5);
    for (int i = 0; i < 40; ++i) {
      ExactElement p = random_exact_element(g, rng), q = random_exact_element(g, rng);
      EXPECT_EQ(bch_product(p, q).coords, bch_degree4(g, p.coords, q.coords)) << name;
    }
  }
}

TEST(Group, GroupAxiomsAndDilations) {
  for (const auto& name : kGroups) {
    GroupPtr g = builtin_group(name);
    Engine rng(17);
    for (int i = 0; i < 30; ++i) {
      ExactElement p = random_exact_element(g, rng), q = random_exact_element(g, rng), r = random_exact_element(g, rng);
      EXPECT_EQ(bch_product(bch_product(p, q), r).coords, bch_product(p, bch_product(q, r)).coords);
      EXPECT_EQ(bch_product(p, inverse(p)).coords, identity<Rational>(g).coords);
      Rational a(2, 3), b(5, 2);
      EXPECT_EQ(dilate(a, dilate(b, p)).coords, dilate(Rational(a * b), p).coords);
      EXPECT_EQ(dilate(a, bch_product(p, q)).coords, bch_product(dilate(a, p), dilate(a, q)).coords);
      EXPECT_EQ(gauge_power(dilate(a, p)), pow(a, gauge_exponent(*g)) * gauge_power(p));
    }
  }
}

TEST(Group, GaugeValues) {
  GroupPtr h = builtin_group("heisenberg1");
  EXPECT_EQ(gauge_exponent(*h), 4);
  EXPECT_EQ(gauge_power(elem(h, {1, 1, 1})), 5);
  EXPECT_NEAR(gauge(nelem(h, {0, 0, 0.25})), 0.5, 1e-15);
  GroupPtr e = builtin_group("engel");
  EXPECT_EQ(gauge_exponent(*e), 12);
  EXPECT_NEAR(gauge(nelem(e, {0, 0, 0, 0.125})), 0.5, 1e-15);
}

TEST(Group, DistanceIsSymmetricAndLeftInvariant) {
  GroupPtr g = builtin_group("engel");
  Engine rng(23);
  for (int i = 0; i < 20; ++i) {
    NumericElement p = box_sample(g, rng), q = box_sample(g, rng), s = box_sample(g, rng);
    EXPECT_NEAR(gauge_distance(p, q), gauge_distance(q, p), 1e-12);
    EXPECT_NEAR(gauge_distance(bch_product(s, p), bch_product(s, q)), gauge_distance(p, q), 1e-9);
  }
}

TEST(Group, NumericProductMatchesExact) {
  for (const auto& name : kGroups) {
    GroupPtr g = builtin_group(name);
    Engine rng(29);
    for (int i = 0; i < 20; ++i) {
      ExactElement p = random_exact_element(g, rng), q = random_exact_element(g, rng);
      NumericElement n = bch_product(element_cast<double>(p), element_cast<double>(q));
      ExactElement x = bch_product(p, q);
      for (int s = 0; s < g->dim(); ++s) EXPECT_NEAR(n.coords(s), to_double(x.coords(s)), 1e-9);
    }
  }
}

TEST(Group, LeftTranslateComposesWithProduct) {
  for (const auto& name : kGroups) {
    GroupPtr g = builtin_group(name);
    Engine rng(31);
    for (int i = 0; i < 10; ++i) {
      StratifiedPolynomial p = random_polynomial(g, 4, 4, rng);
      ExactElement a = random_exact_element(g, rng), q = random_exact_element(g, rng);
      EXPECT_EQ(evaluate(left_translate(p, a), q), evaluate(p, bch_product(a, q)));
    }
  }
  GroupPtr h = builtin_group("heisenberg1");
  EXPECT_EQ(to_string(left_translate(poly("t", h), elem(h, {1, 0, 0}))), "1/2*y + t");
}

TEST(Group, ErrorsAndParsing) {
  GroupPtr h = builtin_group("heisenberg1"), e = builtin_group("engel");
  expect_error(ErrorKind::ArityMismatch, [&] { parse_element(h, "1,0"); });
  expect_error(ErrorKind::GroupMismatch, [&] { bch_product(elem(h, {0, 0, 0}), elem(e, {0, 0, 0, 0})); });
  expect_error(ErrorKind::NonpositiveLambda, [&] { dilate(Rational(0), elem(h, {1, 0, 0})); });
  EXPECT_EQ(parse_element(h, "1/2,-0.25,3").coords(1), Rational(-1, 4));
}

TEST(Group, StepperMatchesProductWithHorizontalIncrement) {
  for (const auto& name : kGroups) {
    GroupPtr g = builtin_group(name);
    HorizontalStepper stepper(g);
    Engine rng(37);
    for (int i = 0; i < 20; ++i) {
      NumericElement p = box_sample(g, rng);
      std::vector<double> v(g->horizontal_dim());
      std::vector<double> inc(g->dim(), 0.0);
      for (int s = 0; s < g->horizontal_dim(); ++s) inc[s] = v[s] = 0.1 * (s + 1) - 0.05 * i;
      NumericElement expect = bch_product(p, nelem(g, inc));
      std::vector<double> coords(p.coords.data(), p.coords.data() + p.dim());
      stepper.step(coords, v);
      for (int s = 0; s < g->dim(); ++s) EXPECT_NEAR(coords[s], expect.coords(s), 1e-12) << name;
    }
  }
}
