#include "helpers.hpp"

using namespace carnot;
using namespace carnot::test;

namespace {

SparseCombination unit(int i) { return {{i, Rational(1)}}; }

}  // namespace

TEST(Algebra, BuiltinShapes) {
  EXPECT_EQ(builtin_group("heisenberg1")->layer_dims(), (std::vector<int>{2, 1}));
  EXPECT_EQ(builtin_group("heisenberg(2)")->layer_dims(), (std::vector<int>{4, 1}));
  EXPECT_EQ(builtin_group("free_step2_3")->layer_dims(), (std::vector<int>{3, 3}));
  EXPECT_EQ(builtin_group("engel")->layer_dims(), (std::vector<int>{2, 1, 1}));
  EXPECT_EQ(builtin_group("heisenberg1")->homogeneous_dimension(), 4);
  EXPECT_EQ(builtin_group("heisenberg2")->homogeneous_dimension(), 6);
  EXPECT_EQ(builtin_group("free_step2_3")->homogeneous_dimension(), 9);
  EXPECT_EQ(builtin_group("engel")->homogeneous_dimension(), 7);
  EXPECT_EQ(builtin_group("heisenberg1"), builtin_group("heisenberg(1)"));
  expect_error(ErrorKind::UnknownName, [] { builtin_group("lorentz"); });
}

TEST(Algebra, HeisenbergBracket) {
  GroupPtr h = builtin_group("heisenberg1");
  auto c = bracket(basis_element<Rational>(h, 0), basis_element<Rational>(h, 1));
  EXPECT_EQ(c.coords(2), 1);
  EXPECT_EQ(c.coords(0), 0);
  auto r = bracket(basis_element<Rational>(h, 1), basis_element<Rational>(h, 0));
  EXPECT_EQ(r.coords(2), -1);
}

TEST(Algebra, AntisymmetryAndJacobiOnRandomVectors) {
  for (const auto& name : kGroups) {
    GroupPtr g = builtin_group(name);
    Engine rng(11);
    for (int trial = 0; trial < 30; ++trial) {
      AlgebraElement<Rational> a{g, random_exact_element(g, rng).coords}, b{g, random_exact_element(g, rng).coords},
          c{g, random_exact_element(g, rng).coords};
      EXPECT_EQ(bracket(a, b).coords, (-bracket(b, a).coords).eval());
      Vector<Rational> jac = bracket(a, bracket(b, c)).coords + bracket(b, bracket(c, a)).coords +
                             bracket(c, bracket(a, b)).coords;
      EXPECT_TRUE(jac.isZero()) << name;
    }
  }
}

TEST(Algebra, BracketRaisesLayer) {
  for (const auto& name : kGroups) {
    GroupPtr g = builtin_group(name);
    for (int a = 0; a < g->dim(); ++a)
      for (int b = 0; b < g->dim(); ++b)
        for (const auto& [c, v] : g->basis_bracket(a, b)) EXPECT_EQ(g->layer_of(c), g->layer_of(a) + g->layer_of(b));
  }
}

TEST(Algebra, RejectsJacobiViolation) {
  std::vector<BracketEntry> table{{0, 1, unit(3)}, {2, 3, unit(4)}};
  expect_error(ErrorKind::JacobiViolation, [&] { build_algebra({3, 1, 1}, table); });
}

TEST(Algebra, RejectsUngradedTable) {
  std::vector<BracketEntry> table{{0, 1, unit(2)}, {0, 2, unit(1)}};
  expect_error(ErrorKind::NotGraded, [&] { build_algebra({2, 1}, table); });
}

TEST(Algebra, RejectsUngeneratedLayer) {
  expect_error(ErrorKind::NotStratified, [] { build_algebra({2, 1}, {}); });
  std::vector<BracketEntry> table{{0, 1, unit(2)}};
  expect_error(ErrorKind::NotStratified, [&] { build_algebra({2, 2}, table); });
}

TEST(Algebra, RejectsInconsistentOrientations) {
  std::vector<BracketEntry> table{{0, 1, unit(2)}, {1, 0, unit(2)}};
  expect_error(ErrorKind::AntisymmetryViolation, [&] { build_algebra({2, 1}, table); });
  std::vector<BracketEntry> ok{{0, 1, unit(2)}, {1, 0, {{2, Rational(-1)}}}};
  EXPECT_EQ(*build_algebra({2, 1}, ok), *builtin_group("heisenberg1"));
}

TEST(Algebra, LabelsRoundTrip) {
  GroupPtr g = builtin_group("engel");
  for (int i = 0; i < g->dim(); ++i) EXPECT_EQ(g->flat_index(g->label_of(i)), i);
  EXPECT_EQ(g->label_of(3), (BasisLabel{3, 1}));
  expect_error(ErrorKind::InvalidArgument, [&] { g->flat_index({4, 1}); });
}

TEST(Algebra, MismatchedAlgebras) {
  GroupPtr h = builtin_group("heisenberg1"), e = builtin_group("engel");
  expect_error(ErrorKind::AlgebraMismatch, [&] { bracket(basis_element<Rational>(h, 0), basis_element<Rational>(e, 0)); });
}
