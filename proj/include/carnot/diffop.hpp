#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/polynomial.hpp"

namespace carnot {

/// First-order operator sum_c coefficients[c] * d/dx_c with polynomial
/// coefficients in the N exponential coordinates.
struct VectorField {
  GroupPtr group;
  std::string label;
  std::vector<StratifiedPolynomial> coefficients;
};

/// Horizontal words are 1-based: (1, 2) means X_1 X_2.
using Word = std::vector<int>;

/// Second-order linear operator with polynomial coefficients. Second-order
/// terms are keyed by slot pairs (a, b) with a <= b; the coefficient at (a, b)
/// multiplies d^2/dx_a dx_b exactly once.
struct DiffOperator {
  GroupPtr group;
  std::map<std::pair<int, int>, StratifiedPolynomial> second;
  std::map<int, StratifiedPolynomial> first;
  StratifiedPolynomial zeroth;

  explicit DiffOperator(GroupPtr g);
  DiffOperator() = default;

  void add_second(int a, int b, const StratifiedPolynomial& c);
  void add_first(int a, const StratifiedPolynomial& c);
  DiffOperator& operator+=(const DiffOperator& o);
  /// Every coefficient multiplied by c (left multiplication of the operator).
  DiffOperator scaled(const StratifiedPolynomial& c) const;
  bool operator==(const DiffOperator& o) const;
};

/// X_{j,s} for every basis vector, horizontal (layer 1) fields first, obtained
/// by differentiating q -> p o exp(t e_{j,s}) at t = 0. Cached per group.
const std::vector<VectorField>& left_invariant_fields(const GroupPtr& g);

template <class C>
BasicPolynomial<C> apply_field(const VectorField& x, const BasicPolynomial<C>& p) {
  if (!same_grading(p.grading(), x.group->grading()))
    throw Error(ErrorKind::GroupMismatch, "vector field applied across groups");
  BasicPolynomial<C> out(p.grading());
  for (int c = 0; c < static_cast<int>(x.coefficients.size()); ++c) {
    if (x.coefficients[c].is_zero()) continue;
    BasicPolynomial<C> d = p.derivative(c);
    if (d.is_zero()) continue;
    if constexpr (std::is_same_v<C, Rational>) out += x.coefficients[c] * d;
    else out += x.coefficients[c].template cast<C>() * d;
  }
  return out;
}

/// X^I P = X_{i_1}(X_{i_2}(... X_{i_k} P)). Throws BadWord for letters outside 1..m.
template <class C>
BasicPolynomial<C> horizontal_derivative(const Word& word, const BasicPolynomial<C>& p, const GroupPtr& g) {
  const auto& fields = left_invariant_fields(g);
  for (int letter : word)
    if (letter < 1 || letter > g->horizontal_dim())
      throw Error(ErrorKind::BadWord, "letter " + std::to_string(letter) + " outside 1.." +
                                          std::to_string(g->horizontal_dim()));
  BasicPolynomial<C> r = p;
  for (auto it = word.rbegin(); it != word.rend(); ++it) r = apply_field(fields[*it - 1], r);
  return r;
}

/// Commutator [X, Y] as a vector field.
VectorField field_bracket(const VectorField& x, const VectorField& y);

/// The operator X o Y, product rule on the coefficients; order preserved.
DiffOperator compose(const VectorField& x, const VectorField& y);

/// Sum of X_i^2 over the horizontal fields.
DiffOperator sub_laplacian(const GroupPtr& g);

/// Coefficient matrix for sum a_ij X_i X_j; entries are polynomials.
using CoefficientMatrix = std::vector<std::vector<StratifiedPolynomial>>;

CoefficientMatrix identity_matrix(const GroupPtr& g);

/// sum_ij a_ij X_i X_j. A must be symmetric (NotSymmetric). When every entry is
/// constant, A must be positive definite and, if `lambda` is given, have its
/// spectrum in [lambda, 1/lambda] (NotElliptic).
DiffOperator operator_from_matrix(const CoefficientMatrix& a, const GroupPtr& g,
                                  std::optional<double> lambda = std::nullopt);

template <class C>
BasicPolynomial<C> apply_operator(const DiffOperator& op, const BasicPolynomial<C>& p) {
  if (!same_grading(p.grading(), op.group->grading()))
    throw Error(ErrorKind::GroupMismatch, "operator applied across groups");
  auto coef = [](const StratifiedPolynomial& c) {
    if constexpr (std::is_same_v<C, Rational>) return c;
    else return c.template cast<C>();
  };
  BasicPolynomial<C> out(p.grading());
  std::map<int, BasicPolynomial<C>> firsts;
  auto d1 = [&](int a) -> const BasicPolynomial<C>& {
    auto it = firsts.find(a);
    if (it == firsts.end()) it = firsts.emplace(a, p.derivative(a)).first;
    return it->second;
  };
  for (const auto& [ab, c] : op.second) {
    BasicPolynomial<C> d = d1(ab.first).derivative(ab.second);
    if (!d.is_zero()) out += coef(c) * d;
  }
  for (const auto& [a, c] : op.first) {
    const auto& d = d1(a);
    if (!d.is_zero()) out += coef(c) * d;
  }
  if (!op.zeroth.is_zero()) out += coef(op.zeroth) * p;
  return out;
}

}  // namespace carnot
