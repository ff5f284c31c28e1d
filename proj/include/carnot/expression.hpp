#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/polynomial.hpp"

namespace carnot {

/// Expression tree node. Grammar: coordinates by name, rational or decimal
/// literals, + - * / ^integer, sin, cos, exp, parentheses.
struct ExprNode {
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp };
  Op op = Op::Const;
  Rational value;
  double dvalue = 0;
  int var = -1;
  int exponent = 0;
  std::vector<std::shared_ptr<const ExprNode>> args;
};

using ExprPtr = std::shared_ptr<const ExprNode>;

/// Parses against the coordinate names of g. Besides the group's own names,
/// x<s> addresses layer-1 slot s and x<j>_<s> slot s of layer j.
ExprPtr parse_expression(const std::string& text, const GroupPtr& g);

/// A scalar function on the group: an expression, a polynomial, or an opaque
/// callable. Evaluation is deterministic and thread-safe.
class ScalarField {
 public:
  using Function = std::function<double(std::span<const double>)>;

  ScalarField() = default;
  static ScalarField parse(const std::string& text, const GroupPtr& g);
  static ScalarField from_polynomial(const StratifiedPolynomial& p, const GroupPtr& g);
  static ScalarField from_function(const GroupPtr& g, Function f, std::string label);
  static ScalarField constant(const GroupPtr& g, const Rational& c);

  const GroupPtr& group() const { return group_; }
  double operator()(std::span<const double> coords) const;
  double operator()(const NumericElement& p) const { return (*this)(p.span()); }

  bool is_opaque() const { return !expr_; }
  bool is_polynomial() const;
  /// Exact polynomial form; throws NotPolynomial for transcendental or opaque fields.
  StratifiedPolynomial polynomial() const;
  /// True when the field is the constant c (structurally).
  bool is_constant(double* value = nullptr) const;

  /// Taylor expansion of q -> f(g0 o q) truncated at weighted degree kappa.
  /// The exact variant requires every sin/cos/exp argument to vanish at g0.
  StratifiedPolynomial jet(const ExactElement& g0, int kappa) const;
  NumericPolynomial jet(const NumericElement& g0, int kappa) const;

  /// Re-parseable text (the opaque label for callables).
  std::string to_string() const;

 private:
  GroupPtr group_;
  ExprPtr expr_;
  Function fn_;
  std::string label_;
};

std::string to_string(const ExprPtr& e, const GroupPtr& g);

}  // namespace carnot
