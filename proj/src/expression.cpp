#include "carnot/expression.hpp"

#include <cctype>
#include <cmath>
#include <regex>

namespace carnot {

namespace {

using Op = ExprNode::Op;

ExprPtr make_const(const Rational& v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Const;
  n->value = v;
  n->dvalue = to_double(v);
  return n;
}

ExprPtr make_node(Op op, std::vector<ExprPtr> args, int exponent = 0) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->args = std::move(args);
  n->exponent = exponent;
  return n;
}

int resolve_name(const std::string& name, const Stratification& g) {
  const auto& names = g.variable_names();
  for (int i = 0; i < g.dim(); ++i)
    if (names[i] == name) return i;
  static const std::regex layer1(R"(x(\d+))");
  static const std::regex layered(R"(x(\d+)_(\d+))");
  std::smatch m;
  try {
    if (std::regex_match(name, m, layer1)) return g.flat_index({1, std::stoi(m[1].str())});
    if (std::regex_match(name, m, layered))
      return g.flat_index({std::stoi(m[1].str()), std::stoi(m[2].str())});
  } catch (const Error&) {
  }
  return -1;
}

class Parser {
 public:
  Parser(const std::string& text, const Stratification& g) : s_(text), g_(g) {}

  ExprPtr parse() {
    ExprPtr e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError, what + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr sum() {
    ExprPtr e = product();
    for (;;) {
      if (accept('+')) e = make_node(Op::Add, {e, product()});
      else if (accept('-')) e = make_node(Op::Sub, {e, product()});
      else return e;
    }
  }
  ExprPtr product() {
    ExprPtr e = unary();
    for (;;) {
      if (accept('*')) e = make_node(Op::Mul, {e, unary()});
      else if (accept('/')) {
        ExprPtr d = unary();
        if (e->op == Op::Const && d->op == Op::Const && d->value != 0) e = make_const(e->value / d->value);
        else e = make_node(Op::Div, {e, d});
      } else return e;
    }
  }
  ExprPtr unary() {
    if (accept('-')) {
      ExprPtr e = unary();
      return e->op == Op::Const ? make_const(-e->value) : make_node(Op::Neg, {e});
    }
    if (accept('+')) return unary();
    return power();
  }
  ExprPtr power() {
    ExprPtr base = atom();
    if (accept('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent must be a nonnegative integer");
      return make_node(Op::Pow, {base}, std::stoi(s_.substr(start, pos_ - start)));
    }
    return base;
  }
  ExprPtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (accept('(')) {
      ExprPtr e = sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      try {
        return make_const(parse_rational(s_.substr(start, pos_ - start)));
      } catch (const Error&) {
        fail("bad number");
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      if (name == "sin" || name == "cos" || name == "exp") {
        if (!accept('(')) fail("expected '(' after " + name);
        ExprPtr arg = sum();
        if (!accept(')')) fail("expected ')'");
        Op op = name == "sin" ? Op::Sin : name == "cos" ? Op::Cos : Op::Exp;
        return make_node(op, {arg});
      }
      int v = resolve_name(name, g_);
      if (v < 0) {
        pos_ = start;
        fail("unknown coordinate '" + name + "'");
      }
      auto n = std::make_shared<ExprNode>();
      n->op = Op::Var;
      n->var = v;
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  const Stratification& g_;
  std::size_t pos_ = 0;
};

double eval(const ExprNode& n, std::span<const double> x) {
  switch (n.op) {
    case Op::Const: return n.dvalue;
    case Op::Var: return x[n.var];
    case Op::Add: return eval(*n.args[0], x) + eval(*n.args[1], x);
    case Op::Sub: return eval(*n.args[0], x) - eval(*n.args[1], x);
    case Op::Mul: return eval(*n.args[0], x) * eval(*n.args[1], x);
    case Op::Div: return eval(*n.args[0], x) / eval(*n.args[1], x);
    case Op::Neg: return -eval(*n.args[0], x);
    case Op::Pow: {
      double b = eval(*n.args[0], x), r = 1;
      for (int k = 0; k < n.exponent; ++k) r *= b;
      return r;
    }
    case Op::Sin: return std::sin(eval(*n.args[0], x));
    case Op::Cos: return std::cos(eval(*n.args[0], x));
    case Op::Exp: return std::exp(eval(*n.args[0], x));
  }
  return 0;
}

StratifiedPolynomial to_poly(const ExprNode& n, const GradingPtr& g) {
  switch (n.op) {
    case Op::Const: return StratifiedPolynomial::constant(g, n.value);
    case Op::Var: return StratifiedPolynomial::variable(g, n.var);
    case Op::Add: return to_poly(*n.args[0], g) + to_poly(*n.args[1], g);
    case Op::Sub: return to_poly(*n.args[0], g) - to_poly(*n.args[1], g);
    case Op::Mul: return to_poly(*n.args[0], g) * to_poly(*n.args[1], g);
    case Op::Neg: return -to_poly(*n.args[0], g);
    case Op::Div: {
      StratifiedPolynomial d = to_poly(*n.args[1], g);
      if (d.weighted_degree() != 0) throw Error(ErrorKind::NotPolynomial, "division by a non-constant");
      return to_poly(*n.args[0], g) * (Rational(1) / d.constant_term());
    }
    case Op::Pow: {
      StratifiedPolynomial b = to_poly(*n.args[0], g);
      StratifiedPolynomial r = StratifiedPolynomial::constant(g, Rational(1));
      for (int k = 0; k < n.exponent; ++k) r *= b;
      return r;
    }
    default: throw Error(ErrorKind::NotPolynomial, "expression uses sin, cos or exp");
  }
}

bool has_var(const ExprNode& n) {
  if (n.op == Op::Var) return true;
  for (const auto& a : n.args)
    if (has_var(*a)) return true;
  return false;
}

bool polynomial_only(const ExprNode& n) {
  if (n.op == Op::Sin || n.op == Op::Cos || n.op == Op::Exp) return false;
  if (n.op == Op::Div && has_var(*n.args[1])) return false;
  for (const auto& a : n.args)
    if (!polynomial_only(*a)) return false;
  return true;
}

/// sum_n a_n v^n truncated at kappa; v must have zero constant term.
template <class C>
BasicPolynomial<C> power_series(const BasicPolynomial<C>& v, const std::vector<C>& a, int kappa) {
  BasicPolynomial<C> out(v.grading());
  BasicPolynomial<C> vn = BasicPolynomial<C>::constant(v.grading(), C(1));
  for (std::size_t n = 0; n < a.size() && !vn.is_zero(); ++n) {
    if (!is_zero_coeff(a[n])) out += vn * a[n];
    vn = multiply(vn, v, kappa);
  }
  return out;
}

template <class C>
C factorial_inverse(int n) {
  C r(1);
  for (int i = 2; i <= n; ++i) r /= C(i);
  return r;
}

template <class C>
BasicPolynomial<C> series(const ExprNode& n, const std::vector<BasicPolynomial<C>>& vars, const GradingPtr& g,
                          int kappa) {
  auto rec = [&](int i) { return series(*n.args[i], vars, g, kappa); };
  switch (n.op) {
    case Op::Const:
      if constexpr (std::is_same_v<C, Rational>) return BasicPolynomial<C>::constant(g, n.value);
      else return BasicPolynomial<C>::constant(g, n.dvalue);
    case Op::Var: return vars[n.var];
    case Op::Add: return rec(0) + rec(1);
    case Op::Sub: return rec(0) - rec(1);
    case Op::Mul: return multiply(rec(0), rec(1), kappa);
    case Op::Neg: return -rec(0);
    case Op::Pow: {
      BasicPolynomial<C> b = rec(0);
      BasicPolynomial<C> r = BasicPolynomial<C>::constant(g, C(1));
      for (int k = 0; k < n.exponent; ++k) r = multiply(r, b, kappa);
      return r;
    }
    default: break;
  }
  BasicPolynomial<C> u = n.op == Op::Div ? rec(1) : rec(0);
  C c = u.constant_term();
  BasicPolynomial<C> v = u - BasicPolynomial<C>::constant(g, c);
  const int terms = kappa + 1;
  std::vector<C> a(terms + 1, C(0));
  if (n.op == Op::Div) {
    if (is_zero_coeff(c)) throw Error(ErrorKind::EvaluationFailure, "division by a series vanishing at the base point");
    C inv = C(1) / c, s = inv;
    for (int k = 0; k <= terms; ++k, s *= -inv) a[k] = s;
    return multiply(rec(0), power_series(v, a, kappa), kappa);
  }
  if constexpr (std::is_same_v<C, Rational>) {
    if (!is_zero_coeff(c))
      throw Error(ErrorKind::EvaluationFailure, "exact jet of sin/cos/exp needs an argument vanishing at the base point");
  }
  double cd = to_double(c);
  if (n.op == Op::Exp) {
    for (int k = 0; k <= terms; ++k) a[k] = factorial_inverse<C>(k);
    if constexpr (std::is_same_v<C, double>) return power_series(v, a, kappa) * std::exp(cd);
    else return power_series(v, a, kappa);
  }
  std::vector<C> sn(terms + 1, C(0)), cs(terms + 1, C(0));
  for (int k = 0; k <= terms; ++k) {
    C f = factorial_inverse<C>(k);
    if (k % 2 == 1) sn[k] = (k % 4 == 1) ? f : C(-f);
    else cs[k] = (k % 4 == 0) ? f : C(-f);
  }
  BasicPolynomial<C> sv = power_series(v, sn, kappa), cv = power_series(v, cs, kappa);
  if constexpr (std::is_same_v<C, double>) {
    if (n.op == Op::Sin) return sv * std::cos(cd) + cv * std::sin(cd);
    return cv * std::cos(cd) - sv * std::sin(cd);
  } else {
    return n.op == Op::Sin ? sv : cv;
  }
}

int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

std::string print(const ExprNode& n, const std::vector<std::string>& names) {
  auto wrap = [&](const ExprNode& child, int min_prec) {
    std::string s = print(child, names);
    return precedence(child.op) < min_prec ? "(" + s + ")" : s;
  };
  switch (n.op) {
    case Op::Const: {
      std::string s = carnot::to_string(n.value);
      return n.value < 0 || s.find('/') != std::string::npos ? "(" + s + ")" : s;
    }
    case Op::Var: return names[n.var];
    case Op::Add: return wrap(*n.args[0], 1) + " + " + wrap(*n.args[1], 2);
    case Op::Sub: return wrap(*n.args[0], 1) + " - " + wrap(*n.args[1], 2);
    case Op::Mul: return wrap(*n.args[0], 2) + "*" + wrap(*n.args[1], 3);
    case Op::Div: return wrap(*n.args[0], 2) + "/" + wrap(*n.args[1], 3);
    case Op::Neg: return "-" + wrap(*n.args[0], 3);
    case Op::Pow: return wrap(*n.args[0], 5) + "^" + std::to_string(n.exponent);
    case Op::Sin: return "sin(" + print(*n.args[0], names) + ")";
    case Op::Cos: return "cos(" + print(*n.args[0], names) + ")";
    case Op::Exp: return "exp(" + print(*n.args[0], names) + ")";
  }
  return "";
}

}  // namespace

ExprPtr parse_expression(const std::string& text, const GroupPtr& g) { return Parser(text, *g).parse(); }

std::string to_string(const ExprPtr& e, const GroupPtr& g) { return print(*e, g->variable_names()); }

ScalarField ScalarField::parse(const std::string& text, const GroupPtr& g) {
  ScalarField f;
  f.group_ = g;
  f.expr_ = parse_expression(text, g);
  return f;
}

ScalarField ScalarField::from_polynomial(const StratifiedPolynomial& p, const GroupPtr& g) {
  if (!same_grading(p.grading(), g->grading()) && !p.is_zero())
    throw Error(ErrorKind::GroupMismatch, "polynomial lives on another group");
  ExprPtr sum = make_const(Rational(0));
  bool first = true;
  for (const auto& [j, c] : p.terms()) {
    ExprPtr term = make_const(c);
    for (int i = 0; i < j.size(); ++i) {
      if (j[i] == 0) continue;
      auto v = std::make_shared<ExprNode>();
      v->op = Op::Var;
      v->var = i;
      ExprPtr factor = j[i] == 1 ? ExprPtr(v) : make_node(Op::Pow, {v}, j[i]);
      term = c == 1 && term->op == Op::Const ? factor : make_node(Op::Mul, {term, factor});
    }
    sum = first ? term : make_node(Op::Add, {sum, term});
    first = false;
  }
  ScalarField f;
  f.group_ = g;
  f.expr_ = sum;
  return f;
}

ScalarField ScalarField::from_function(const GroupPtr& g, Function fn, std::string label) {
  ScalarField f;
  f.group_ = g;
  f.fn_ = std::move(fn);
  f.label_ = std::move(label);
  return f;
}

ScalarField ScalarField::constant(const GroupPtr& g, const Rational& c) {
  ScalarField f;
  f.group_ = g;
  f.expr_ = make_const(c);
  return f;
}

double ScalarField::operator()(std::span<const double> coords) const {
  if (static_cast<int>(coords.size()) != group_->dim())
    throw Error(ErrorKind::ArityMismatch, "field evaluated at a point of the wrong dimension");
  double v = fn_ ? fn_(coords) : eval(*expr_, coords);
  if (!std::isfinite(v)) throw Error(ErrorKind::EvaluationFailure, "non-finite value of " + to_string());
  return v;
}

bool ScalarField::is_polynomial() const { return expr_ && polynomial_only(*expr_); }

StratifiedPolynomial ScalarField::polynomial() const {
  if (!expr_) throw Error(ErrorKind::NotPolynomial, "opaque field '" + label_ + "'");
  return to_poly(*expr_, group_->grading());
}

bool ScalarField::is_constant(double* value) const {
  if (!expr_ || !is_polynomial()) return false;
  StratifiedPolynomial p = polynomial();
  if (p.weighted_degree() > 0) return false;
  if (value) *value = to_double(p.constant_term());
  return true;
}

StratifiedPolynomial ScalarField::jet(const ExactElement& g0, int kappa) const {
  if (!expr_) throw Error(ErrorKind::EvaluationFailure, "no jet for opaque field '" + label_ + "'");
  std::vector<StratifiedPolynomial> vars = left_translation_map(g0);
  for (auto& v : vars) v = v.truncated(kappa);
  return series(*expr_, vars, group_->grading(), kappa).truncated(kappa);
}

NumericPolynomial ScalarField::jet(const NumericElement& g0, int kappa) const {
  if (!expr_) throw Error(ErrorKind::EvaluationFailure, "no jet for opaque field '" + label_ + "'");
  std::vector<NumericPolynomial> vars = left_translation_map(g0);
  for (auto& v : vars) v = v.truncated(kappa);
  return series(*expr_, vars, group_->grading(), kappa).truncated(kappa);
}

std::string ScalarField::to_string() const { return expr_ ? print(*expr_, group_->variable_names()) : label_; }

}  // namespace carnot
