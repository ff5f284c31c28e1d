#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <type_traits>
#include <string>
#include <vector>

#include "carnot/error.hpp"
#include "carnot/rational.hpp"

namespace carnot {

/// Variable weights of a polynomial ring graded by weighted degree. Built from a
/// Stratification (N variables) or doubled for the group law (2N variables).
struct Grading {
  std::vector<int> weights;
  /// Variable whose exponent is the secondary sort key (the last layer-1 slot).
  int distinguished = 0;
  std::vector<std::string> names;

  int nvars() const { return static_cast<int>(weights.size()); }
  bool operator==(const Grading& other) const {
    return weights == other.weights && distinguished == other.distinguished;
  }
};

using GradingPtr = std::shared_ptr<const Grading>;

inline bool same_grading(const GradingPtr& a, const GradingPtr& b) {
  return a == b || (a && b && *a == *b);
}

/// Exponent vector with its weighted degree and distinguished exponent cached;
/// ordering is (weighted degree, distinguished exponent, exponents descending lex).
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(const Grading& g, std::vector<int> exponents);
  static MultiIndex zero(const Grading& g) { return MultiIndex(g, std::vector<int>(g.nvars(), 0)); }

  const std::vector<int>& exponents() const { return exps_; }
  int operator[](int i) const { return exps_[i]; }
  int size() const { return static_cast<int>(exps_.size()); }
  int weighted_degree() const { return wdeg_; }
  int distinguished() const { return dist_; }
  /// Plain length |J|.
  int length() const;

  bool operator==(const MultiIndex& o) const { return exps_ == o.exps_; }
  bool operator<(const MultiIndex& o) const {
    if (wdeg_ != o.wdeg_) return wdeg_ < o.wdeg_;
    if (dist_ != o.dist_) return dist_ < o.dist_;
    return exps_ > o.exps_;
  }

 private:
  std::vector<int> exps_;
  int wdeg_ = 0;
  int dist_ = 0;
};

/// Weighted degree d(J) = sum of weight * exponent.
inline int weighted_degree(const MultiIndex& j) { return j.weighted_degree(); }

/// All multi-indices of weighted degree <= kappa in the global monomial order.
std::vector<MultiIndex> monomial_basis(const Grading& g, int kappa);

inline constexpr int kZeroDegree = std::numeric_limits<int>::min();

template <class C>
inline bool is_zero_coeff(const C& c) {
  return c == C(0);
}

/// Sparse polynomial over coefficient ring C, keyed by MultiIndex in the global
/// monomial order. Zero coefficients are never stored.
template <class C>
class BasicPolynomial {
 public:
  using Coeff = C;
  using Terms = std::map<MultiIndex, C>;

  BasicPolynomial() = default;
  explicit BasicPolynomial(GradingPtr g) : grading_(std::move(g)) {}

  static BasicPolynomial constant(GradingPtr g, const C& c) {
    BasicPolynomial p(g);
    p.add_term(MultiIndex::zero(*p.grading_), c);
    return p;
  }
  static BasicPolynomial variable(GradingPtr g, int var, const C& c = C(1)) {
    std::vector<int> e(g->nvars(), 0);
    e.at(var) = 1;
    BasicPolynomial p(g);
    p.add_term(MultiIndex(*g, std::move(e)), c);
    return p;
  }
  static BasicPolynomial monomial(GradingPtr g, std::vector<int> exps, const C& c = C(1)) {
    if (static_cast<int>(exps.size()) != g->nvars())
      throw Error(ErrorKind::ArityMismatch, "monomial exponent length");
    BasicPolynomial p(g);
    p.add_term(MultiIndex(*g, std::move(exps)), c);
    return p;
  }

  const GradingPtr& grading() const { return grading_; }
  int nvars() const { return grading_ ? grading_->nvars() : 0; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Max weighted degree over stored terms; kZeroDegree for the zero polynomial.
  int weighted_degree() const {
    return terms_.empty() ? kZeroDegree : terms_.rbegin()->first.weighted_degree();
  }
  int min_degree() const {
    return terms_.empty() ? std::numeric_limits<int>::max() : terms_.begin()->first.weighted_degree();
  }

  C coefficient(const MultiIndex& j) const {
    auto it = terms_.find(j);
    return it == terms_.end() ? C(0) : it->second;
  }
  C constant_term() const {
    if (terms_.empty()) return C(0);
    const auto& [j, c] = *terms_.begin();
    return j.weighted_degree() == 0 ? c : C(0);
  }

  void add_term(const MultiIndex& j, const C& c) {
    if (is_zero_coeff(c)) return;
    auto [it, inserted] = terms_.try_emplace(j, c);
    if (!inserted) {
      it->second += c;
      if (is_zero_coeff(it->second)) terms_.erase(it);
    }
  }

  BasicPolynomial& operator+=(const BasicPolynomial& o) {
    adopt(o);
    for (const auto& [j, c] : o.terms_) add_term(j, c);
    return *this;
  }
  BasicPolynomial& operator-=(const BasicPolynomial& o) {
    adopt(o);
    for (const auto& [j, c] : o.terms_) add_term(j, -c);
    return *this;
  }
  BasicPolynomial& operator*=(const C& s) {
    if (is_zero_coeff(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [j, c] : terms_) c *= s;
    return *this;
  }
  BasicPolynomial operator-() const {
    BasicPolynomial r = *this;
    for (auto& [j, c] : r.terms_) c = -c;
    return r;
  }

  friend BasicPolynomial operator+(BasicPolynomial a, const BasicPolynomial& b) { return a += b; }
  friend BasicPolynomial operator-(BasicPolynomial a, const BasicPolynomial& b) { return a -= b; }
  friend BasicPolynomial operator*(BasicPolynomial a, const C& s) { return a *= s; }
  friend BasicPolynomial operator*(const C& s, BasicPolynomial a) { return a *= s; }
  friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
    return multiply(a, b, std::numeric_limits<int>::max());
  }
  BasicPolynomial& operator*=(const BasicPolynomial& o) { return *this = *this * o; }

  bool operator==(const BasicPolynomial& o) const { return terms_ == o.terms_; }

  /// Product with every term of weighted degree > kappa dropped.
  friend BasicPolynomial multiply(const BasicPolynomial& a, const BasicPolynomial& b, int kappa) {
    const GradingPtr& g = a.grading_ ? a.grading_ : b.grading_;
    if (a.grading_ && b.grading_ && !same_grading(a.grading_, b.grading_))
      throw Error(ErrorKind::GroupMismatch, "polynomial product across gradings");
    BasicPolynomial r(g);
    if (a.is_zero() || b.is_zero()) return r;
    std::vector<int> e(g->nvars());
    for (const auto& [ja, ca] : a.terms_) {
      if (ja.weighted_degree() + b.min_degree() > kappa) break;
      for (const auto& [jb, cb] : b.terms_) {
        if (ja.weighted_degree() + jb.weighted_degree() > kappa) break;
        for (int i = 0; i < g->nvars(); ++i) e[i] = ja[i] + jb[i];
        r.add_term(MultiIndex(*g, e), ca * cb);
      }
    }
    return r;
  }

  /// Partial derivative with respect to variable `var`.
  BasicPolynomial derivative(int var) const {
    BasicPolynomial r(grading_);
    for (const auto& [j, c] : terms_) {
      int k = j[var];
      if (k == 0) continue;
      std::vector<int> e = j.exponents();
      e[var] -= 1;
      r.add_term(MultiIndex(*grading_, std::move(e)), c * C(k));
    }
    return r;
  }

  /// Drops every term of weighted degree > kappa.
  BasicPolynomial truncated(int kappa) const {
    BasicPolynomial r(grading_);
    for (const auto& [j, c] : terms_) {
      if (j.weighted_degree() > kappa) break;
      r.terms_.emplace_hint(r.terms_.end(), j, c);
    }
    return r;
  }

  /// Only the terms of weighted degree exactly kappa.
  BasicPolynomial homogeneous_part(int kappa) const {
    BasicPolynomial r(grading_);
    for (const auto& [j, c] : terms_)
      if (j.weighted_degree() == kappa) r.terms_.emplace_hint(r.terms_.end(), j, c);
    return r;
  }

  template <class S>
  S evaluate(std::span<const S> point) const {
    if (static_cast<int>(point.size()) != nvars())
      throw Error(ErrorKind::ArityMismatch,
                  "evaluation point has " + std::to_string(point.size()) + " coordinates, expected " +
                      std::to_string(nvars()));
    S total = S(0);
    for (const auto& [j, c] : terms_) {
      S term = scalar_as<S>(c);
      for (int i = 0; i < nvars(); ++i)
        for (int k = 0; k < j[i]; ++k) term *= point[i];
      total += term;
    }
    return total;
  }

  template <class D>
  BasicPolynomial<D> cast() const {
    BasicPolynomial<D> r(grading_);
    for (const auto& [j, c] : terms_) r.add_term(j, scalar_as<D>(c));
    return r;
  }

  /// Re-expresses the polynomial over a different (content-equal) grading.
  BasicPolynomial regraded(GradingPtr g) const {
    if (!same_grading(g, grading_)) throw Error(ErrorKind::GroupMismatch, "regrade across gradings");
    BasicPolynomial r(std::move(g));
    r.terms_ = terms_;
    return r;
  }

 private:
  template <class D, class Src>
  static D scalar_as(const Src& c) {
    if constexpr (std::is_same_v<D, Src>) {
      return c;
    } else if constexpr (std::is_same_v<Src, Rational>) {
      return scalar_cast<D>(c);
    } else if constexpr (std::is_same_v<D, Rational>) {
      return from_double(c);
    } else {
      return static_cast<D>(c);
    }
  }

  void adopt(const BasicPolynomial& o) {
    if (!grading_) {
      grading_ = o.grading_;
    } else if (o.grading_ && !same_grading(grading_, o.grading_)) {
      throw Error(ErrorKind::GroupMismatch, "polynomial sum across gradings");
    }
  }

  GradingPtr grading_;
  Terms terms_;
};

using StratifiedPolynomial = BasicPolynomial<Rational>;
using NumericPolynomial = BasicPolynomial<double>;

template <class C>
BasicPolynomial<C> truncate(const BasicPolynomial<C>& p, int kappa) {
  return p.truncated(kappa);
}

/// Coefficient of z^J scaled by lambda^{d(J)}, i.e. P composed with delta_lambda.
template <class C>
BasicPolynomial<C> dilate_poly(const BasicPolynomial<C>& p, const C& lambda) {
  if (!(lambda > C(0))) throw Error(ErrorKind::NonpositiveLambda, "dilation factor must be positive");
  BasicPolynomial<C> r(p.grading());
  for (const auto& [j, c] : p.terms()) {
    C s = c;
    for (int k = 0; k < j.weighted_degree(); ++k) s *= lambda;
    r.add_term(j, s);
  }
  return r;
}

/// P(s_1, ..., s_n) with substituted polynomials, truncated at weighted degree
/// kappa. Truncating before substitution is sound whenever every substituted
/// polynomial has zero constant term.
template <class C>
BasicPolynomial<C> substitute(const BasicPolynomial<C>& p, std::span<const BasicPolynomial<C>> subs,
                              const GradingPtr& target, int kappa = std::numeric_limits<int>::max()) {
  if (static_cast<int>(subs.size()) != p.nvars())
    throw Error(ErrorKind::ArityMismatch, "substitution arity");
  std::vector<std::vector<BasicPolynomial<C>>> powers(subs.size());
  auto power = [&](int var, int k) -> const BasicPolynomial<C>& {
    auto& cache = powers[var];
    if (cache.empty()) cache.push_back(BasicPolynomial<C>::constant(target, C(1)));
    while (static_cast<int>(cache.size()) <= k) cache.push_back(multiply(cache.back(), subs[var], kappa));
    return cache[k];
  };
  BasicPolynomial<C> result(target);
  for (const auto& [j, c] : p.terms()) {
    BasicPolynomial<C> term = BasicPolynomial<C>::constant(target, c);
    for (int i = 0; i < p.nvars() && !term.is_zero(); ++i)
      if (j[i] > 0) term = multiply(term, power(i, j[i]), kappa);
    result += term;
  }
  return result;
}

inline Rational zero_like(const Rational&) { return Rational(0); }
inline double zero_like(double) { return 0.0; }
template <class C>
BasicPolynomial<C> zero_like(const BasicPolynomial<C>& x) {
  return BasicPolynomial<C>(x.grading());
}

/// Human-readable form such as "1/2*x*y - t".
std::string to_string(const StratifiedPolynomial& p);
std::string to_string(const NumericPolynomial& p);

}  // namespace carnot
