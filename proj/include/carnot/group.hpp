#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "carnot/algebra.hpp"
#include "carnot/polynomial.hpp"

namespace carnot {

/// A point p = exp(xi) in exponential coordinates of the first kind.
template <class S>
struct GroupElement {
  GroupPtr group;
  Vector<S> coords;

  int dim() const { return static_cast<int>(coords.size()); }
  std::span<const S> span() const { return {coords.data(), static_cast<std::size_t>(coords.size())}; }
};

using ExactElement = GroupElement<Rational>;
using NumericElement = GroupElement<double>;

template <class S>
GroupElement<S> make_element(const GroupPtr& g, std::vector<S> coords) {
  if (static_cast<int>(coords.size()) != g->dim())
    throw Error(ErrorKind::ArityMismatch, "element has " + std::to_string(coords.size()) +
                                              " coordinates, group dimension is " + std::to_string(g->dim()));
  return {g, Eigen::Map<Vector<S>>(coords.data(), static_cast<Eigen::Index>(coords.size()))};
}

template <class S>
GroupElement<S> identity(const GroupPtr& g) {
  return {g, Vector<S>::Zero(g->dim())};
}

template <class S>
GroupElement<S> inverse(const GroupElement<S>& p) {
  return {p.group, -p.coords};
}

template <class D, class S>
GroupElement<D> element_cast(const GroupElement<S>& p) {
  Vector<D> v(p.coords.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if constexpr (std::is_same_v<D, S>) v(i) = p.coords(i);
    else if constexpr (std::is_same_v<S, Rational>) v(i) = scalar_cast<D>(p.coords(i));
    else v(i) = from_double(p.coords(i));
  }
  return {p.group, v};
}

/// Dynkin coefficients of log(e^X e^Y) up to word length `max_weight`. Each word
/// is a sequence over {0 = X, 1 = Y} standing for the right-nested bracket
/// [w1, [w2, ..., [w_{n-1}, w_n]]]. Memoized per weight.
struct BchWord {
  std::vector<int> letters;
  Rational coeff;
};
const std::vector<BchWord>& bch_words(int max_weight);

/// BCH on coordinate vectors over any commutative ring R (scalars or
/// polynomials); finite because brackets of weight > step vanish.
template <class R>
std::vector<R> bch_coords(const Stratification& g, std::span<const R> a, std::span<const R> b) {
  const int n = g.dim();
  std::vector<R> out(a.begin(), a.end());
  for (int i = 0; i < n; ++i) out[i] += b[i];
  for (const auto& w : bch_words(g.step())) {
    if (w.letters.size() < 2) continue;
    auto letter = [&](int l) { return l == 0 ? a : b; };
    std::vector<R> acc(letter(w.letters.back()).begin(), letter(w.letters.back()).end());
    for (int k = static_cast<int>(w.letters.size()) - 2; k >= 0; --k)
      acc = g.bracket_coords<R>(letter(w.letters[k]), std::span<const R>(acc));
    for (int i = 0; i < n; ++i) {
      if constexpr (std::is_same_v<R, double>) out[i] += acc[i] * to_double(w.coeff);
      else out[i] += acc[i] * w.coeff;
    }
  }
  return out;
}

/// Fast path for doubles: the group law compiled from its polynomial form
/// (see group_law_polynomials).
std::vector<double> compiled_product(const GroupPtr& g, std::span<const double> a,
                                     std::span<const double> b);

/// p o q.
template <class S>
GroupElement<S> bch_product(const GroupElement<S>& p, const GroupElement<S>& q) {
  if (!same_group(p.group, q.group)) throw Error(ErrorKind::GroupMismatch, "product across groups");
  std::vector<S> r;
  if constexpr (std::is_same_v<S, double>) r = compiled_product(p.group, p.span(), q.span());
  else r = bch_coords<S>(*p.group, p.span(), q.span());
  return make_element<S>(p.group, std::move(r));
}

/// delta_lambda: layer j scaled by lambda^j.
template <class S>
GroupElement<S> dilate(const S& lambda, const GroupElement<S>& p) {
  if (!(lambda > S(0))) throw Error(ErrorKind::NonpositiveLambda, "dilation factor must be positive");
  GroupElement<S> r = p;
  for (int i = 0; i < p.dim(); ++i)
    for (int k = 0; k < p.group->layer_of(i); ++k) r.coords(i) *= lambda;
  return r;
}

/// Exponent 2 r! of the gauge; |p|^{2r!} is a polynomial in the coordinates.
int gauge_exponent(const Stratification& g);

/// |p|^{2 r!} = sum_j ||xi_j||^{2 r!/j}, exact for exact coordinates.
template <class S>
S gauge_power(const Stratification& g, std::span<const S> coords) {
  const int e = gauge_exponent(g);
  S total = S(0);
  int i = 0;
  for (int j = 1; j <= g.step(); ++j) {
    S sq = S(0);
    for (int s = 0; s < g.layer_dims()[j - 1]; ++s, ++i) sq += coords[i] * coords[i];
    S term = S(1);
    for (int k = 0; k < e / (2 * j); ++k) term *= sq;
    total += term;
  }
  return total;
}

template <class S>
S gauge_power(const GroupElement<S>& p) {
  return gauge_power<S>(*p.group, p.span());
}

/// Homogeneous gauge |p|, always floating.
template <class S>
double gauge(const GroupElement<S>& p) {
  double pw = to_double(gauge_power(p));
  return std::pow(pw, 1.0 / gauge_exponent(*p.group));
}

/// d(p, q) = |q^{-1} o p|.
template <class S>
double gauge_distance(const GroupElement<S>& p, const GroupElement<S>& q) {
  if (!same_group(p.group, q.group)) throw Error(ErrorKind::GroupMismatch, "distance across groups");
  return gauge(bch_product(inverse(q), p));
}

/// Euclidean distance in exponential coordinates (the Riemannian d_e).
template <class S>
double euclidean_distance(const GroupElement<S>& p, const GroupElement<S>& q) {
  double s = 0;
  for (int i = 0; i < p.dim(); ++i) {
    double d = to_double(p.coords(i)) - to_double(q.coords(i));
    s += d * d;
  }
  return std::sqrt(s);
}

inline int homogeneous_dimension(const Stratification& g) { return g.homogeneous_dimension(); }

/// The group law p o p' as N polynomials in the 2N coordinates (p, p').
struct GroupLawMap {
  GroupPtr group;
  std::vector<StratifiedPolynomial> components;
};

/// Symbolic BCH on generic coordinates; computed once per group and cached.
const GroupLawMap& group_law_polynomials(const GroupPtr& g);

/// Polynomial in N variables with P'(q) = P(g o q).
StratifiedPolynomial left_translate(const StratifiedPolynomial& p, const ExactElement& g);

/// The N components of q -> g o q as polynomials in q.
std::vector<StratifiedPolynomial> left_translation_map(const ExactElement& g);
std::vector<NumericPolynomial> left_translation_map(const NumericElement& g);

/// P(p). Checks that P lives on the group of p.
template <class S>
S evaluate(const StratifiedPolynomial& poly, const GroupElement<S>& p) {
  if (!same_grading(poly.grading(), p.group->grading()))
    throw Error(ErrorKind::GroupMismatch, "polynomial and point live on different groups");
  return poly.template evaluate<S>(p.span());
}

/// Comma-separated coordinates in layer order, rationals as "num/den".
std::string format_element(const ExactElement& p);
std::string format_element(const NumericElement& p);
ExactElement parse_element(const GroupPtr& g, const std::string& text);

/// Flat map for the hot loop p -> p o exp(v) with v horizontal: compiled from
/// the group law with the second argument restricted to layer 1. Holds scratch
/// buffers, so each worker thread uses its own copy.
class HorizontalStepper {
 public:
  explicit HorizontalStepper(const GroupPtr& g);
  /// In-place p <- p o exp(sum_i v_i e_i).
  void step(std::span<double> p, std::span<const double> v) const;

 private:
  struct Term {
    double coeff;
    std::vector<std::pair<int, int>> factors;  // (variable, power)
  };
  int n_ = 0;
  int m_ = 0;
  std::vector<std::vector<Term>> comps_;
  mutable std::vector<double> vars_, out_;
};

}  // namespace carnot
