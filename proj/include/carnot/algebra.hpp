#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>

#include "carnot/error.hpp"
#include "carnot/polynomial.hpp"
#include "carnot/rational.hpp"

namespace carnot {

template <class S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

/// Basis vector e_{j,s}, both 1-based as in the group-definition file.
struct BasisLabel {
  int layer = 1;
  int slot = 1;
  bool operator==(const BasisLabel&) const = default;
};

/// Sparse linear combination of basis vectors, indexed by flat basis position.
using SparseCombination = std::vector<std::pair<int, Rational>>;

/// One bracket-table entry [e_left, e_right] = result, flat indices.
struct BracketEntry {
  int left = 0;
  int right = 0;
  SparseCombination result;
};

/// A stratified nilpotent Lie algebra g_1 + ... + g_r with exact structure
/// constants. Only ordered pairs a < b are stored; [e_b, e_a] = -[e_a, e_b].
class Stratification {
 public:
  const std::string& name() const { return name_; }
  const std::vector<int>& layer_dims() const { return layer_dims_; }
  int dim() const { return dim_; }
  int step() const { return static_cast<int>(layer_dims_.size()); }
  int horizontal_dim() const { return layer_dims_.front(); }
  int homogeneous_dimension() const;

  /// 1-based layer of flat basis index i.
  int layer_of(int i) const { return layer_of_[i]; }
  int flat_index(BasisLabel label) const;
  BasisLabel label_of(int i) const;
  /// Flat index of x_m, the last layer-1 coordinate.
  int distinguished() const { return horizontal_dim() - 1; }

  /// [e_a, e_b] for any ordered pair of flat indices.
  SparseCombination basis_bracket(int a, int b) const;
  const std::map<std::pair<int, int>, SparseCombination>& structure_constants() const {
    return constants_;
  }

  const GradingPtr& grading() const { return grading_; }
  /// Grading of the 2N-variable ring (p, p') the group law lives in.
  const GradingPtr& doubled_grading() const { return doubled_; }
  const std::vector<std::string>& variable_names() const { return grading_->names; }

  /// Bilinear bracket on coordinate vectors over any commutative ring R.
  template <class R>
  std::vector<R> bracket_coords(std::span<const R> a, std::span<const R> b) const;

  bool operator==(const Stratification& o) const {
    return layer_dims_ == o.layer_dims_ && constants_ == o.constants_;
  }

 private:
  friend std::shared_ptr<const Stratification> build_algebra(const std::vector<int>&,
                                                             const std::vector<BracketEntry>&,
                                                             const std::string&,
                                                             const std::vector<std::string>&);
  Stratification() = default;

  std::string name_;
  std::vector<int> layer_dims_;
  int dim_ = 0;
  std::vector<int> layer_of_;
  std::vector<int> layer_offset_;
  std::map<std::pair<int, int>, SparseCombination> constants_;
  std::vector<std::tuple<int, int, int, double>> dense_terms_;
  GradingPtr grading_;
  GradingPtr doubled_;
};

using GroupPtr = std::shared_ptr<const Stratification>;

inline bool same_group(const GroupPtr& a, const GroupPtr& b) {
  return a == b || (a && b && *a == *b);
}

/// Validates and returns the algebra. Entries may be listed in either
/// orientation; both orientations present must agree by antisymmetry.
/// Throws JacobiViolation, NotGraded, NotStratified, AntisymmetryViolation.
GroupPtr build_algebra(const std::vector<int>& layer_dims, const std::vector<BracketEntry>& table,
                       const std::string& name = "",
                       const std::vector<std::string>& names = {});

/// heisenberg(n) / heisenbergN, engel, free_step2(m) / free_step2_m.
GroupPtr builtin_group(const std::string& name);

GroupPtr heisenberg(int n);
GroupPtr engel();
GroupPtr free_step2(int m);

/// An element of the Lie algebra in the basis e_{1,1}, ..., e_{r,m_r}.
template <class S>
struct AlgebraElement {
  GroupPtr algebra;
  Vector<S> coords;
};

template <class S>
AlgebraElement<S> basis_element(const GroupPtr& g, int flat_index) {
  Vector<S> v = Vector<S>::Zero(g->dim());
  v(flat_index) = S(1);
  return {g, v};
}

template <class S>
AlgebraElement<S> bracket(const AlgebraElement<S>& a, const AlgebraElement<S>& b) {
  if (!same_group(a.algebra, b.algebra)) throw Error(ErrorKind::AlgebraMismatch, "bracket across algebras");
  auto r = a.algebra->template bracket_coords<S>(std::span<const S>(a.coords.data(), a.coords.size()),
                                                 std::span<const S>(b.coords.data(), b.coords.size()));
  return {a.algebra, Eigen::Map<Vector<S>>(r.data(), static_cast<Eigen::Index>(r.size()))};
}

template <class R>
std::vector<R> Stratification::bracket_coords(std::span<const R> a, std::span<const R> b) const {
  if (static_cast<int>(a.size()) != dim_ || static_cast<int>(b.size()) != dim_)
    throw Error(ErrorKind::ArityMismatch, "bracket operand length");
  std::vector<R> out(dim_, zero_like(a[0]));
  if constexpr (std::is_same_v<R, double>) {
    for (const auto& [i, j, c, coef] : dense_terms_) {
      double w = a[i] * b[j] - a[j] * b[i];
      out[c] += coef * w;
    }
  } else {
    for (const auto& [key, comb] : constants_) {
      auto [i, j] = key;
      R w = a[i] * b[j] - a[j] * b[i];
      for (const auto& [c, coef] : comb) out[c] += w * coef;
    }
  }
  return out;
}

}  // namespace carnot
