#include "carnot/diffop.hpp"

#include <mutex>

#include <Eigen/Eigenvalues>

namespace carnot {

DiffOperator::DiffOperator(GroupPtr g) : group(std::move(g)), zeroth(group->grading()) {}

void DiffOperator::add_second(int a, int b, const StratifiedPolynomial& c) {
  if (c.is_zero()) return;
  auto key = std::minmax(a, b);
  auto [it, inserted] = second.try_emplace({key.first, key.second}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) second.erase(it);
  }
}

void DiffOperator::add_first(int a, const StratifiedPolynomial& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = first.try_emplace(a, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) first.erase(it);
  }
}

DiffOperator& DiffOperator::operator+=(const DiffOperator& o) {
  if (!same_group(group, o.group)) throw Error(ErrorKind::GroupMismatch, "operator sum across groups");
  for (const auto& [ab, c] : o.second) add_second(ab.first, ab.second, c);
  for (const auto& [a, c] : o.first) add_first(a, c);
  zeroth += o.zeroth;
  return *this;
}

DiffOperator DiffOperator::scaled(const StratifiedPolynomial& c) const {
  DiffOperator r(group);
  for (const auto& [ab, k] : second) r.add_second(ab.first, ab.second, c * k);
  for (const auto& [a, k] : first) r.add_first(a, c * k);
  r.zeroth = c * zeroth;
  return r;
}

bool DiffOperator::operator==(const DiffOperator& o) const {
  return second == o.second && first == o.first && zeroth == o.zeroth;
}

const std::vector<VectorField>& left_invariant_fields(const GroupPtr& g) {
  static std::mutex mutex;
  static std::map<const Stratification*, std::pair<GroupPtr, std::vector<VectorField>>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(g.get()); it != cache.end()) return it->second.second;
  }
  const GroupLawMap& law = group_law_polynomials(g);
  const int n = g->dim();
  const GradingPtr& target = g->grading();
  std::vector<VectorField> fields;
  for (int b = 0; b < n; ++b) {
    VectorField x{g, "", {}};
    BasisLabel l = g->label_of(b);
    x.label = l.layer == 1 ? "X" + std::to_string(l.slot)
                           : "X" + std::to_string(l.layer) + "_" + std::to_string(l.slot);
    for (int c = 0; c < n; ++c) {
      // d/dt of component c at p' = t e_b, t = 0: derivative in p'_b, then p' = 0.
      StratifiedPolynomial d = law.components[c].derivative(n + b);
      StratifiedPolynomial coef(target);
      for (const auto& [j, v] : d.terms()) {
        bool at_zero = true;
        for (int i = n; i < 2 * n; ++i)
          if (j[i] > 0) at_zero = false;
        if (!at_zero) continue;
        coef.add_term(MultiIndex(*target, std::vector<int>(j.exponents().begin(), j.exponents().begin() + n)), v);
      }
      x.coefficients.push_back(std::move(coef));
    }
    fields.push_back(std::move(x));
  }
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.try_emplace(g.get(), g, std::move(fields));
  return it->second.second;
}

VectorField field_bracket(const VectorField& x, const VectorField& y) {
  if (!same_group(x.group, y.group)) throw Error(ErrorKind::GroupMismatch, "bracket of fields across groups");
  VectorField r{x.group, "[" + x.label + "," + y.label + "]", {}};
  for (std::size_t c = 0; c < x.coefficients.size(); ++c)
    r.coefficients.push_back(apply_field(x, y.coefficients[c]) - apply_field(y, x.coefficients[c]));
  return r;
}

DiffOperator compose(const VectorField& x, const VectorField& y) {
  if (!same_group(x.group, y.group)) throw Error(ErrorKind::GroupMismatch, "composition across groups");
  DiffOperator op(x.group);
  const int n = static_cast<int>(x.coefficients.size());
  for (int a = 0; a < n; ++a) {
    if (x.coefficients[a].is_zero()) continue;
    for (int b = 0; b < n; ++b)
      if (!y.coefficients[b].is_zero()) op.add_second(a, b, x.coefficients[a] * y.coefficients[b]);
  }
  for (int b = 0; b < n; ++b) op.add_first(b, apply_field(x, y.coefficients[b]));
  return op;
}

DiffOperator sub_laplacian(const GroupPtr& g) {
  const auto& fields = left_invariant_fields(g);
  DiffOperator op(g);
  for (int i = 0; i < g->horizontal_dim(); ++i) op += compose(fields[i], fields[i]);
  return op;
}

CoefficientMatrix identity_matrix(const GroupPtr& g) {
  const int m = g->horizontal_dim();
  CoefficientMatrix a(m, std::vector<StratifiedPolynomial>(m, StratifiedPolynomial(g->grading())));
  for (int i = 0; i < m; ++i) a[i][i] = StratifiedPolynomial::constant(g->grading(), Rational(1));
  return a;
}

DiffOperator operator_from_matrix(const CoefficientMatrix& a, const GroupPtr& g, std::optional<double> lambda) {
  const int m = g->horizontal_dim();
  if (static_cast<int>(a.size()) != m)
    throw Error(ErrorKind::ArityMismatch, "coefficient matrix must be " + std::to_string(m) + "x" + std::to_string(m));
  for (const auto& row : a)
    if (static_cast<int>(row.size()) != m) throw Error(ErrorKind::ArityMismatch, "coefficient matrix is not square");
  bool constant = true;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (!same_grading(a[i][j].grading(), g->grading()) && !a[i][j].is_zero())
        throw Error(ErrorKind::GroupMismatch, "coefficient on a different group");
      if (!(a[i][j] == a[j][i]))
        throw Error(ErrorKind::NotSymmetric, "a(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                                 ") differs from its transpose entry");
      if (a[i][j].weighted_degree() > 0) constant = false;
    }
  if (constant) {
    Eigen::MatrixXd dense(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) dense(i, j) = to_double(a[i][j].constant_term());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense, Eigen::EigenvaluesOnly);
    double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
    constexpr double slack = 1e-12;
    if (lo <= 0 || (lambda && (lo < *lambda - slack || hi > 1.0 / *lambda + slack)))
      throw Error(ErrorKind::NotElliptic, "spectrum [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                              "] outside the ellipticity band");
  }
  const auto& fields = left_invariant_fields(g);
  DiffOperator op(g);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (!a[i][j].is_zero()) op += compose(fields[i], fields[j]).scaled(a[i][j]);
  return op;
}

}  // namespace carnot
