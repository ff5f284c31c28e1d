#include "carnot/linsolve.hpp"

namespace carnot {

RowEchelon row_reduce(RationalMatrix m) {
  RowEchelon out;
  const Eigen::Index rows = m.rows(), cols = m.cols();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index pivot = -1;
    for (Eigen::Index i = r; i < rows; ++i)
      if (m(i, c) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != r) m.row(pivot).swap(m.row(r));
    Rational inv = Rational(1) / m(r, c);
    for (Eigen::Index j = c; j < cols; ++j) m(r, j) *= inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (Eigen::Index j = c; j < cols; ++j)
        if (m(r, j) != 0) m(i, j) -= f * m(r, j);
    }
    out.pivot_cols.push_back(static_cast<int>(c));
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

int exact_rank(const RationalMatrix& m) { return row_reduce(m).rank(); }

std::vector<RationalVector> nullspace(const RationalMatrix& m) {
  RowEchelon e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : e.pivot_cols) is_pivot[c] = true;
  std::vector<RationalVector> basis;
  for (Eigen::Index free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    RationalVector v = RationalVector::Zero(m.cols());
    v(free) = 1;
    for (int k = 0; k < e.rank(); ++k) v(e.pivot_cols[k]) = -e.reduced(k, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

ExactSolution solve_exact(const RationalMatrix& m, const RationalVector& b) {
  RationalMatrix aug(m.rows(), m.cols() + 1);
  aug.leftCols(m.cols()) = m;
  aug.col(m.cols()) = b;
  RowEchelon e = row_reduce(aug);
  ExactSolution out;
  if (!e.pivot_cols.empty() && e.pivot_cols.back() == m.cols()) {
    out.status = SolveStatus::Inconsistent;
    return out;
  }
  if (e.rank() < m.cols()) {
    out.status = SolveStatus::Underdetermined;
    return out;
  }
  out.x = RationalVector::Zero(m.cols());
  for (int k = 0; k < e.rank(); ++k) out.x(e.pivot_cols[k]) = e.reduced(k, m.cols());
  return out;
}

}  // namespace carnot
