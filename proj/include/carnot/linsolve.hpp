#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>

#include "carnot/rational.hpp"

namespace carnot {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

/// Reduced row echelon form over the rationals.
struct RowEchelon {
  RationalMatrix reduced;
  std::vector<int> pivot_cols;
  int rank() const { return static_cast<int>(pivot_cols.size()); }
};

RowEchelon row_reduce(RationalMatrix m);

int exact_rank(const RationalMatrix& m);

/// Basis of {x : m x = 0}, one vector per non-pivot column.
std::vector<RationalVector> nullspace(const RationalMatrix& m);

enum class SolveStatus { Unique, Inconsistent, Underdetermined };

struct ExactSolution {
  SolveStatus status = SolveStatus::Unique;
  RationalVector x;
};

/// Solves m x = b exactly. Redundant rows are checked for consistency.
ExactSolution solve_exact(const RationalMatrix& m, const RationalVector& b);

}  // namespace carnot
