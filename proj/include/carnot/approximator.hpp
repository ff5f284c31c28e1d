#pragma once

#include <map>
#include <vector>

#include "carnot/diffop.hpp"
#include "carnot/domain.hpp"
#include "carnot/linsolve.hpp"
#include "carnot/taylor.hpp"

namespace carnot {

/// Jet of the boundary distance d = grad_norm * x_m + P_d + d_0 at e,
/// truncated at weighted degree `order`; d_0 is never represented.
struct DistanceModel {
  Rational grad_norm;
  StratifiedPolynomial poly_part;
  int order = 0;
  /// False when sqrt(1 + |grad_y h(0)|^2) is irrational: grad_norm and
  /// poly_part then carry its double rounding.
  bool exact = true;
};

/// d = x_m.
DistanceModel flat_distance(const GroupPtr& g, int k);

/// Euclidean distance to the graph boundary of `domain` expanded at e. Exact
/// for polynomial h (or series-expandable expressions); otherwise the jet of h
/// is taken in floating point and rounded to rationals.
DistanceModel distance_expansion(const Domain& domain, int k);

struct ApproxSystem {
  GroupPtr group;
  int k = 0;
  std::vector<MultiIndex> rows;
  std::vector<MultiIndex> cols;
  RationalMatrix matrix;
  /// Columns with no x_m factor; their coefficients are chosen freely.
  std::vector<int> free_cols;
  /// Column J + m for row J.
  std::vector<int> determined_col;
};

/// Column J holds the Taylor coefficients (degree <= k-2) of L(d z^J).
ApproxSystem assemble_system(const DiffOperator& op, const DistanceModel& d, int k);

enum class SolveMode { Triangular, General };

using FreeAssignment = std::map<MultiIndex, Rational>;

struct ApproxResult {
  StratifiedPolynomial p;
  /// X^I (L(d P) - f)(e) for |I| <= k-2.
  std::map<Word, Rational> residuals;
  FreeAssignment free_assignment;
};

/// Coefficients of P solving the system for target f (truncated at k-2).
/// Triangular mode is forward substitution in the monomial order and fails
/// with OffTriangular on entries above the diagonal; general mode eliminates.
ApproxResult solve_approximating(const ApproxSystem& system, const DiffOperator& op, const DistanceModel& d,
                                 const StratifiedPolynomial& f, const FreeAssignment& free = {},
                                 SolveMode mode = SolveMode::Triangular);
ApproxResult solve_approximating(const DiffOperator& op, const DistanceModel& d, const StratifiedPolynomial& f,
                                 int k, const FreeAssignment& free = {}, SolveMode mode = SolveMode::Triangular);

/// Independent check: I -> X^I (L(d P) - f)(e) for every |I| <= k-2.
std::map<Word, Rational> verify_approximating(const DiffOperator& op, const DistanceModel& d,
                                              const StratifiedPolynomial& p, const StratifiedPolynomial& f, int k);

/// Basis of {Q of degree <= kappa : Delta_H(x_m Q) = 0}, one element per free
/// column, each re-verified.
std::vector<StratifiedPolynomial> harmonic_companions(const GroupPtr& g, int kappa);

/// One scale of the rescaling driver: Omega_sigma = delta_{1/sigma}(Omega).
struct ScaleStep {
  Rational sigma;
  DistanceModel distance;
  ApproxResult result;
};

/// For polynomial graphs: h_sigma(x', y) = h(delta_sigma(x', y)) / sigma and
/// the rescaled problem sigma^2 f(delta_sigma p) solved at every sigma.
std::vector<ScaleStep> multiscale_approximation(const Domain& domain, const CoefficientMatrix& a,
                                                const StratifiedPolynomial& f, int k,
                                                const std::vector<Rational>& sigmas,
                                                SolveMode mode = SolveMode::General);

}  // namespace carnot
