#pragma once

#include <map>
#include <optional>
#include <vector>

#include "carnot/diffop.hpp"
#include "carnot/expression.hpp"
#include "carnot/linsolve.hpp"

namespace carnot {

/// All words over {1..m} of length <= k, shortest first, then lexicographic.
std::vector<Word> horizontal_words(int m, int k);

/// X^I f(g_0) for every horizontal word |I| <= order.
struct DerivativeData {
  GroupPtr group;
  int order = 0;
  std::map<Word, Rational> values;
};

/// X^I q for every word |I| <= k (as polynomials).
std::map<Word, StratifiedPolynomial> word_derivatives(const StratifiedPolynomial& q, const GroupPtr& g, int k);

/// Rows: words |I| <= k; columns: monomial_basis(k); entry X^I z^J (e).
RationalMatrix derivative_matrix(const GroupPtr& g, int k);

/// Exact data X^I f(g_0) for a polynomial f.
DerivativeData derivative_data(const StratifiedPolynomial& f, const ExactElement& g0, int k);

/// The unique P of weighted degree <= k with X^I P(e) = data. Exact mode
/// rejects any inconsistency (InconsistentData); with a tolerance the table is
/// fitted by least squares and rejected if the worst row misses by more.
StratifiedPolynomial taylor_poly(const DerivativeData& data, std::optional<double> tolerance = std::nullopt);
StratifiedPolynomial taylor_poly(const StratifiedPolynomial& f, const ExactElement& g0, int k);

struct DecayReport {
  std::vector<double> radii;
  std::vector<double> residuals;
  double slope = 0;
  double intercept = 0;
};

/// Least-squares line through (log rho, log residual) over positive residuals;
/// slope is +inf when fewer than two residuals are positive.
void fit_decay(DecayReport& report);

/// 2^-3, ..., 2^-10.
std::vector<double> default_radii();

enum class JetSource { Series, FiniteDifference };

struct TaylorCheckOptions {
  std::vector<double> radii = default_radii();
  int samples = 200;
  std::uint64_t seed = 1;
  JetSource source = JetSource::Series;
  double fd_step = 1e-3;
  double fd_tolerance = 1e-4;
};

/// sup over |g| <= rho of |f(g_0 g) - P_{g_0}(g)| per radius, with its
/// log-log slope. Derivative data comes from the expression's series jet (exact
/// up to the rounding of g_0) or from finite differences.
DecayReport check_taylor_inequality(const ScalarField& f, const NumericElement& g0, int k,
                                    const TaylorCheckOptions& options = {});

/// c_1..c_{k+2} with sum_i c_i (-1/i)^m = 1 for m = 0..k+1.
std::vector<Rational> reflection_coefficients(int k);

}  // namespace carnot
