#include "carnot/taylor.hpp"

#include <cmath>
#include <limits>

#include <Eigen/QR>

#include "carnot/finite_difference.hpp"
#include "carnot/sampling.hpp"

namespace carnot {

namespace {

StratifiedPolynomial from_coefficients(const GroupPtr& g, const std::vector<MultiIndex>& basis,
                                       const RationalVector& x) {
  StratifiedPolynomial p(g->grading());
  for (std::size_t c = 0; c < basis.size(); ++c) p.add_term(basis[c], x(c));
  return p;
}

}  // namespace

// Built from suffixes: X^{(i) I'} q = X_i (X^{I'} q).
std::map<Word, StratifiedPolynomial> word_derivatives(const StratifiedPolynomial& q, const GroupPtr& g, int k) {
  const auto& fields = left_invariant_fields(g);
  std::map<Word, StratifiedPolynomial> out;
  out.emplace(Word{}, q);
  std::vector<Word> frontier{Word{}};
  for (int len = 1; len <= k; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      const StratifiedPolynomial& base = out.at(w);
      for (int i = 1; i <= g->horizontal_dim(); ++i) {
        Word nw{i};
        nw.insert(nw.end(), w.begin(), w.end());
        out.emplace(nw, base.is_zero() ? base : apply_field(fields[i - 1], base));
        next.push_back(std::move(nw));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

std::vector<Word> horizontal_words(int m, int k) {
  std::vector<Word> out{Word{}};
  std::size_t begin = 0;
  for (int len = 1; len <= k; ++len) {
    std::size_t end = out.size();
    for (std::size_t w = begin; w < end; ++w)
      for (int i = 1; i <= m; ++i) {
        Word nw = out[w];
        nw.push_back(i);
        out.push_back(std::move(nw));
      }
    begin = end;
  }
  return out;
}

RationalMatrix derivative_matrix(const GroupPtr& g, int k) {
  std::vector<MultiIndex> basis = monomial_basis(*g->grading(), k);
  std::vector<Word> words = horizontal_words(g->horizontal_dim(), k);
  RationalMatrix m = RationalMatrix::Zero(static_cast<Eigen::Index>(words.size()), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t c = 0; c < basis.size(); ++c) {
    auto ders = word_derivatives(StratifiedPolynomial::monomial(g->grading(), basis[c].exponents()), g, k);
    for (std::size_t r = 0; r < words.size(); ++r) m(r, c) = ders.at(words[r]).constant_term();
  }
  return m;
}

DerivativeData derivative_data(const StratifiedPolynomial& f, const ExactElement& g0, int k) {
  // X^I f (g0) = X^I (f o L_{g0})(e) by left invariance.
  StratifiedPolynomial translated = left_translate(f, g0).truncated(k);
  DerivativeData data{g0.group, k, {}};
  for (auto& [w, p] : word_derivatives(translated, g0.group, k)) data.values.emplace(w, p.constant_term());
  return data;
}

StratifiedPolynomial taylor_poly(const DerivativeData& data, std::optional<double> tolerance) {
  const GroupPtr& g = data.group;
  std::vector<Word> words = horizontal_words(g->horizontal_dim(), data.order);
  RationalVector b(static_cast<Eigen::Index>(words.size()));
  for (std::size_t r = 0; r < words.size(); ++r) {
    auto it = data.values.find(words[r]);
    if (it == data.values.end()) throw Error(ErrorKind::InconsistentData, "derivative table lacks a word");
    b(r) = it->second;
  }
  RationalMatrix m = derivative_matrix(g, data.order);
  std::vector<MultiIndex> basis = monomial_basis(*g->grading(), data.order);
  if (!tolerance) {
    ExactSolution s = solve_exact(m, b);
    if (s.status == SolveStatus::Inconsistent)
      throw Error(ErrorKind::InconsistentData, "no polynomial of degree <= " + std::to_string(data.order) +
                                                   " has these horizontal derivatives");
    if (s.status == SolveStatus::Underdetermined)
      throw Error(ErrorKind::RankDeficiency, "derivative map is not injective on the polynomial space");
    return from_coefficients(g, basis, s.x);
  }
  Eigen::MatrixXd md(m.rows(), m.cols());
  Eigen::VectorXd bd(b.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    bd(i) = to_double(b(i));
    for (Eigen::Index j = 0; j < m.cols(); ++j) md(i, j) = to_double(m(i, j));
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(md);
  if (qr.rank() < md.cols()) throw Error(ErrorKind::RankDeficiency, "derivative map is not injective");
  Eigen::VectorXd x = qr.solve(bd);
  double worst = (md * x - bd).cwiseAbs().maxCoeff();
  if (worst > *tolerance)
    throw Error(ErrorKind::InconsistentData, "least-squares misfit " + std::to_string(worst) + " exceeds tolerance");
  RationalVector xr(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) xr(i) = from_double(x(i));
  return from_coefficients(g, basis, xr);
}

StratifiedPolynomial taylor_poly(const StratifiedPolynomial& f, const ExactElement& g0, int k) {
  return taylor_poly(derivative_data(f, g0, k));
}

void fit_decay(DecayReport& report) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < report.radii.size(); ++i) {
    if (!(report.residuals[i] > 0)) continue;
    double x = std::log(report.radii[i]), y = std::log(report.residuals[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) {
    report.slope = std::numeric_limits<double>::infinity();
    report.intercept = 0;
    return;
  }
  report.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  report.intercept = (sy - report.slope * sx) / n;
}

std::vector<double> default_radii() {
  std::vector<double> r;
  for (int e = 3; e <= 10; ++e) r.push_back(std::ldexp(1.0, -e));
  return r;
}

DecayReport check_taylor_inequality(const ScalarField& f, const NumericElement& g0, int k,
                                    const TaylorCheckOptions& options) {
  const GroupPtr& g = g0.group;
  StratifiedPolynomial p;
  if (options.source == JetSource::Series) {
    NumericPolynomial jet = f.jet(g0, k);
    StratifiedPolynomial exact_jet(g->grading());
    for (const auto& [j, c] : jet.terms()) exact_jet.add_term(j, from_double(c));
    p = taylor_poly(derivative_data(exact_jet, identity<Rational>(g), k));
  } else {
    DerivativeData data{g, k, {}};
    for (const Word& w : horizontal_words(g->horizontal_dim(), k))
      data.values.emplace(w, from_double(fd_horizontal_derivative(w, f, g0, options.fd_step)));
    p = taylor_poly(data, options.fd_tolerance);
  }
  NumericPolynomial pn = p.cast<double>();
  DecayReport report;
  report.radii = options.radii;
  for (std::size_t r = 0; r < options.radii.size(); ++r) {
    Engine rng(derive_seed(options.seed, r));
    double rho = options.radii[r], worst = 0;
    for (const NumericElement& u : unit_ball_samples(g, options.samples, rng)) {
      NumericElement q = dilate(rho, u);
      double diff = std::abs(f(bch_product(g0, q)) - pn.evaluate<double>(q.span()));
      worst = std::max(worst, diff);
    }
    report.residuals.push_back(worst);
  }
  fit_decay(report);
  return report;
}

std::vector<Rational> reflection_coefficients(int k) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "order must be nonnegative");
  const int n = k + 2;
  RationalMatrix v(n, n);
  RationalVector ones = RationalVector::Constant(n, Rational(1));
  for (int m = 0; m < n; ++m)
    for (int i = 1; i <= n; ++i) v(m, i - 1) = pow(Rational(-1, i), m);
  ExactSolution s = solve_exact(v, ones);
  return std::vector<Rational>(s.x.data(), s.x.data() + n);
}

}  // namespace carnot
