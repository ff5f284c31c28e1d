#include "carnot/approximator.hpp"

#include <cmath>

namespace carnot {

namespace {

using Poly = StratifiedPolynomial;

Poly graph_jet(const ScalarField& h, int k, bool& exact) {
  const GroupPtr& g = h.group();
  if (h.is_polynomial()) return h.polynomial().truncated(k);
  if (!h.is_opaque()) {
    try {
      return h.jet(identity<Rational>(g), k);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EvaluationFailure) throw;
    }
    exact = false;
    Poly out(g->grading());
    for (const auto& [j, c] : h.jet(identity<double>(g), k).terms()) out.add_term(j, from_double(c));
    return out;
  }
  throw Error(ErrorKind::BadGraph, "graph function has no jet at the origin");
}

/// sum_n binom(1/2, n) u^n, truncated at kappa; u has zero constant term.
Poly sqrt_one_plus(const Poly& u, int kappa) {
  Poly out = Poly::constant(u.grading(), Rational(1));
  Poly un = out;
  Rational binom = 1;
  for (int n = 1; n <= kappa; ++n) {
    binom *= (Rational(1, 2) - (n - 1)) / n;
    un = multiply(un, u, kappa);
    if (un.is_zero()) break;
    out += un * binom;
  }
  return out;
}

std::map<MultiIndex, int> index_of(const std::vector<MultiIndex>& v) {
  std::map<MultiIndex, int> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.emplace(v[i], static_cast<int>(i));
  return out;
}

Poly from_columns(const ApproxSystem& s, const std::vector<Rational>& b) {
  Poly p(s.group->grading());
  for (std::size_t c = 0; c < s.cols.size(); ++c) p.add_term(s.cols[c], b[c]);
  return p;
}

}  // namespace

DistanceModel flat_distance(const GroupPtr& g, int k) {
  return {Rational(1), Poly::variable(g->grading(), g->distinguished()), k, true};
}

DistanceModel distance_expansion(const Domain& domain, int k) {
  if (!domain.graph) throw Error(ErrorKind::BadGraph, "distance expansion needs a graph domain");
  const GroupPtr& g = domain.group;
  const GradingPtr& gr = g->grading();
  const int n = g->dim(), xm = g->distinguished();
  DistanceModel model;
  model.order = k;
  Poly h = graph_jet(*domain.graph, k, model.exact);
  if (!h.derivative(xm).is_zero()) throw Error(ErrorKind::BadGraph, "graph function depends on x_m");
  if (h.constant_term() != 0) throw Error(ErrorKind::BadGraph, "h(0) must vanish");

  std::vector<Poly> dh(n, Poly(gr));
  std::vector<Rational> grad0(n, Rational(0));
  Rational grad_sq = 0;
  for (int i = 0; i < n; ++i) {
    if (i == xm) continue;
    dh[i] = h.derivative(i);
    grad0[i] = dh[i].constant_term();
    grad_sq += grad0[i] * grad0[i];
    if (grad0[i] != 0 && g->layer_of(i) == 1)
      throw Error(ErrorKind::BadGraph, "the horizontal gradient of h must vanish at the origin");
  }
  const Rational sigma_sq = 1 + grad_sq;
  const Poly zero(gr);
  const Poly x_m = Poly::variable(gr, xm);

  // Nearest boundary point (s, h(s)) of z = (w, x_m): F(s) = s - w - (x_m - h(s)) grad h(s) = 0,
  // solved by chord iteration with the Jacobian at the origin, I + g g^T.
  std::vector<Poly> s(n, zero);
  for (int i = 0; i < n; ++i)
    if (i != xm) s[i] = Poly::variable(gr, i);
  auto at_s = [&](const Poly& q) { return substitute<Rational>(q, s, gr, k); };
  for (int iter = 0; iter <= k; ++iter) {
    Poly r = x_m - at_s(h);
    std::vector<Poly> f(n, zero);
    for (int i = 0; i < n; ++i)
      if (i != xm) f[i] = s[i] - Poly::variable(gr, i) - multiply(r, at_s(dh[i]), k);
    Poly g_dot_f = zero;
    for (int i = 0; i < n; ++i)
      if (grad0[i] != 0) g_dot_f += f[i] * grad0[i];
    for (int i = 0; i < n; ++i)
      if (i != xm) s[i] = s[i] - (f[i] - g_dot_f * (grad0[i] / sigma_sq));
  }
  // d = (x_m - h(s)) sqrt(1 + |grad h(s)|^2) = sigma (x_m - h(s)) sqrt(1 + v / sigma^2).
  Poly v = zero;
  for (int i = 0; i < n; ++i) {
    if (i == xm) continue;
    Poly gi = at_s(dh[i]);
    v += multiply(gi, gi, k);
  }
  v -= Poly::constant(gr, grad_sq);
  Poly scaled = multiply(x_m - at_s(h), sqrt_one_plus(v * (Rational(1) / sigma_sq), k), k);
  Rational sigma;
  if (!exact_sqrt(sigma_sq, sigma)) {
    model.exact = false;
    sigma = from_double(std::sqrt(to_double(sigma_sq)));
  }
  model.grad_norm = Rational(1) / sigma;
  if (!(to_double(model.grad_norm) > 1e-12))
    throw Error(ErrorKind::CharacteristicPoint, "vanishing horizontal gradient of the distance");
  model.poly_part = (scaled * sigma).truncated(k);
  return model;
}

ApproxSystem assemble_system(const DiffOperator& op, const DistanceModel& d, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "order k must be at least 1");
  const GroupPtr& g = op.group;
  const GradingPtr& gr = g->grading();
  ApproxSystem sys;
  sys.group = g;
  sys.k = k;
  sys.rows = monomial_basis(*gr, k - 2);
  sys.cols = monomial_basis(*gr, k - 1);
  sys.matrix = RationalMatrix::Zero(static_cast<Eigen::Index>(sys.rows.size()),
                                    static_cast<Eigen::Index>(sys.cols.size()));
  auto row_index = index_of(sys.rows);
  auto col_index = index_of(sys.cols);
  for (std::size_t c = 0; c < sys.cols.size(); ++c) {
    Poly dz = multiply(d.poly_part, Poly::monomial(gr, sys.cols[c].exponents()), k);
    Poly col = apply_operator(op, dz).truncated(k - 2);
    for (const auto& [j, v] : col.terms()) sys.matrix(row_index.at(j), c) = v;
    if (sys.cols[c].distinguished() == 0) sys.free_cols.push_back(static_cast<int>(c));
  }
  const int xm = g->distinguished();
  for (const MultiIndex& r : sys.rows) {
    std::vector<int> e = r.exponents();
    e[xm] += 1;
    sys.determined_col.push_back(col_index.at(MultiIndex(*gr, e)));
  }
  return sys;
}

std::map<Word, Rational> verify_approximating(const DiffOperator& op, const DistanceModel& d, const Poly& p,
                                              const Poly& f, int k) {
  Poly q = apply_operator(op, d.poly_part * p) - f;
  std::map<Word, Rational> out;
  for (const auto& [w, der] : word_derivatives(q, op.group, std::max(k - 2, 0)))
    out.emplace(w, der.constant_term());
  if (k < 2) out.clear();
  return out;
}

ApproxResult solve_approximating(const ApproxSystem& sys, const DiffOperator& op, const DistanceModel& d,
                                 const Poly& f, const FreeAssignment& free, SolveMode mode) {
  const GroupPtr& g = sys.group;
  if (!f.is_zero() && !same_grading(f.grading(), g->grading()))
    throw Error(ErrorKind::GroupMismatch, "right-hand side lives on another group");
  const std::size_t nc = sys.cols.size(), nr = sys.rows.size();
  auto col_index = index_of(sys.cols);
  std::vector<Rational> b(nc, Rational(0));
  std::vector<bool> known(nc, false);
  for (int c : sys.free_cols) known[c] = true;
  for (const auto& [j, v] : free) {
    auto it = col_index.find(j);
    if (it == col_index.end() || j.distinguished() != 0)
      throw Error(ErrorKind::FreeKeyInvalid, "free coefficients must be monomials of degree <= " +
                                                 std::to_string(sys.k - 1) + " without an x_m factor");
    b[it->second] = v;
  }
  Poly target = f.truncated(sys.k - 2);
  std::vector<Rational> rhs(nr);
  for (std::size_t r = 0; r < nr; ++r) rhs[r] = target.coefficient(sys.rows[r]);

  if (mode == SolveMode::Triangular) {
    for (std::size_t r = 0; r < nr; ++r) {
      const int pivot = sys.determined_col[r];
      Rational acc = rhs[r];
      for (std::size_t c = 0; c < nc; ++c) {
        if (static_cast<int>(c) == pivot || sys.matrix(r, c) == 0) continue;
        if (!known[c])
          throw Error(ErrorKind::OffTriangular, "row " + std::to_string(r) + " reaches unsolved column " +
                                                    std::to_string(c));
        acc -= sys.matrix(r, c) * b[c];
      }
      if (sys.matrix(r, pivot) == 0)
        throw Error(ErrorKind::SingularSystem, "zero diagonal entry at row " + std::to_string(r));
      b[pivot] = acc / sys.matrix(r, pivot);
      known[pivot] = true;
    }
  } else {
    RationalMatrix m(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nr));
    RationalVector y(static_cast<Eigen::Index>(nr));
    for (std::size_t r = 0; r < nr; ++r) {
      Rational acc = rhs[r];
      for (int c : sys.free_cols) acc -= sys.matrix(r, c) * b[c];
      y(r) = acc;
      for (std::size_t q = 0; q < nr; ++q) m(r, q) = sys.matrix(r, sys.determined_col[q]);
    }
    ExactSolution sol = solve_exact(m, y);
    if (sol.status != SolveStatus::Unique)
      throw Error(ErrorKind::SingularSystem, "determined block is singular");
    for (std::size_t q = 0; q < nr; ++q) b[sys.determined_col[q]] = sol.x(q);
  }

  ApproxResult result;
  result.p = from_columns(sys, b);
  for (int c : sys.free_cols) result.free_assignment.emplace(sys.cols[c], b[c]);
  result.residuals = verify_approximating(op, d, result.p, f, sys.k);
  for (const auto& [w, v] : result.residuals)
    if (v != 0) throw Error(ErrorKind::SingularSystem, "solution fails the defining identity");
  return result;
}

ApproxResult solve_approximating(const DiffOperator& op, const DistanceModel& d, const Poly& f, int k,
                                 const FreeAssignment& free, SolveMode mode) {
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "order k must be at least 2");
  return solve_approximating(assemble_system(op, d, k), op, d, f, free, mode);
}

std::vector<Poly> harmonic_companions(const GroupPtr& g, int kappa) {
  if (kappa < 0) throw Error(ErrorKind::InvalidArgument, "degree must be nonnegative");
  DiffOperator lap = sub_laplacian(g);
  DistanceModel flat = flat_distance(g, kappa + 1);
  ApproxSystem sys = assemble_system(lap, flat, kappa + 1);
  const Poly zero(g->grading());
  std::vector<Poly> out;
  for (int c : sys.free_cols) {
    FreeAssignment pin{{sys.cols[c], Rational(1)}};
    ApproxResult r = solve_approximating(sys, lap, flat, zero, pin, SolveMode::Triangular);
    if (!apply_operator(lap, flat.poly_part * r.p).is_zero())
      throw Error(ErrorKind::SingularSystem, "companion fails to be harmonic");
    out.push_back(r.p);
  }
  return out;
}

std::vector<ScaleStep> multiscale_approximation(const Domain& domain, const CoefficientMatrix& a, const Poly& f,
                                                int k, const std::vector<Rational>& sigmas, SolveMode mode) {
  if (!domain.graph || !domain.graph->is_polynomial())
    throw Error(ErrorKind::NotPolynomial, "the rescaling driver needs a polynomial graph");
  const GroupPtr& g = domain.group;
  Poly h = domain.graph->polynomial();
  std::vector<ScaleStep> out;
  for (const Rational& sigma : sigmas) {
    Poly h_sigma = dilate_poly(h, sigma) * (Rational(1) / sigma);
    Domain scaled = Domain::from_graph(ScalarField::from_polynomial(h_sigma, g), domain.radius);
    CoefficientMatrix a_sigma = a;
    for (auto& row : a_sigma)
      for (auto& entry : row) entry = dilate_poly(entry, sigma);
    DiffOperator op = operator_from_matrix(a_sigma, g);
    Poly f_sigma = dilate_poly(f, sigma) * (sigma * sigma);
    DistanceModel d = distance_expansion(scaled, k);
    out.push_back({sigma, d, solve_approximating(op, d, f_sigma, k, {}, mode)});
  }
  return out;
}

}  // namespace carnot
