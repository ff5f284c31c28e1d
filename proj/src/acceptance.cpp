#include "carnot/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "carnot/approximator.hpp"
#include "carnot/verify.hpp"

namespace carnot {

namespace {

using Poly = StratifiedPolynomial;

const std::vector<std::string> kGroups{"heisenberg1", "heisenberg2", "free_step2_3", "engel"};

std::string fixed(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

/// Collects failures; the first few are reported.
struct Checker {
  int checks = 0;
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
  bool ok() const { return failures.empty(); }
  std::string summary(const std::string& extra = "") const {
    std::string s = std::to_string(checks) + " checks";
    if (!extra.empty()) s += ", " + extra;
    if (!failures.empty()) s += "; first failure: " + failures.front();
    return s;
  }
};

Poly var(const GroupPtr& g, int i) { return Poly::variable(g->grading(), i); }

CriterionResult group_law(std::uint64_t seed) {
  Checker c;
  for (std::size_t gi = 0; gi < kGroups.size(); ++gi) {
    GroupPtr g = builtin_group(kGroups[gi]);
    Engine rng(derive_seed(seed, 100 + gi));
    ExactElement e = identity<Rational>(g);
    for (int trial = 0; trial < 100; ++trial) {
      ExactElement p = random_exact_element(g, rng), q = random_exact_element(g, rng), s = random_exact_element(g, rng);
      Rational lambda = abs(random_rational(rng)) + Rational(1, 7);
      const std::string where = kGroups[gi] + " trial " + std::to_string(trial);
      c.expect(bch_product(bch_product(p, q), s).coords == bch_product(p, bch_product(q, s)).coords,
               "associativity, " + where);
      c.expect(bch_product(p, e).coords == p.coords && bch_product(e, p).coords == p.coords, "identity, " + where);
      c.expect(bch_product(p, inverse(p)).coords == e.coords && inverse(p).coords == -p.coords,
               "inverse, " + where);
      c.expect(dilate(lambda, bch_product(p, q)).coords == bch_product(dilate(lambda, p), dilate(lambda, q)).coords,
               "dilation automorphism, " + where);
    }
  }
  GroupPtr h = builtin_group("heisenberg1");
  const GradingPtr& dg = h->doubled_grading();
  auto v = [&](int i) { return Poly::variable(dg, i); };
  std::vector<Poly> closed{v(0) + v(3), v(1) + v(4), v(2) + v(5) + (v(0) * v(4) - v(1) * v(3)) * Rational(1, 2)};
  c.expect(group_law_polynomials(h).components == closed, "heisenberg1 closed-form group law");
  return {1, "exact group law", c.ok(), c.summary(), 0, 10};
}

CriterionResult vector_fields(std::uint64_t seed) {
  Checker c;
  for (std::size_t gi = 0; gi < kGroups.size(); ++gi) {
    GroupPtr g = builtin_group(kGroups[gi]);
    const auto& fields = left_invariant_fields(g);
    const int m = g->horizontal_dim(), n = g->dim();
    for (int i = 0; i < m; ++i)
      for (int slot = 0; slot < n; ++slot) {
        const Poly& coef = fields[i].coefficients[slot];
        const int j = g->layer_of(slot);
        for (const auto& [mi, v] : coef.terms()) {
          c.expect(mi.weighted_degree() == j - 1, kGroups[gi] + " X" + std::to_string(i + 1) + " slot degree");
          for (int var = 0; var < n; ++var)
            if (mi[var] > 0) c.expect(g->layer_of(var) < j, kGroups[gi] + " coefficient uses a higher layer");
        }
      }
    DiffOperator lap = sub_laplacian(g);
    Engine rng(derive_seed(seed, 200 + gi));
    for (int trial = 0; trial < 50; ++trial) {
      Poly p = random_polynomial(g, 4, 4, rng);
      ExactElement x = random_exact_element(g, rng);
      Rational lambda = abs(random_rational(rng)) + Rational(1, 3);
      const std::string where = kGroups[gi] + " trial " + std::to_string(trial);
      for (int i = 0; i < m; ++i) {
        Word w{i + 1};
        c.expect(horizontal_derivative(w, left_translate(p, x), g) == left_translate(horizontal_derivative(w, p, g), x),
                 "left invariance, " + where);
        c.expect(horizontal_derivative(w, dilate_poly(p, lambda), g) ==
                     dilate_poly(horizontal_derivative(w, p, g), lambda) * lambda,
                 "degree-1 homogeneity, " + where);
      }
      c.expect(apply_operator(lap, dilate_poly(p, lambda)) == dilate_poly(apply_operator(lap, p), lambda) * (lambda * lambda),
               "degree-2 homogeneity, " + where);
    }
  }
  return {2, "vector-field structure", c.ok(), c.summary(), 0, 30};
}

CriterionResult bracket_generation(std::uint64_t) {
  Checker c;
  std::string dims;
  for (const auto& name : kGroups) {
    GroupPtr g = builtin_group(name);
    const auto& fields = left_invariant_fields(g);
    std::vector<VectorField> all(fields.begin(), fields.begin() + g->horizontal_dim());
    std::vector<VectorField> last = all;
    for (int depth = 2; depth <= g->step(); ++depth) {
      std::vector<VectorField> next;
      for (int i = 0; i < g->horizontal_dim(); ++i)
        for (const auto& y : last) next.push_back(field_bracket(fields[i], y));
      all.insert(all.end(), next.begin(), next.end());
      last = std::move(next);
    }
    RationalMatrix values(static_cast<Eigen::Index>(all.size()), g->dim());
    for (std::size_t r = 0; r < all.size(); ++r)
      for (int s = 0; s < g->dim(); ++s) values(r, s) = all[r].coefficients[s].constant_term();
    int rank = exact_rank(values);
    c.expect(rank == g->dim(), name + " spans " + std::to_string(rank) + " of " + std::to_string(g->dim()));
    dims += (dims.empty() ? "" : " ") + name + "=" + std::to_string(rank);
  }
  return {3, "bracket generation", c.ok(), c.summary("ranks " + dims), 0, 30};
}

CriterionResult taylor_identities(std::uint64_t seed) {
  Checker c;
  for (std::size_t gi = 0; gi < kGroups.size(); ++gi) {
    GroupPtr g = builtin_group(kGroups[gi]);
    for (int k = 0; k <= 4; ++k) {
      RationalMatrix m = derivative_matrix(g, k);
      c.expect(exact_rank(m) == m.cols(), kGroups[gi] + " derivative matrix rank at k=" + std::to_string(k));
    }
    Engine rng(derive_seed(seed, 400 + gi));
    for (int trial = 0; trial < 10; ++trial) {
      const int k = 1 + trial % 3;
      Poly f = random_polynomial(g, 4, 5, rng);
      ExactElement g0 = random_exact_element(g, rng);
      c.expect(taylor_poly(f, identity<Rational>(g), k) == f.truncated(k), kGroups[gi] + " projection");
      c.expect(taylor_poly(f, g0, k) == taylor_poly(left_translate(f, g0), identity<Rational>(g), k),
               kGroups[gi] + " translation covariance");
    }
  }
  for (int k = 0; k <= 8; ++k) {
    std::vector<Rational> coeffs = reflection_coefficients(k);
    for (int m = 0; m <= k + 1; ++m) {
      Rational s = 0;
      for (int i = 1; i <= k + 2; ++i) s += coeffs[i - 1] * pow(Rational(-1, i), m);
      c.expect(s == 1, "reflection residual at k=" + std::to_string(k));
    }
  }
  std::vector<Rational> c0 = reflection_coefficients(0);
  c.expect(c0 == std::vector<Rational>{Rational(-3), Rational(4)}, "reflection k=0 is (-3, 4)");
  return {4, "taylor polynomials", c.ok(), c.summary(), 0, 60};
}

CriterionResult algorithm_core(std::uint64_t seed) {
  Checker c;
  int solves = 0;
  for (std::size_t gi = 0; gi < kGroups.size(); ++gi) {
    GroupPtr g = builtin_group(kGroups[gi]);
    const int m = g->horizontal_dim();
    Engine rng(derive_seed(seed, 500 + gi));
    for (int k = 2; k <= 4; ++k) {
      std::vector<DistanceModel> ds{flat_distance(g, k)};
      for (int v = 0; v < 3; ++v) {
        DistanceModel d = flat_distance(g, k);
        d.poly_part += random_polynomial(g, k, 3, rng, 2) * Rational(1, 10);
        ds.push_back(d);
      }
      CoefficientMatrix pert = identity_matrix(g);
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
          Poly e = random_polynomial(g, 2, 2, rng, 1) * Rational(1, 10);
          pert[i][j] += e;
          if (i != j) pert[j][i] += e;
        }
      std::vector<DiffOperator> ops{sub_laplacian(g), operator_from_matrix(pert, g)};
      for (std::size_t di = 0; di < ds.size(); ++di)
        for (std::size_t oi = 0; oi < ops.size(); ++oi) {
          const bool flat_identity = di == 0 && oi == 0;
          const std::string where = kGroups[gi] + " k=" + std::to_string(k) + " d#" + std::to_string(di) +
                                    " A#" + std::to_string(oi);
          ApproxSystem sys = assemble_system(ops[oi], ds[di], k);
          c.expect(sys.rows.size() == sys.determined_col.size(), "row/column bijection, " + where);
          if (flat_identity) {
            for (std::size_t r = 0; r < sys.rows.size(); ++r) {
              const int beta = sys.rows[r].distinguished();
              c.expect(sys.matrix(r, sys.determined_col[r]) == ds[di].grad_norm * (beta + 1) * (beta + 2),
                       "diagonal entry, " + where);
              for (std::size_t q = r + 1; q < sys.rows.size(); ++q)
                c.expect(sys.matrix(r, sys.determined_col[q]) == 0, "triangularity, " + where);
            }
          }
          const SolveMode mode = flat_identity ? SolveMode::Triangular : SolveMode::General;
          for (int trial = 0; trial < 20; ++trial) {
            Poly f = random_polynomial(g, k - 2, 3, rng);
            try {
              ApproxResult r = solve_approximating(sys, ops[oi], ds[di], f, {}, mode);
              ++solves;
              bool zero = true;
              for (const auto& [w, val] : verify_approximating(ops[oi], ds[di], r.p, f, k)) zero = zero && val == 0;
              c.expect(zero && r.p.weighted_degree() <= k - 1, "verified residuals, " + where);
            } catch (const Error& e) {
              c.expect(false, std::string(error_name(e.kind())) + ", " + where);
            }
          }
        }
    }
  }
  GroupPtr h = builtin_group("heisenberg1");
  ApproxResult worked = solve_approximating(sub_laplacian(h), flat_distance(h, 3), var(h, 0), 3);
  c.expect(worked.p == var(h, 0) * var(h, 1) * Rational(1, 2), "heisenberg1 worked instance P = xy/2");
  return {5, "algorithm core", c.ok(), c.summary(std::to_string(solves) + " solves"), 0, 120};
}

CriterionResult companions(std::uint64_t) {
  Checker c;
  GroupPtr h = builtin_group("heisenberg1");
  // Hand-expanded sub-Laplacian of H^1: dxx + dyy - y dxt + x dyt + (x^2 + y^2)/4 dtt.
  auto lap = [&](const Poly& u) {
    Poly x = var(h, 0), y = var(h, 1);
    return u.derivative(0).derivative(0) + u.derivative(1).derivative(1) - y * u.derivative(0).derivative(2) +
           x * u.derivative(1).derivative(2) + (x * x + y * y) * Rational(1, 4) * u.derivative(2).derivative(2);
  };
  std::string dims;
  const int expected[] = {1, 2, 4};
  for (int kappa = 0; kappa <= 2; ++kappa) {
    std::vector<Poly> basis = harmonic_companions(h, kappa);
    c.expect(static_cast<int>(basis.size()) == expected[kappa], "heisenberg1 dimension at kappa=" + std::to_string(kappa));
    for (const Poly& q : basis) c.expect(lap(var(h, 1) * q).is_zero(), "Delta_H(yQ) = 0 for " + to_string(q));
    dims += (dims.empty() ? "" : ",") + std::to_string(basis.size());
  }
  for (const auto& name : kGroups) {
    GroupPtr g = builtin_group(name);
    for (int kappa = 0; kappa <= 3; ++kappa) {
      ApproxSystem sys = assemble_system(sub_laplacian(g), flat_distance(g, kappa + 1), kappa + 1);
      const int null_dim = static_cast<int>(sys.cols.size()) - exact_rank(sys.matrix);
      std::vector<Poly> basis = harmonic_companions(g, kappa);
      c.expect(null_dim == static_cast<int>(sys.free_cols.size()) && null_dim == static_cast<int>(basis.size()),
               name + " companion dimension at kappa=" + std::to_string(kappa));
      const auto& fields = left_invariant_fields(g);
      for (const Poly& q : basis) {
        Poly u = var(g, g->distinguished()) * q, total(g->grading());
        for (int i = 0; i < g->horizontal_dim(); ++i) total += apply_field(fields[i], apply_field(fields[i], u));
        c.expect(total.is_zero(), name + " sum X_i^2 (x_m Q) = 0 for " + to_string(q));
      }
    }
  }
  return {6, "harmonic companions", c.ok(), c.summary("heisenberg1 dims " + dims), 0, 60};
}

CriterionResult slopes(std::uint64_t seed) {
  Checker c;
  GroupPtr h = builtin_group("heisenberg1");
  TaylorCheckOptions topt;
  topt.seed = derive_seed(seed, 700);
  SamplingOptions sopt;
  sopt.seed = derive_seed(seed, 701);
  std::ostringstream out;
  auto check = [&](const std::string& label, double slope, double target, double tol) {
    c.expect(std::abs(slope - target) <= tol, label + " slope " + fixed(slope) + " vs " + fixed(target, 1));
    out << label << "=" << fixed(slope, 3) << " ";
  };
  check("taylor sin(x)", check_taylor_inequality(ScalarField::parse("sin(x)", h), identity<double>(h), 2, topt).slope, 3, 0.2);
  check("taylor y*sin(t)", check_taylor_inequality(ScalarField::parse("y*sin(t)", h), identity<double>(h), 3, topt).slope, 7, 0.5);
  Domain half = Domain::from_graph(ScalarField::constant(h, 0));
  check("decay y*x^3", decay_exponent(ScalarField::parse("y*x^3", h), Poly(h->grading()), half, sopt).slope, 4, 0.2);
  check("decay y*sin(t)", decay_exponent(ScalarField::parse("y*sin(t)", h), ScalarField::parse("y*t", h).polynomial(), half, sopt).slope, 7, 0.5);
  double worst = std::numeric_limits<double>::infinity();
  int cases = 0;
  for (const char* name : {"heisenberg1", "heisenberg2", "engel"}) {
    GroupPtr g = builtin_group(name);
    Engine rng(derive_seed(seed, 710));
    for (int k = 2; k <= 4; ++k) {
      ManufacturedCase mc{g, k, 0.5, random_polynomial(g, k - 1, 4, rng)};
      SamplingOptions o = sopt;
      o.seed = derive_seed(seed, 720 + k);
      ManufacturedReport r = manufactured_decay(mc, o);
      ++cases;
      worst = std::min(worst, r.decay.slope - (k + mc.alpha));
      c.expect(r.decay.slope >= k + mc.alpha - 0.2, std::string(name) + " manufactured k=" + std::to_string(k) + " slope " +
                                                         fixed(r.decay.slope));
    }
  }
  out << "manufactured worst slope-(k+alpha)=" << fixed(worst, 3) << " over " << cases << " cases";
  return {7, "decay slopes", c.ok(), c.summary(out.str()), 0, 60};
}

CriterionResult monte_carlo(std::uint64_t seed) {
  Checker c;
  GroupPtr h = builtin_group("heisenberg1");
  Domain cap = Domain::from_graph(ScalarField::constant(h, 0), 1.0);
  NumericElement p = make_element<double>(h, {0.2, 0.3, 0.0});
  ScalarField zero = ScalarField::constant(h, 0);
  MCOptions o;
  o.n_paths = 100000;
  o.dt = 1e-4;
  o.seed = seed;
  MCEstimate main = mc_dirichlet(cap, ScalarField::parse("x*y", h), zero, p, o);
  const double z = (main.mean - 0.06) / main.std_error;
  c.expect(std::abs(z) <= 3, "xy estimate " + fixed(main.mean, 5) + " is " + fixed(z, 2) + " std errors from 0.06");

  // Boundary ranges of the data, sampled on the flat face and the gauge sphere.
  Engine rng(derive_seed(seed, 800));
  std::vector<NumericElement> boundary;
  for (int s = 0; s < 20000; ++s) {
    NumericElement q = box_sample(h, rng);
    if (s % 2 == 0) {
      q.coords(1) = 0;
      if (gauge_power(q) > 1) continue;
    } else {
      q.coords(1) = std::abs(q.coords(1));
      double r = gauge(q);
      if (r < 1e-3) continue;
      q = dilate(1.0 / r, q);
    }
    boundary.push_back(q);
  }
  MCOptions small = o;
  small.n_paths = 4000;
  small.dt = 1e-3;
  int runs = 0;
  for (const char* data : {"x", "t", "x^2 - y", "exp(x)*cos(t)", "1", "0"}) {
    ScalarField g = ScalarField::parse(data, h);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& q : boundary) {
      lo = std::min(lo, g(q));
      hi = std::max(hi, g(q));
    }
    for (const auto& start : {std::vector<double>{0.2, 0.3, 0.0}, std::vector<double>{-0.5, 0.1, 0.2}}) {
      small.seed = derive_seed(seed, 810 + runs);
      MCEstimate e = mc_dirichlet(cap, g, zero, make_element<double>(h, start), small);
      ++runs;
      const double slack = 3 * e.std_error;
      c.expect(e.mean >= lo - slack - 1e-12 && e.mean <= hi + slack + 1e-12,
               "maximum principle for g = " + std::string(data) + ": " + fixed(e.mean) + " outside [" + fixed(lo) + ", " + fixed(hi) + "]");
      if (g.is_constant()) c.expect(e.std_error == 0, "constant data has zero spread");
    }
  }
  return {8, "monte carlo oracle", c.ok(),
          c.summary("xy estimate " + fixed(main.mean, 5) + " +- " + fixed(main.std_error, 5) + ", " +
                    std::to_string(runs) + " maximum-principle runs"),
          0, 60};
}

CriterionResult geometry(std::uint64_t seed) {
  Checker c;
  GroupPtr h = builtin_group("heisenberg1");
  CharScanOptions co;
  co.seed = derive_seed(seed, 900);
  CharScanResult graph = characteristic_scan(Domain::from_defining(ScalarField::parse("x - y*t", h)), co);
  c.expect(graph.min_grad >= 1 - 1e-9 && !graph.characteristic, "x < yt scan min " + fixed(graph.min_grad));
  CharScanResult vertical = characteristic_scan(Domain::from_defining(ScalarField::parse("-t", h)), co);
  c.expect(vertical.characteristic && vertical.min_grad <= 1e-12 && gauge(vertical.argmin) <= 1e-12,
           "{t > 0} flagged at the origin");
  std::ostringstream out;
  out << "x<yt min " << fixed(graph.min_grad) << "; volume ratios";
  for (std::size_t gi = 0; gi < kGroups.size(); ++gi) {
    VolumeRatio v = volume_ratio(builtin_group(kGroups[gi]), 1000000, derive_seed(seed, 910 + gi));
    c.expect(v.relative_error <= 0.05, kGroups[gi] + " volume ratio " + fixed(v.ratio, 2));
    out << " " << kGroups[gi] << "=" << fixed(v.ratio, 2) << "/" << fixed(v.expected, 0);
  }
  return {9, "geometry", c.ok(), c.summary(out.str()), 0, 60};
}

using Runner = CriterionResult (*)(std::uint64_t);
const Runner kRunners[] = {group_law, vector_fields, bracket_generation, taylor_identities, algorithm_core,
                           companions, slopes, monte_carlo, geometry};

CriterionResult timed(Runner run, std::uint64_t seed) {
  auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = run(seed);
  } catch (const Error& e) {
    r.passed = false;
    r.detail = std::string(error_name(e.kind())) + ": " + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

std::string format_result(const CriterionResult& r, bool with_timing) {
  std::string line = (r.passed ? "PASS " : "FAIL ") + std::to_string(r.id) + " " + r.name + ": " + r.detail;
  if (with_timing) line += " [" + fixed(r.seconds, 2) + " s, budget " + fixed(r.budget, 0) + " s]";
  return line;
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> results;
  int id = 1;
  for (Runner run : kRunners) {
    CriterionResult r = timed(run, seed);
    r.id = id++;
    if (r.budget > 0 && r.seconds > r.budget) {
      r.passed = false;
      r.detail += "; over time budget";
    }
    if (on_result) on_result(r);
    results.push_back(r);
  }
  // Determinism: a second in-process run must reproduce every report byte for byte.
  auto start = std::chrono::steady_clock::now();
  Checker c;
  for (std::size_t i = 0; i < std::size(kRunners); ++i) {
    CriterionResult again = timed(kRunners[i], seed);
    again.id = results[i].id;
    again.budget = results[i].budget;
    CriterionResult first = results[i];
    first.passed = again.passed = true;
    first.detail = first.detail.substr(0, first.detail.find("; over time budget"));
    c.expect(format_result(first, false) == format_result(again, false), "criterion " + std::to_string(i + 1) + " report differs");
  }
  CriterionResult det{10, "determinism", c.ok(), c.summary("seed " + std::to_string(seed) + ", criteria 1-9 rerun"), 0, 0};
  det.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (on_result) on_result(det);
  results.push_back(det);
  return results;
}

}  // namespace carnot
