#include "carnot/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <Eigen/Eigenvalues>
#include <boost/random/normal_distribution.hpp>

namespace carnot {

namespace {

std::vector<double> to_vec(const NumericElement& p) { return {p.coords.data(), p.coords.data() + p.dim()}; }

NumericElement from_vec(const GroupPtr& g, std::vector<double> v) { return make_element<double>(g, std::move(v)); }

/// Euclidean gradient of phi by central differences.
std::vector<double> euclidean_gradient(const ScalarField& phi, std::vector<double> p, double h) {
  std::vector<double> grad(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    double keep = p[i];
    p[i] = keep + h;
    double up = phi(p);
    p[i] = keep - h;
    double down = phi(p);
    p[i] = keep;
    grad[i] = (up - down) / (2 * h);
  }
  return grad;
}

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Unit-gauge point in the direction of a random box sample.
NumericElement sphere_sample(const GroupPtr& g, Engine& rng) {
  for (;;) {
    NumericElement u = box_sample(g, rng);
    double r = gauge(u);
    if (r > 1e-3) return dilate(1.0 / r, u);
  }
}

}  // namespace

double holder_seminorm(const ScalarField& f, const std::vector<NumericElement>& points, double alpha) {
  if (!(alpha > 0 && alpha <= 1)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1]");
  if (points.size() < 2) throw Error(ErrorKind::DegenerateSample, "need at least two points");
  std::vector<double> values;
  for (const auto& p : points) values.push_back(f(p));
  double best = 0;
  bool any = false;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      double d = gauge_distance(points[i], points[j]);
      if (d <= 0) continue;
      any = true;
      best = std::max(best, std::abs(values[i] - values[j]) / std::pow(d, alpha));
    }
  if (!any) throw Error(ErrorKind::DegenerateSample, "all sample points coincide");
  return best;
}

DecayReport decay_exponent(const ScalarField& u, const StratifiedPolynomial& pe, const Domain& domain,
                           const SamplingOptions& options) {
  const GroupPtr& g = domain.group;
  NumericPolynomial pn = pe.cast<double>();
  DecayReport report;
  report.radii = options.radii;
  for (std::size_t r = 0; r < options.radii.size(); ++r) {
    Engine rng(derive_seed(options.seed, r));
    const double rho = options.radii[r];
    double worst = 0;
    int accepted = 0;
    for (long attempts = 0; accepted < options.samples && attempts < 50L * options.samples; ++attempts) {
      NumericElement q = dilate(rho, unit_ball_samples(g, 1, rng).front());
      if (!domain.contains(q)) continue;
      ++accepted;
      worst = std::max(worst, std::abs(u(q) - pn.evaluate<double>(q.span())));
    }
    if (accepted == 0)
      throw Error(ErrorKind::EmptyShell, "no samples of the domain inside B(" + std::to_string(rho) + ")");
    report.residuals.push_back(worst);
  }
  fit_decay(report);
  return report;
}

ScalarField barrier_function(const Domain& domain, const NumericElement& p0, double r1, int k, double f_bound,
                             double m_bar) {
  std::vector<double> grad = euclidean_gradient(domain.phi, to_vec(p0), 1e-6);
  double len = norm(grad);
  if (!(len > 1e-9)) throw Error(ErrorKind::NoTangentBall, "defining function has a vanishing gradient at p0");
  // Exterior ball center p0 - r1 nu with nu = -grad phi / |grad phi| the inner normal.
  std::vector<double> center = to_vec(p0);
  for (std::size_t i = 0; i < center.size(); ++i) center[i] += r1 * grad[i] / len;
  const double scale = m_bar + f_bound, r1_sq = r1 * r1;
  return ScalarField::from_function(
      domain.group,
      [center, scale, r1_sq, k](std::span<const double> q) {
        double psi = 0;
        for (std::size_t i = 0; i < center.size(); ++i) psi += (q[i] - center[i]) * (q[i] - center[i]);
        return scale * (1 - std::pow(r1_sq / psi, k));
      },
      "barrier");
}

BarrierReport barrier_check(const Domain& domain, const Eigen::MatrixXd& a, double f_bound, const NumericElement& p0,
                            double r1, int k_max, const BarrierOptions& options) {
  const GroupPtr& g = domain.group;
  const int m = g->horizontal_dim(), n = g->dim();
  if (a.rows() != m || a.cols() != m) throw Error(ErrorKind::ArityMismatch, "coefficient matrix must be m x m");
  if (std::abs(domain.phi(p0)) > 1e-9) throw Error(ErrorKind::NoTangentBall, "p0 is not a boundary point");
  std::vector<double> grad = euclidean_gradient(domain.phi, to_vec(p0), 1e-6);
  double len = norm(grad);
  if (!(len > 1e-9)) throw Error(ErrorKind::NoTangentBall, "defining function has a vanishing gradient at p0");
  std::vector<double> center = to_vec(p0);
  for (int i = 0; i < n; ++i) center[i] += r1 * grad[i] / len;

  Engine rng(derive_seed(options.seed, 0));
  std::vector<NumericElement> pts;
  for (long attempts = 0; static_cast<int>(pts.size()) < options.samples && attempts < 200L * options.samples;
       ++attempts) {
    NumericElement q = box_sample(g, rng);
    q.coords = p0.coords + r1 * q.coords;
    if (euclidean_distance(q, p0) >= r1 || !domain.contains(q)) continue;
    double psi = 0;
    for (int i = 0; i < n; ++i) psi += (q.coords(i) - center[i]) * (q.coords(i) - center[i]);
    if (psi < r1 * r1 * (1 - 1e-9))
      throw Error(ErrorKind::NoTangentBall, "the ball of radius r1 at p0 - r1 nu meets the domain");
    pts.push_back(std::move(q));
  }
  if (pts.empty()) throw Error(ErrorKind::NoTangentBall, "no domain samples near p0");

  BarrierReport report;
  report.samples = static_cast<int>(pts.size());
  report.margin = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_max; ++k) {
    ScalarField gk = barrier_function(domain, p0, r1, k, f_bound, options.m_bar);
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& q : pts) {
      double lg = 0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          if (a(i, j) != 0) lg += a(i, j) * fd_horizontal_derivative({i + 1, j + 1}, gk, q, options.fd_step);
      margin = std::min(margin, -f_bound - lg);
    }
    if (margin >= 0) {
      report.k_found = k;
      report.margin = margin;
      return report;
    }
    report.margin = std::max(report.margin, margin);
  }
  return report;
}

MCEstimate mc_dirichlet(const Domain& domain, const ScalarField& boundary_data, const ScalarField& f,
                        const NumericElement& p, const MCOptions& options) {
  const GroupPtr& g = domain.group;
  const int m = g->horizontal_dim(), n = g->dim();
  if (!domain.radius) throw Error(ErrorKind::InvalidArgument, "Monte Carlo needs a bounded domain (gauge radius)");
  if (!domain.contains(p)) throw Error(ErrorKind::NonInterior, "starting point is not interior");
  if (options.n_paths < 2) throw Error(ErrorKind::InvalidArgument, "need at least two paths");
  if (!(options.dt > 0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  Eigen::MatrixXd root = Eigen::MatrixXd::Identity(m, m);
  if (options.a.size() != 0) {
    if (options.a.rows() != m || options.a.cols() != m)
      throw Error(ErrorKind::ArityMismatch, "coefficient matrix must be m x m");
    if (!options.a.isApprox(options.a.transpose(), 0))
      throw Error(ErrorKind::NotSymmetric, "coefficient matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(options.a);
    if (eig.eigenvalues().minCoeff() <= 0) throw Error(ErrorKind::NotElliptic, "coefficient matrix is not positive");
    root = eig.operatorSqrt();
  }
  double f_const = 0;
  const bool f_zero = f.is_constant(&f_const) && f_const == 0;
  const double sqrt_dt = std::sqrt(options.dt);
  const HorizontalStepper stepper(g);

  std::vector<double> payoff(options.n_paths);
  auto run = [&](int worker, int workers) {
    HorizontalStepper local = stepper;
    boost::random::normal_distribution<double> normal;
    std::vector<double> pos(n), zeta(m), v(m);
    for (int i = worker; i < options.n_paths; i += workers) {
      Engine rng(derive_seed(options.seed, static_cast<std::uint64_t>(i)));
      for (int c = 0; c < n; ++c) pos[c] = p.coords(c);
      double integral = 0;
      long steps = 0;
      for (;;) {
        if (!f_zero) integral += f(pos) * options.dt;
        for (int c = 0; c < m; ++c) zeta[c] = normal(rng);
        for (int r = 0; r < m; ++r) {
          double s = 0;
          for (int c = 0; c < m; ++c) s += root(r, c) * zeta[c];
          v[r] = sqrt_dt * s;
        }
        local.step(pos, v);
        if (!domain.contains(pos)) break;
        if (++steps > options.max_steps)
          throw Error(ErrorKind::StuckPath, "path " + std::to_string(i) + " exceeded the step limit");
      }
      payoff[i] = boundary_data(pos) - 0.5 * integral;
    }
  };
  int workers = options.workers > 0 ? options.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, options.n_paths);
  if (workers == 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w)
      threads.emplace_back([&, w] {
        try {
          run(w, workers);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : threads) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  // Welford in path order, independent of the worker split.
  double mean = 0, m2 = 0;
  for (int i = 0; i < options.n_paths; ++i) {
    double delta = payoff[i] - mean;
    mean += delta / (i + 1);
    m2 += delta * (payoff[i] - mean);
  }
  MCEstimate est;
  est.mean = mean;
  est.n_paths = options.n_paths;
  est.seed = options.seed;
  est.std_error = std::sqrt(m2 / (options.n_paths - 1)) / std::sqrt(static_cast<double>(options.n_paths));
  return est;
}

std::vector<double> horizontal_gradient(const Domain& domain, const NumericElement& p, double fd_step) {
  const int m = domain.group->horizontal_dim();
  std::vector<double> out(m);
  if (domain.phi.is_polynomial()) {
    StratifiedPolynomial phi = domain.phi.polynomial();
    const auto& fields = left_invariant_fields(domain.group);
    for (int i = 0; i < m; ++i) out[i] = apply_field(fields[i], phi).cast<double>().evaluate<double>(p.span());
  } else {
    for (int i = 0; i < m; ++i) out[i] = fd_horizontal_derivative({i + 1}, domain.phi, p, fd_step);
  }
  return out;
}

CharScanResult characteristic_scan(const Domain& domain, const CharScanOptions& options) {
  const GroupPtr& g = domain.group;
  const int n = g->dim(), m = g->horizontal_dim(), xm = g->distinguished();
  std::vector<NumericPolynomial> xphi;
  const bool symbolic = domain.phi.is_polynomial();
  std::vector<NumericPolynomial> dphi;
  if (symbolic) {
    StratifiedPolynomial phi = domain.phi.polynomial();
    const auto& fields = left_invariant_fields(g);
    for (int i = 0; i < m; ++i) xphi.push_back(apply_field(fields[i], phi).cast<double>());
    for (int i = 0; i < n; ++i) dphi.push_back(phi.derivative(i).cast<double>());
  }
  auto hgrad = [&](const NumericElement& q) {
    double s = 0;
    for (int i = 0; i < m; ++i) {
      double v = symbolic ? xphi[i].evaluate<double>(q.span())
                          : fd_horizontal_derivative({i + 1}, domain.phi, q, options.fd_step);
      s += v * v;
    }
    return std::sqrt(s);
  };
  auto egrad = [&](const std::vector<double>& q) {
    if (!symbolic) return euclidean_gradient(domain.phi, q, options.fd_step);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = dphi[i].evaluate<double>(q);
    return out;
  };

  CharScanResult res;
  res.min_grad = std::numeric_limits<double>::infinity();
  auto consider = [&](const NumericElement& q) {
    double v = hgrad(q);
    ++res.samples;
    if (v < res.min_grad) {
      res.min_grad = v;
      res.argmin = q;
    }
  };
  NumericElement origin = identity<double>(g);
  if (std::abs(domain.phi(origin)) <= options.tolerance) consider(origin);

  Engine rng(derive_seed(options.seed, 0));
  for (int s = 0; s < options.samples; ++s) {
    NumericElement q = box_sample(g, rng);
    q.coords *= options.box;
    if (domain.graph) {
      q.coords(xm) = 0;
      q.coords(xm) = (*domain.graph)(q);
      consider(q);
      continue;
    }
    std::vector<double> v = to_vec(q);
    bool converged = false;
    for (int it = 0; it < 60 && !converged; ++it) {
      double val = domain.phi(v);
      if (std::abs(val) < 1e-12) {
        converged = true;
        break;
      }
      std::vector<double> gr = egrad(v);
      double sq = 0;
      for (double x : gr) sq += x * x;
      if (sq < 1e-24) break;
      for (int i = 0; i < n; ++i) v[i] -= val * gr[i] / sq;
    }
    if (!converged) continue;
    bool inside_box = true;
    for (double x : v)
      if (std::abs(x) > 2 * options.box) inside_box = false;
    if (inside_box) consider(from_vec(g, v));
  }
  if (res.samples == 0) throw Error(ErrorKind::EmptyShell, "no boundary samples found");
  res.characteristic = res.min_grad <= options.tolerance;
  return res;
}

double boundary_distance(const Domain& domain, const NumericElement& p, double max_radius, int directions,
                         std::uint64_t seed) {
  const GroupPtr& g = domain.group;
  const int n = g->dim();
  std::vector<NumericElement> dirs;
  for (int i = 0; i < n; ++i)
    for (double sign : {1.0, -1.0}) {
      NumericElement u = identity<double>(g);
      u.coords(i) = sign;
      dirs.push_back(u);
    }
  Engine rng(derive_seed(seed, 0));
  for (int i = 0; i < directions; ++i) dirs.push_back(sphere_sample(g, rng));
  constexpr int marches = 64;
  double best = max_radius;
  for (const auto& u : dirs) {
    auto outside = [&](double s) { return !domain.contains(bch_product(p, dilate(s, u))); };
    double lo = 0, hi = -1;
    for (int i = 1; i <= marches; ++i) {
      double s = best * i / marches;
      if (outside(s)) {
        hi = s;
        break;
      }
      lo = s;
    }
    if (hi < 0) continue;
    for (int it = 0; it < 50; ++it) {
      double mid = 0.5 * (lo + hi);
      (outside(mid) ? hi : lo) = mid;
    }
    best = std::min(best, hi);
  }
  return best;
}

NumericElement nontangential_point(const Domain& domain, const NumericElement& p1, double t,
                                   const NontangentialOptions& options) {
  const GroupPtr& g = domain.group;
  const double a = options.a;
  if (!(a > 0 && a < 1)) throw Error(ErrorKind::InvalidArgument, "a must lie in (0, 1)");
  if (!(t > 0)) throw Error(ErrorKind::InvalidArgument, "scale t must be positive");
  std::vector<double> grad = horizontal_gradient(domain, p1);
  double len = norm(grad);
  if (len < 1e-9) throw Error(ErrorKind::NotFound, "p1 is characteristic: the horizontal gradient vanishes");
  for (double c : {0.5, 1.0, 0.25, 2.0, 0.125}) {
    NumericElement step = identity<double>(g);
    for (int i = 0; i < g->horizontal_dim(); ++i) step.coords(i) = -c * t * grad[i] / len;
    NumericElement p3 = bch_product(p1, step);
    if (!domain.contains(p3)) continue;
    double to_p1 = gauge_distance(p3, p1) / t;
    double to_boundary = boundary_distance(domain, p3, 2 * t / a, options.directions, options.seed) / t;
    if (to_p1 >= a && to_p1 <= 1 / a && to_boundary >= a && to_boundary <= 1 / a) return p3;
  }
  throw Error(ErrorKind::NotFound, "no non-tangential point at scale " + std::to_string(t));
}

VolumeRatio volume_ratio(const GroupPtr& g, int samples, std::uint64_t seed) {
  auto fraction = [&](double rho, std::uint64_t stream) {
    Engine rng(derive_seed(seed, stream));
    const double limit = std::pow(rho, gauge_exponent(*g));
    long hits = 0;
    for (int s = 0; s < samples; ++s) {
      NumericElement q = dilate(rho, box_sample(g, rng));
      if (gauge_power(q) <= limit) ++hits;
    }
    return static_cast<double>(hits) / samples;
  };
  VolumeRatio out;
  out.expected = std::ldexp(1.0, g->homogeneous_dimension());
  // The box for B(2) is delta_2 of the box for B(1), hence 2^Q times larger.
  out.ratio = out.expected * fraction(2.0, 1) / fraction(1.0, 0);
  out.relative_error = std::abs(out.ratio / out.expected - 1);
  return out;
}

DistanceProbe distance_probe(const GroupPtr& g, int pairs, std::uint64_t seed) {
  Engine rng(derive_seed(seed, 0));
  DistanceProbe probe;
  probe.epsilon = 1.0 / g->step();
  probe.pairs = pairs;
  for (int i = 0; i < pairs; ++i) {
    auto pts = unit_ball_samples(g, 2, rng);
    double de = euclidean_distance(pts[0], pts[1]), d = gauge_distance(pts[0], pts[1]);
    if (d <= 0 || de <= 0) continue;
    probe.c1 = std::max(probe.c1, de / d);
    probe.c2 = std::max(probe.c2, d / std::pow(de, probe.epsilon));
  }
  return probe;
}

ManufacturedReport manufactured_decay(const ManufacturedCase& c, const SamplingOptions& options) {
  const GroupPtr& g = c.group;
  const int xm = g->distinguished();
  if (c.p_true.weighted_degree() > c.k - 1)
    throw Error(ErrorKind::InvalidArgument, "the true polynomial must have degree <= k-1");
  const StratifiedPolynomial x_m = StratifiedPolynomial::variable(g->grading(), xm);
  DiffOperator lap = sub_laplacian(g);
  DistanceModel flat = flat_distance(g, c.k);
  ApproxSystem sys = assemble_system(lap, flat, c.k);
  FreeAssignment free;
  for (int col : sys.free_cols) free.emplace(sys.cols[col], c.p_true.coefficient(sys.cols[col]));
  StratifiedPolynomial f = apply_operator(lap, x_m * c.p_true);
  ManufacturedReport out;
  out.approx = solve_approximating(sys, lap, flat, f, free, SolveMode::Triangular);
  NumericPolynomial pn = c.p_true.cast<double>();
  const double power = c.k - 1 + c.alpha;
  ScalarField u = ScalarField::from_function(
      g,
      [g, pn, power, xm](std::span<const double> q) {
        double gauge_q = std::pow(gauge_power<double>(*g, q), 1.0 / gauge_exponent(*g));
        return q[xm] * (pn.evaluate<double>(q) + std::pow(gauge_q, power));
      },
      "manufactured");
  Domain half = Domain::from_graph(ScalarField::constant(g, Rational(0)));
  out.decay = decay_exponent(u, x_m * out.approx.p, half, options);
  return out;
}

}  // namespace carnot
