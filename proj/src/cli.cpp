#include "carnot/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <sstream>

#include "carnot/acceptance.hpp"
#include "carnot/approximator.hpp"
#include "carnot/io.hpp"
#include "carnot/verify.hpp"

namespace carnot {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string group = "heisenberg1";
  std::string group_file;
  int k = 3;
  std::string f;
  std::string d = "flat";
  std::string free = "zero";
  std::string mode = "triangular";
  std::optional<std::uint64_t> seed;
  int n_paths = 100000;
  double dt = 1e-4;
  std::string radii;
  std::string out;
  // subcommand specific
  std::string p, q, at, word, a_file, u, pe = "0", boundary, p0;
  std::optional<double> radius;
  double r1 = 0.5, f_bound = 0, m_bar = 1;
  int k_max = 8, samples = 0, workers = 0;
  bool check = false, manufactured = false, timing = false;
  double alpha = 0.5;
};

GroupPtr load_group(const Config& c) {
  if (!c.group_file.empty()) return read_group_file(c.group_file);
  return builtin_group(c.group);
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError("not a number: '" + item + "'");
    }
  }
  return out;
}

NumericElement numeric_point(const GroupPtr& g, const std::string& text) {
  return element_cast<double>(parse_element(g, text));
}

StratifiedPolynomial parse_polynomial(const std::string& text, const GroupPtr& g) {
  return ScalarField::parse(text, g).polynomial();
}

/// flat | poly:EXPR | graph:EXPR | phi:EXPR; a bare expression is a graph.
std::pair<std::string, std::string> split_domain(const std::string& spec) {
  if (spec == "flat") return {"flat", ""};
  for (const char* prefix : {"poly", "graph", "phi"}) {
    std::string p = std::string(prefix) + ":";
    if (spec.rfind(p, 0) == 0) return {prefix, spec.substr(p.size())};
  }
  return {"graph", spec};
}

Domain make_domain(const Config& c, const GroupPtr& g) {
  auto [kind, expr] = split_domain(c.d);
  if (kind == "flat") return Domain::from_graph(ScalarField::constant(g, 0), c.radius);
  if (kind == "graph") return Domain::from_graph(ScalarField::parse(expr, g), c.radius);
  if (kind == "phi") return Domain::from_defining(ScalarField::parse(expr, g), c.radius);
  throw UsageError("--d poly: describes a distance polynomial, not a domain");
}

DistanceModel make_distance(const Config& c, const GroupPtr& g) {
  auto [kind, expr] = split_domain(c.d);
  if (kind == "flat") return flat_distance(g, c.k);
  if (kind == "poly") {
    StratifiedPolynomial d = parse_polynomial(expr, g);
    std::vector<int> e(g->dim(), 0);
    e[g->distinguished()] = 1;
    Rational slope = d.coefficient(MultiIndex(*g->grading(), e));
    if (slope == 0) throw Error(ErrorKind::CharacteristicPoint, "distance polynomial has no x_m term");
    return {slope, d.truncated(c.k), c.k, true};
  }
  return distance_expansion(make_domain(c, g), c.k);
}

CoefficientMatrix read_matrix(const std::string& path, const GroupPtr& g) {
  Json j = read_json_file(path);
  const int m = g->horizontal_dim();
  if (!j.is_array() || static_cast<int>(j.size()) != m)
    throw Error(ErrorKind::FormatError, "coefficient matrix must have " + std::to_string(m) + " rows");
  CoefficientMatrix a;
  for (const auto& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != m)
      throw Error(ErrorKind::FormatError, "coefficient matrix must have " + std::to_string(m) + " columns");
    std::vector<StratifiedPolynomial> r;
    for (const auto& e : row) r.push_back(parse_polynomial(e.is_string() ? e.get<std::string>() : e.dump(), g));
    a.push_back(std::move(r));
  }
  return a;
}

DiffOperator make_operator(const Config& c, const GroupPtr& g) {
  if (c.a_file.empty()) return sub_laplacian(g);
  return operator_from_matrix(read_matrix(c.a_file, g), g);
}

Eigen::MatrixXd constant_matrix(const Config& c, const GroupPtr& g) {
  const int m = g->horizontal_dim();
  if (c.a_file.empty()) return Eigen::MatrixXd::Identity(m, m);
  CoefficientMatrix a = read_matrix(c.a_file, g);
  operator_from_matrix(a, g);
  Eigen::MatrixXd out(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (a[i][j].weighted_degree() > 0) throw UsageError("this subcommand needs a constant coefficient matrix");
      out(i, j) = to_double(a[i][j].constant_term());
    }
  return out;
}

std::uint64_t require_seed(const Config& c) {
  if (!c.seed) throw UsageError("--seed is required");
  return *c.seed;
}

std::vector<double> radii_or_default(const Config& c) {
  if (c.radii.empty()) return default_radii();
  std::vector<double> r = parse_doubles(c.radii);
  for (double x : r)
    if (!(x > 0)) throw UsageError("radii must be positive");
  return r;
}

Json poly_report(const StratifiedPolynomial& p) {
  Json j = polynomial_to_json(p);
  j["text"] = to_string(p);
  return j;
}

std::string cmd_group_info(const Config& c) {
  GroupPtr g = load_group(c);
  Json j = group_to_json(*g);
  j["dimension"] = g->dim();
  j["step"] = g->step();
  j["homogeneous_dimension"] = g->homogeneous_dimension();
  j["gauge_exponent"] = gauge_exponent(*g);
  j["coordinates"] = g->variable_names();
  Json fields = Json::array();
  for (int i = 0; i < g->horizontal_dim(); ++i) {
    const VectorField& x = left_invariant_fields(g)[i];
    Json coeffs = Json::array();
    for (const auto& p : x.coefficients) coeffs.push_back(to_string(p));
    fields.push_back({{"label", x.label}, {"coefficients", coeffs}});
  }
  j["horizontal_fields"] = fields;
  return j.dump(2);
}

std::string cmd_bch(const Config& c) {
  GroupPtr g = load_group(c);
  if (c.p.empty() || c.q.empty()) throw UsageError("bch needs --p and --q");
  return format_element(bch_product(parse_element(g, c.p), parse_element(g, c.q)));
}

std::string cmd_apply(const Config& c) {
  GroupPtr g = load_group(c);
  StratifiedPolynomial f = parse_polynomial(c.f, g);
  Json j;
  j["input"] = to_string(f);
  if (!c.word.empty()) {
    Word w;
    for (double x : parse_doubles(c.word)) {
      if (x != static_cast<int>(x)) throw UsageError("word letters are integers");
      w.push_back(static_cast<int>(x));
    }
    j["word"] = w;
    j["result"] = poly_report(horizontal_derivative(w, f, g));
  } else {
    DiffOperator op = make_operator(c, g);
    j["operator"] = operator_to_json(op);
    j["result"] = poly_report(apply_operator(op, f));
  }
  return j.dump(2);
}

std::string cmd_taylor(const Config& c) {
  GroupPtr g = load_group(c);
  ScalarField f = ScalarField::parse(c.f, g);
  ExactElement g0 = c.at.empty() ? identity<Rational>(g) : parse_element(g, c.at);
  Json j;
  j["f"] = f.to_string();
  j["k"] = c.k;
  j["at"] = format_element(g0);
  StratifiedPolynomial t = f.is_polynomial() ? taylor_poly(f.polynomial(), g0, c.k) : f.jet(g0, c.k);
  j["taylor"] = poly_report(t);
  if (c.check) {
    TaylorCheckOptions o;
    o.seed = require_seed(c);
    o.radii = radii_or_default(c);
    if (c.samples > 0) o.samples = c.samples;
    j["check"] = decay_report_to_json(check_taylor_inequality(f, element_cast<double>(g0), c.k, o));
  }
  return j.dump(2);
}

std::string cmd_approximate(const Config& c) {
  GroupPtr g = load_group(c);
  if (c.mode != "triangular" && c.mode != "general") throw UsageError("--mode must be triangular or general");
  StratifiedPolynomial f = parse_polynomial(c.f, g);
  FreeAssignment free;
  if (c.free != "zero") free = free_assignment_from_json(read_json_file(c.free), g);
  DistanceModel d = make_distance(c, g);
  ApproxResult r = solve_approximating(make_operator(c, g), d, f, c.k, free,
                                       c.mode == "general" ? SolveMode::General : SolveMode::Triangular);
  Json j = approx_result_to_json(r, g);
  j["P_text"] = to_string(r.p);
  j["distance"] = {{"grad_norm", to_fraction_string(d.grad_norm)}, {"exact", d.exact}, {"poly", to_string(d.poly_part)}};
  return j.dump(2);
}

std::string cmd_companions(const Config& c) {
  GroupPtr g = load_group(c);
  if (c.k < 0) throw UsageError("--k must be nonnegative");
  Json basis = Json::array();
  for (const auto& q : harmonic_companions(g, c.k)) basis.push_back(poly_report(q));
  Json j;
  j["kappa"] = c.k;
  j["dimension"] = basis.size();
  j["basis"] = basis;
  return j.dump(2);
}

std::string cmd_verify_decay(const Config& c) {
  GroupPtr g = load_group(c);
  SamplingOptions o;
  o.seed = require_seed(c);
  o.radii = radii_or_default(c);
  if (c.samples > 0) o.samples = c.samples;
  if (c.manufactured) {
    Engine rng(derive_seed(o.seed, 0));
    ManufacturedCase mc{g, c.k, c.alpha, random_polynomial(g, c.k - 1, 4, rng)};
    ManufacturedReport r = manufactured_decay(mc, o);
    Json j;
    j["p_true"] = poly_report(mc.p_true);
    j["approximation"] = approx_result_to_json(r.approx, g);
    j["decay"] = decay_report_to_json(r.decay);
    return j.dump(2);
  }
  ScalarField u = ScalarField::parse(c.u.empty() ? c.f : c.u, g);
  DecayReport r = decay_exponent(u, parse_polynomial(c.pe, g), make_domain(c, g), o);
  return decay_report_to_json(r).dump(2);
}

std::string cmd_verify_barrier(const Config& c) {
  GroupPtr g = load_group(c);
  BarrierOptions o;
  o.seed = require_seed(c);
  o.m_bar = c.m_bar;
  if (c.samples > 0) o.samples = c.samples;
  NumericElement p0 = c.p0.empty() ? identity<double>(g) : numeric_point(g, c.p0);
  BarrierReport r = barrier_check(make_domain(c, g), constant_matrix(c, g), c.f_bound, p0, c.r1, c.k_max, o);
  return barrier_report_to_json(r).dump(2);
}

std::string cmd_mc_solve(const Config& c) {
  GroupPtr g = load_group(c);
  MCOptions o;
  o.seed = require_seed(c);
  o.n_paths = c.n_paths;
  o.dt = c.dt;
  o.workers = c.workers;
  o.a = constant_matrix(c, g);
  if (c.boundary.empty()) throw UsageError("mc-solve needs --g");
  if (c.p.empty()) throw UsageError("mc-solve needs --p");
  Config bounded = c;
  if (!bounded.radius) bounded.radius = 1.0;
  ScalarField source = c.f.empty() ? ScalarField::constant(g, 0) : ScalarField::parse(c.f, g);
  MCEstimate e = mc_dirichlet(make_domain(bounded, g), ScalarField::parse(c.boundary, g), source,
                              numeric_point(g, c.p), o);
  return mc_estimate_to_json(e).dump(2);
}

std::string cmd_char_scan(const Config& c) {
  GroupPtr g = load_group(c);
  CharScanOptions o;
  o.seed = require_seed(c);
  if (c.samples > 0) o.samples = c.samples;
  return char_scan_to_json(characteristic_scan(make_domain(c, g), o)).dump(2);
}

std::string cmd_suite(const Config& c, int& status) {
  std::string text;
  for (const auto& r : run_acceptance(require_seed(c))) {
    text += format_result(r, c.timing) + "\n";
    if (!r.passed) status = 1;
  }
  text.pop_back();
  return text;
}

int usage_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::ArityMismatch:
    case ErrorKind::NotPolynomial:
    case ErrorKind::FormatError:
    case ErrorKind::UnknownName:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Carnot group toolkit", "carnot"};
  app.require_subcommand(1);
  Config c;

  auto common = [&](CLI::App* s) {
    auto* grp = s->add_option("--group", c.group, "built-in group name");
    s->add_option("--group-file", c.group_file, "group definition file (JSON)")->excludes(grp);
    s->add_option("--out", c.out, "write the report to this file");
    return s;
  };
  auto seeded = [&](CLI::App* s) {
    s->add_option("--seed", c.seed, "random seed");
    s->add_option("--samples", c.samples, "sample count");
    return s;
  };
  auto domain = [&](CLI::App* s) {
    s->add_option("--d", c.d, "flat | poly:EXPR | graph:EXPR | phi:EXPR");
    s->add_option("--radius", c.radius, "gauge radius bounding the domain");
    return s;
  };

  auto* info = common(app.add_subcommand("group-info", "structure of a group"));
  auto* bch = common(app.add_subcommand("bch", "exact group product"));
  bch->add_option("--p", c.p, "comma-separated coordinates")->required();
  bch->add_option("--q", c.q, "comma-separated coordinates")->required();

  auto* apply = common(app.add_subcommand("apply", "apply a horizontal word or operator to a polynomial"));
  apply->add_option("--f", c.f, "polynomial expression")->required();
  apply->add_option("--word", c.word, "comma-separated letters, e.g. 1,2");
  apply->add_option("--a", c.a_file, "coefficient matrix file (JSON array of expression strings)");

  auto* taylor = seeded(common(app.add_subcommand("taylor", "stratified Taylor polynomial")));
  taylor->add_option("--f", c.f, "expression")->required();
  taylor->add_option("--k", c.k, "order");
  taylor->add_option("--at", c.at, "base point");
  taylor->add_flag("--check", c.check, "also measure the Taylor remainder decay");
  taylor->add_option("--radii", c.radii, "comma-separated radii");

  auto* approx = domain(common(app.add_subcommand("approximate", "approximating polynomial")));
  approx->add_option("--f", c.f, "polynomial right-hand side")->required();
  approx->add_option("--k", c.k, "order");
  approx->add_option("--free", c.free, "zero | assignment file");
  approx->add_option("--mode", c.mode, "triangular | general");
  approx->add_option("--a", c.a_file, "coefficient matrix file");

  auto* comp = common(app.add_subcommand("companions", "harmonic companions of weighted degree <= k"));
  comp->add_option("--k", c.k, "kappa");

  auto* decay = seeded(domain(common(app.add_subcommand("verify-decay", "boundary decay exponent"))));
  decay->add_option("--u", c.u, "solution expression");
  decay->add_option("--f", c.f, "alias of --u");
  decay->add_option("--pe", c.pe, "polynomial subtracted from u");
  decay->add_option("--radii", c.radii, "comma-separated radii");
  decay->add_flag("--manufactured", c.manufactured, "random manufactured case of order --k");
  decay->add_option("--k", c.k, "order for --manufactured");
  decay->add_option("--alpha", c.alpha, "Holder exponent for --manufactured");

  auto* barrier = seeded(domain(common(app.add_subcommand("verify-barrier", "exterior-ball barrier check"))));
  barrier->add_option("--p0", c.p0, "boundary point");
  barrier->add_option("--r1", c.r1, "exterior ball radius");
  barrier->add_option("--f-bound", c.f_bound, "bound on |f|");
  barrier->add_option("--m-bar", c.m_bar, "barrier constant M");
  barrier->add_option("--k-max", c.k_max, "largest exponent tried");
  barrier->add_option("--a", c.a_file, "constant coefficient matrix file");

  auto* mc = seeded(domain(common(app.add_subcommand("mc-solve", "Monte Carlo Dirichlet estimate"))));
  mc->add_option("--g", c.boundary, "boundary data expression");
  mc->add_option("--f", c.f, "source term expression");
  mc->add_option("--p", c.p, "start point");
  mc->add_option("--n-paths", c.n_paths, "number of paths");
  mc->add_option("--dt", c.dt, "time step");
  mc->add_option("--workers", c.workers, "threads (0: all cores)");
  mc->add_option("--a", c.a_file, "constant coefficient matrix file");

  auto* scan = seeded(domain(common(app.add_subcommand("char-scan", "characteristic point scan"))));
  auto* suite = seeded(common(app.add_subcommand("suite", "acceptance battery")));
  suite->add_flag("--timing", c.timing, "append timings");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "Usage: " << e.what() << "\n";
    return 2;
  }

  int status = 0;
  try {
    std::string report;
    if (info->parsed()) report = cmd_group_info(c);
    else if (bch->parsed()) report = cmd_bch(c);
    else if (apply->parsed()) report = cmd_apply(c);
    else if (taylor->parsed()) report = cmd_taylor(c);
    else if (approx->parsed()) report = cmd_approximate(c);
    else if (comp->parsed()) report = cmd_companions(c);
    else if (decay->parsed()) report = cmd_verify_decay(c);
    else if (barrier->parsed()) report = cmd_verify_barrier(c);
    else if (mc->parsed()) report = cmd_mc_solve(c);
    else if (scan->parsed()) report = cmd_char_scan(c);
    else if (suite->parsed()) report = cmd_suite(c, status);
    if (c.out.empty()) {
      out << report << "\n";
    } else {
      std::ofstream file(c.out, std::ios::binary);
      if (!(file << report << "\n")) throw UsageError("cannot write " + c.out);
    }
  } catch (const UsageError& e) {
    err << "Usage: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return usage_code(e.kind());
  }
  return status;
}

}  // namespace carnot
