#include "carnot/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace carnot {

namespace {

Json label_json(const Stratification& g, int flat) {
  BasisLabel l = g.label_of(flat);
  return Json::array({l.layer, l.slot});
}

int label_from_json(const Json& j, const Stratification& g) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::FormatError, "basis label must be [layer, slot]");
  return g.flat_index({j[0].get<int>(), j[1].get<int>()});
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw Error(ErrorKind::FormatError, "rational must be a \"num/den\" string");
}

/// JSON has no infinities; they are written as null.
Json number_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double number_from_json(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::FormatError, e.what());
  }
}

}  // namespace

Json group_to_json(const Stratification& g) {
  Json out;
  out["name"] = g.name();
  out["layers"] = g.layer_dims();
  Json brackets = Json::array();
  for (const auto& [key, comb] : g.structure_constants()) {
    Json result = Json::array();
    for (const auto& [c, v] : comb) result.push_back({{"basis", label_json(g, c)}, {"coeff", to_fraction_string(v)}});
    brackets.push_back({{"left", label_json(g, key.first)}, {"right", label_json(g, key.second)}, {"result", result}});
  }
  out["brackets"] = brackets;
  return out;
}

GroupPtr group_from_json(const Json& j) {
  return guarded([&] {
    static const std::set<std::string> keys{"name", "layers", "brackets", "names"};
    for (const auto& [k, v] : j.items())
      if (!keys.count(k)) throw Error(ErrorKind::FormatError, "unknown key '" + k + "' in group file");
    std::vector<int> layers = j.at("layers").get<std::vector<int>>();
    if (layers.empty()) throw Error(ErrorKind::InvalidArgument, "no layers");
    std::vector<int> offsets{0};
    for (int d : layers) {
      if (d <= 0) throw Error(ErrorKind::InvalidArgument, "layer dimensions must be positive");
      offsets.push_back(offsets.back() + d);
    }
    auto flat = [&](const Json& l) {
      if (!l.is_array() || l.size() != 2) throw Error(ErrorKind::FormatError, "basis label must be [layer, slot]");
      int layer = l[0].get<int>(), slot = l[1].get<int>();
      if (layer < 1 || layer > static_cast<int>(layers.size()) || slot < 1 || slot > layers[layer - 1])
        throw Error(ErrorKind::InvalidArgument, "basis label out of range");
      return offsets[layer - 1] + slot - 1;
    };
    std::vector<BracketEntry> table;
    for (const auto& b : j.value("brackets", Json::array())) {
      BracketEntry e{flat(b.at("left")), flat(b.at("right")), {}};
      for (const auto& r : b.at("result")) e.result.emplace_back(flat(r.at("basis")), rational_from_json(r.at("coeff")));
      table.push_back(std::move(e));
    }
    std::vector<std::string> names;
    if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
    return build_algebra(layers, table, j.value("name", std::string()), names);
  });
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::NotFound, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::FormatError, path + ": " + e.what());
  }
}

GroupPtr read_group_file(const std::string& path) { return group_from_json(read_json_file(path)); }

Json polynomial_to_json(const StratifiedPolynomial& p) {
  Json terms = Json::array();
  for (const auto& [j, c] : p.terms()) terms.push_back({{"exponents", j.exponents()}, {"coeff", to_fraction_string(c)}});
  return {{"nvars", p.nvars()}, {"terms", terms}};
}

StratifiedPolynomial polynomial_from_json(const Json& j, const GroupPtr& g) {
  return guarded([&] {
    const GradingPtr& gr = g->grading();
    if (j.at("nvars").get<int>() != gr->nvars())
      throw Error(ErrorKind::ArityMismatch, "polynomial has " + std::to_string(j.at("nvars").get<int>()) +
                                                " variables, group has " + std::to_string(gr->nvars()));
    StratifiedPolynomial p(gr);
    for (const auto& t : j.at("terms"))
      p.add_term(MultiIndex(*gr, t.at("exponents").get<std::vector<int>>()), rational_from_json(t.at("coeff")));
    return p;
  });
}

Json operator_to_json(const DiffOperator& op) {
  const Stratification& g = *op.group;
  Json second = Json::array(), first = Json::array();
  for (const auto& [ab, c] : op.second)
    second.push_back({{"slots", Json::array({label_json(g, ab.first), label_json(g, ab.second)})},
                      {"coeff", polynomial_to_json(c)}});
  for (const auto& [a, c] : op.first) first.push_back({{"slot", label_json(g, a)}, {"coeff", polynomial_to_json(c)}});
  return {{"second", second}, {"first", first}, {"zeroth", polynomial_to_json(op.zeroth)}};
}

DiffOperator operator_from_json(const Json& j, const GroupPtr& g) {
  return guarded([&] {
    DiffOperator op(g);
    for (const auto& s : j.at("second"))
      op.add_second(label_from_json(s.at("slots").at(0), *g), label_from_json(s.at("slots").at(1), *g),
                    polynomial_from_json(s.at("coeff"), g));
    for (const auto& f : j.at("first"))
      op.add_first(label_from_json(f.at("slot"), *g), polynomial_from_json(f.at("coeff"), g));
    op.zeroth = polynomial_from_json(j.at("zeroth"), g);
    return op;
  });
}

Json free_assignment_to_json(const FreeAssignment& free, const GroupPtr& g) {
  Json out = Json::object();
  for (const auto& [j, c] : free)
    out[to_string(StratifiedPolynomial::monomial(g->grading(), j.exponents()))] = to_fraction_string(c);
  return out;
}

FreeAssignment free_assignment_from_json(const Json& j, const GroupPtr& g) {
  return guarded([&] {
    if (!j.is_object()) throw Error(ErrorKind::FormatError, "free assignment must be an object");
    FreeAssignment out;
    for (const auto& [key, value] : j.items()) {
      StratifiedPolynomial m = ScalarField::parse(key, g).polynomial();
      if (m.size() != 1 || m.terms().begin()->second != 1)
        throw Error(ErrorKind::FreeKeyInvalid, "'" + key + "' is not a monomial");
      out[m.terms().begin()->first] = rational_from_json(value);
    }
    return out;
  });
}

Json approx_result_to_json(const ApproxResult& r, const GroupPtr& g) {
  Json residuals = Json::array();
  for (const auto& [w, v] : r.residuals) residuals.push_back({{"word", w}, {"value", to_fraction_string(v)}});
  return {{"P", polynomial_to_json(r.p)},
          {"residuals", residuals},
          {"free_assignment", free_assignment_to_json(r.free_assignment, g)}};
}

ApproxResult approx_result_from_json(const Json& j, const GroupPtr& g) {
  return guarded([&] {
    ApproxResult r;
    r.p = polynomial_from_json(j.at("P"), g);
    for (const auto& e : j.at("residuals")) r.residuals[e.at("word").get<Word>()] = rational_from_json(e.at("value"));
    r.free_assignment = free_assignment_from_json(j.at("free_assignment"), g);
    return r;
  });
}

Json decay_report_to_json(const DecayReport& r) {
  Json residuals = Json::array();
  for (double x : r.residuals) residuals.push_back(number_json(x));
  return {{"radii", r.radii}, {"residuals", residuals}, {"slope", number_json(r.slope)},
          {"intercept", number_json(r.intercept)}};
}

DecayReport decay_report_from_json(const Json& j) {
  return guarded([&] {
    DecayReport r;
    r.radii = j.at("radii").get<std::vector<double>>();
    for (const auto& x : j.at("residuals")) r.residuals.push_back(number_from_json(x));
    r.slope = number_from_json(j.at("slope"));
    r.intercept = number_from_json(j.at("intercept"));
    return r;
  });
}

Json barrier_report_to_json(const BarrierReport& r) {
  return {{"k_found", r.k_found ? Json(*r.k_found) : Json(nullptr)},
          {"margin", number_json(r.margin)},
          {"samples", r.samples}};
}

Json mc_estimate_to_json(const MCEstimate& e) {
  return {{"mean", e.mean}, {"std_error", e.std_error}, {"n_paths", e.n_paths}, {"seed", e.seed}};
}

Json char_scan_to_json(const CharScanResult& r) {
  return {{"min_grad", number_json(r.min_grad)},
          {"argmin", r.argmin.group ? format_element(r.argmin) : std::string()},
          {"characteristic", r.characteristic},
          {"samples", r.samples}};
}

}  // namespace carnot
