#include "carnot/group.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace carnot {

namespace {

Rational factorial(int n) {
  Rational f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Dynkin's series: sum over n and (r_i, s_i) with r_i + s_i >= 1 of
// (-1)^{n-1}/n * [X^{r_1} Y^{s_1} ... X^{r_n} Y^{s_n}] / ((sum r_i + s_i) prod r_i! s_i!).
std::vector<BchWord> compute_bch_words(int max_weight) {
  std::map<std::vector<int>, Rational> acc;
  std::vector<std::pair<int, int>> blocks;
  std::function<void(int)> rec = [&](int used) {
    if (!blocks.empty()) {
      int n = static_cast<int>(blocks.size());
      Rational c = Rational(n % 2 == 1 ? 1 : -1, n) / Rational(used);
      std::vector<int> word;
      for (auto [r, s] : blocks) {
        c /= factorial(r) * factorial(s);
        word.insert(word.end(), r, 0);
        word.insert(word.end(), s, 1);
      }
      // A right-nested bracket ending in two equal letters vanishes.
      bool trivial = word.size() >= 2 && word[word.size() - 1] == word[word.size() - 2];
      if (!trivial) acc[word] += c;
    }
    for (int r = 0; used + r <= max_weight; ++r)
      for (int s = 0; used + r + s <= max_weight; ++s) {
        if (r + s == 0) continue;
        blocks.emplace_back(r, s);
        rec(used + r + s);
        blocks.pop_back();
      }
  };
  rec(0);
  std::vector<BchWord> out;
  for (auto& [w, c] : acc)
    if (c != 0) out.push_back({w, c});
  std::sort(out.begin(), out.end(), [](const BchWord& a, const BchWord& b) {
    return a.letters.size() != b.letters.size() ? a.letters.size() < b.letters.size() : a.letters < b.letters;
  });
  return out;
}

std::mutex cache_mutex;

struct CompiledLaw {
  GroupPtr group;
  struct Term {
    double coeff;
    std::vector<std::pair<int, int>> factors;
  };
  std::vector<std::vector<Term>> comps;
};

std::map<const Stratification*, std::shared_ptr<const GroupLawMap>>& law_cache() {
  static std::map<const Stratification*, std::shared_ptr<const GroupLawMap>> cache;
  return cache;
}

}  // namespace

const std::vector<BchWord>& bch_words(int max_weight) {
  static std::map<int, std::vector<BchWord>> memo;
  static std::mutex m;
  std::lock_guard lock(m);
  auto it = memo.find(max_weight);
  if (it == memo.end()) it = memo.emplace(max_weight, compute_bch_words(max_weight)).first;
  return it->second;
}

int gauge_exponent(const Stratification& g) {
  int f = 1;
  for (int i = 2; i <= g.step(); ++i) f *= i;
  return 2 * f;
}

const GroupLawMap& group_law_polynomials(const GroupPtr& g) {
  {
    std::lock_guard lock(cache_mutex);
    if (auto it = law_cache().find(g.get()); it != law_cache().end()) return *it->second;
  }
  const int n = g->dim();
  const GradingPtr& dg = g->doubled_grading();
  std::vector<StratifiedPolynomial> a, b;
  for (int i = 0; i < n; ++i) {
    a.push_back(StratifiedPolynomial::variable(dg, i));
    b.push_back(StratifiedPolynomial::variable(dg, n + i));
  }
  auto law = std::make_shared<GroupLawMap>();
  law->group = g;
  law->components = bch_coords<StratifiedPolynomial>(*g, a, b);
  std::lock_guard lock(cache_mutex);
  auto [it, inserted] = law_cache().try_emplace(g.get(), law);
  return *it->second;
}

namespace {

const CompiledLaw& compiled_law(const GroupPtr& g) {
  static std::map<const Stratification*, std::shared_ptr<const CompiledLaw>> cache;
  {
    std::lock_guard lock(cache_mutex);
    if (auto it = cache.find(g.get()); it != cache.end()) return *it->second;
  }
  const GroupLawMap& law = group_law_polynomials(g);
  auto compiled = std::make_shared<CompiledLaw>();
  compiled->group = g;
  for (const auto& comp : law.components) {
    std::vector<CompiledLaw::Term> terms;
    for (const auto& [j, c] : comp.terms()) {
      CompiledLaw::Term t{to_double(c), {}};
      for (int i = 0; i < j.size(); ++i)
        if (j[i] > 0) t.factors.emplace_back(i, j[i]);
      terms.push_back(std::move(t));
    }
    compiled->comps.push_back(std::move(terms));
  }
  std::lock_guard lock(cache_mutex);
  // The cached entry holds the group, so its address cannot be reused.
  auto [it, inserted] = cache.try_emplace(g.get(), compiled);
  return *it->second;
}

}  // namespace

std::vector<double> compiled_product(const GroupPtr& g, std::span<const double> a,
                                     std::span<const double> b) {
  const CompiledLaw& law = compiled_law(g);
  const int n = g->dim();
  double vars[64];
  std::vector<double> big;
  double* v = vars;
  if (2 * n > 64) {
    big.resize(2 * n);
    v = big.data();
  }
  for (int i = 0; i < n; ++i) {
    v[i] = a[i];
    v[n + i] = b[i];
  }
  std::vector<double> out(n, 0.0);
  for (int c = 0; c < n; ++c) {
    double s = 0;
    for (const auto& t : law.comps[c]) {
      double x = t.coeff;
      for (auto [var, pw] : t.factors)
        for (int k = 0; k < pw; ++k) x *= v[var];
      s += x;
    }
    out[c] = s;
  }
  return out;
}

namespace {

template <class S>
std::vector<BasicPolynomial<S>> translation_components(const GroupElement<S>& g) {
  const GroupLawMap& law = group_law_polynomials(g.group);
  const int n = g.group->dim();
  const GradingPtr& target = g.group->grading();
  std::vector<BasicPolynomial<S>> out;
  for (const auto& comp : law.components) {
    BasicPolynomial<S> r(target);
    for (const auto& [j, c] : comp.terms()) {
      S coef = scalar_cast<S>(c);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < j[i]; ++k) coef *= g.coords(i);
      std::vector<int> e(j.exponents().begin() + n, j.exponents().end());
      r.add_term(MultiIndex(*target, std::move(e)), coef);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::vector<StratifiedPolynomial> left_translation_map(const ExactElement& g) {
  return translation_components(g);
}

std::vector<NumericPolynomial> left_translation_map(const NumericElement& g) {
  return translation_components(g);
}

StratifiedPolynomial left_translate(const StratifiedPolynomial& p, const ExactElement& g) {
  if (!same_grading(p.grading(), g.group->grading()))
    throw Error(ErrorKind::GroupMismatch, "polynomial and translation live on different groups");
  auto subs = left_translation_map(g);
  StratifiedPolynomial r = substitute<Rational>(p, subs, g.group->grading());
  if (r.weighted_degree() > p.weighted_degree())
    throw Error(ErrorKind::InvalidArgument, "left translation raised the weighted degree");
  return r;
}

std::string format_element(const ExactElement& p) {
  std::string out;
  for (int i = 0; i < p.dim(); ++i) {
    if (i) out += ",";
    out += to_string(p.coords(i));
  }
  return out;
}

std::string format_element(const NumericElement& p) {
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < p.dim(); ++i) {
    if (i) os << ",";
    os << p.coords(i);
  }
  return os.str();
}

ExactElement parse_element(const GroupPtr& g, const std::string& text) {
  std::vector<Rational> coords;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) coords.push_back(parse_rational(item));
  if (!text.empty() && text.back() == ',') throw Error(ErrorKind::ParseError, "trailing comma in element");
  return make_element<Rational>(g, std::move(coords));
}

HorizontalStepper::HorizontalStepper(const GroupPtr& g) : n_(g->dim()), m_(g->horizontal_dim()) {
  const GroupLawMap& law = group_law_polynomials(g);
  for (const auto& comp : law.components) {
    std::vector<Term> terms;
    for (const auto& [j, c] : comp.terms()) {
      bool keep = true;
      for (int i = n_ + m_; i < 2 * n_; ++i)
        if (j[i] > 0) keep = false;
      if (!keep) continue;
      Term t{to_double(c), {}};
      for (int i = 0; i < n_ + m_; ++i)
        if (j[i] > 0) t.factors.emplace_back(i, j[i]);
      terms.push_back(std::move(t));
    }
    comps_.push_back(std::move(terms));
  }
  vars_.resize(n_ + m_);
  out_.resize(n_);
}

void HorizontalStepper::step(std::span<double> p, std::span<const double> v) const {
  for (int i = 0; i < n_; ++i) vars_[i] = p[i];
  for (int i = 0; i < m_; ++i) vars_[n_ + i] = v[i];
  for (int c = 0; c < n_; ++c) {
    double s = 0;
    for (const auto& t : comps_[c]) {
      double x = t.coeff;
      for (auto [var, pw] : t.factors)
        for (int k = 0; k < pw; ++k) x *= vars_[var];
      s += x;
    }
    out_[c] = s;
  }
  for (int i = 0; i < n_; ++i) p[i] = out_[i];
}

}  // namespace carnot
