#include "carnot/polynomial.hpp"

#include <numeric>
#include <sstream>

namespace carnot {

MultiIndex::MultiIndex(const Grading& g, std::vector<int> exponents) : exps_(std::move(exponents)) {
  if (static_cast<int>(exps_.size()) != g.nvars())
    throw Error(ErrorKind::ArityMismatch, "multi-index length " + std::to_string(exps_.size()) +
                                              " vs " + std::to_string(g.nvars()) + " variables");
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent");
    wdeg_ += g.weights[i] * exps_[i];
  }
  dist_ = exps_.empty() ? 0 : exps_[g.distinguished];
}

int MultiIndex::length() const { return std::accumulate(exps_.begin(), exps_.end(), 0); }

std::vector<MultiIndex> monomial_basis(const Grading& g, int kappa) {
  std::vector<MultiIndex> out;
  if (kappa < 0) return out;
  std::vector<int> e(g.nvars(), 0);
  std::function<void(int, int)> rec = [&](int var, int budget) {
    if (var == g.nvars()) {
      out.emplace_back(g, e);
      return;
    }
    for (int k = 0; k * g.weights[var] <= budget; ++k) {
      e[var] = k;
      rec(var + 1, budget - k * g.weights[var]);
    }
    e[var] = 0;
  };
  rec(0, kappa);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

template <class C>
std::string coeff_string(const C& c);

template <>
std::string coeff_string<Rational>(const Rational& c) {
  return to_string(c);
}

template <>
std::string coeff_string<double>(const double& c) {
  std::ostringstream os;
  os.precision(17);
  os << c;
  return os.str();
}

template <class C>
std::string render(const BasicPolynomial<C>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [j, c] : p.terms()) {
    bool negative = c < C(0);
    C mag = negative ? C(-c) : c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (int i = 0; i < j.size(); ++i) {
      if (j[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      const auto& names = p.grading()->names;
      mono += i < static_cast<int>(names.size()) ? names[i] : "z" + std::to_string(i + 1);
      if (j[i] > 1) mono += "^" + std::to_string(j[i]);
    }
    if (mono.empty()) {
      out += coeff_string(mag);
    } else if (mag == C(1)) {
      out += mono;
    } else {
      out += coeff_string(mag) + "*" + mono;
    }
  }
  return out;
}

}  // namespace

std::string to_string(const StratifiedPolynomial& p) { return render(p); }
std::string to_string(const NumericPolynomial& p) { return render(p); }

}  // namespace carnot
