#include "carnot/sampling.hpp"

#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace carnot {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

NumericElement box_sample(const GroupPtr& g, Engine& rng) {
  boost::random::uniform_real_distribution<double> u(-1.0, 1.0);
  NumericElement p = identity<double>(g);
  for (int i = 0; i < g->dim(); ++i) p.coords(i) = u(rng);
  return p;
}

std::vector<NumericElement> unit_ball_samples(const GroupPtr& g, int n, Engine& rng) {
  std::vector<NumericElement> out;
  out.reserve(n);
  while (static_cast<int>(out.size()) < n) {
    NumericElement p = box_sample(g, rng);
    if (gauge_power(p) <= 1.0) out.push_back(std::move(p));
  }
  return out;
}

Rational random_rational(Engine& rng, int num_max, int den_max) {
  boost::random::uniform_int_distribution<int> num(-num_max, num_max), den(1, den_max);
  int a = num(rng);
  return Rational(a, den(rng));
}

ExactElement random_exact_element(const GroupPtr& g, Engine& rng) {
  ExactElement p = identity<Rational>(g);
  for (int i = 0; i < g->dim(); ++i) p.coords(i) = random_rational(rng);
  return p;
}

StratifiedPolynomial random_polynomial(const GroupPtr& g, int max_degree, int terms, Engine& rng, int min_degree) {
  std::vector<MultiIndex> basis;
  for (const MultiIndex& j : monomial_basis(*g->grading(), max_degree))
    if (j.weighted_degree() >= min_degree) basis.push_back(j);
  StratifiedPolynomial p(g->grading());
  if (basis.empty()) return p;
  boost::random::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  for (int t = 0; t < terms; ++t) {
    const MultiIndex& j = basis[pick(rng)];
    p.add_term(j, random_rational(rng));
  }
  return p;
}

}  // namespace carnot
