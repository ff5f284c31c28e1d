#include "carnot/finite_difference.hpp"

namespace carnot {

namespace {

double nested(const Word& word, std::size_t pos, const ScalarField& f, std::vector<double>& p, double h,
              const GroupPtr& g) {
  if (pos == word.size()) return f(p);
  std::vector<double> step(g->dim(), 0.0);
  step[word[pos] - 1] = h;
  std::vector<double> fwd = compiled_product(g, p, step);
  step[word[pos] - 1] = -h;
  std::vector<double> bwd = compiled_product(g, p, step);
  return (nested(word, pos + 1, f, fwd, h, g) - nested(word, pos + 1, f, bwd, h, g)) / (2 * h);
}

}  // namespace

double fd_horizontal_derivative(const Word& word, const ScalarField& f, const NumericElement& p, double h_step) {
  const GroupPtr& g = p.group;
  if (!(h_step > 0)) throw Error(ErrorKind::InvalidArgument, "finite-difference step must be positive");
  for (int letter : word)
    if (letter < 1 || letter > g->horizontal_dim())
      throw Error(ErrorKind::BadWord, "letter " + std::to_string(letter) + " is not horizontal");
  std::vector<double> start(p.coords.data(), p.coords.data() + p.dim());
  double v = nested(word, 0, f, start, h_step, g);
  if (!std::isfinite(v)) throw Error(ErrorKind::EvaluationFailure, "finite difference is not finite");
  return v;
}

}  // namespace carnot
