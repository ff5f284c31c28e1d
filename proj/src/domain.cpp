#include "carnot/domain.hpp"

#include <cmath>

namespace carnot {

Domain Domain::from_graph(const ScalarField& h, std::optional<double> radius) {
  const GroupPtr& g = h.group();
  const int xm = g->distinguished();
  if (h.is_polynomial()) {
    StratifiedPolynomial p = h.polynomial();
    if (!p.derivative(xm).is_zero())
      throw Error(ErrorKind::BadGraph, "graph function depends on " + g->variable_names()[xm]);
  }
  Domain d;
  d.group = g;
  d.graph = h;
  d.radius = radius;
  if (h.is_opaque()) {
    d.phi = ScalarField::from_function(
        g, [h, xm](std::span<const double> p) { return h(p) - p[xm]; }, "(" + h.to_string() + ") - x_m");
    return d;
  }
  NumericPolynomial jet = h.jet(identity<double>(g), 1);
  constexpr double tol = 1e-12;
  if (std::abs(jet.constant_term()) > tol) throw Error(ErrorKind::BadGraph, "h(0) must vanish");
  for (const auto& [j, c] : jet.terms())
    if (j.weighted_degree() == 1 && std::abs(c) > tol)
      throw Error(ErrorKind::BadGraph, "the horizontal gradient of h must vanish at the origin");
  d.phi = ScalarField::parse("(" + h.to_string() + ") - " + g->variable_names()[xm], g);
  return d;
}

Domain Domain::from_defining(const ScalarField& phi, std::optional<double> radius) {
  Domain d;
  d.group = phi.group();
  d.phi = phi;
  d.radius = radius;
  return d;
}

bool Domain::contains(std::span<const double> p) const {
  if (radius) {
    if (!(gauge_power<double>(*group, p) < std::pow(*radius, gauge_exponent(*group)))) return false;
  }
  return phi(p) < 0;
}

}  // namespace carnot
