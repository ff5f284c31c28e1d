#pragma once

#include <optional>
#include <span>

#include "carnot/expression.hpp"

namespace carnot {

/// Omega = {phi < 0}, optionally intersected with the gauge ball B(radius).
/// Graph domains {x_m > h(x', y)} carry h and use phi = h - x_m.
struct Domain {
  GroupPtr group;
  ScalarField phi;
  std::optional<ScalarField> graph;
  std::optional<double> radius;

  /// h must not involve x_m and must satisfy h(0) = 0, grad_{x'} h(0) = 0 (BadGraph).
  static Domain from_graph(const ScalarField& h, std::optional<double> radius = std::nullopt);
  static Domain from_defining(const ScalarField& phi, std::optional<double> radius = std::nullopt);

  bool contains(std::span<const double> p) const;
  bool contains(const NumericElement& p) const { return contains(p.span()); }
};

}  // namespace carnot
