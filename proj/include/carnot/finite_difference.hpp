#pragma once

#include "carnot/diffop.hpp"
#include "carnot/expression.hpp"

namespace carnot {

/// X^I f(p) by nested central differences along p o exp(+-h e_i); the first
/// letter of the word is the outermost difference.
double fd_horizontal_derivative(const Word& word, const ScalarField& f, const NumericElement& p, double h_step);

}  // namespace carnot
