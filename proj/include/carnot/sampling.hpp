#pragma once

#include <cstdint>
#include <vector>

#include <boost/random/mersenne_twister.hpp>

#include "carnot/group.hpp"

namespace carnot {

using Engine = boost::random::mt19937_64;

/// splitmix64 mix of (seed, stream): independent streams per path or radius
/// without depending on how work is split across threads.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// n points of the unit gauge ball, rejection-sampled from the box
/// [-1, 1]^N (which contains the ball since ||xi_j|| <= |p|^j).
std::vector<NumericElement> unit_ball_samples(const GroupPtr& g, int n, Engine& rng);

/// Uniform point in the box [-1, 1]^N.
NumericElement box_sample(const GroupPtr& g, Engine& rng);

/// Small random rational a/b with |a| <= num_max, 1 <= b <= den_max.
Rational random_rational(Engine& rng, int num_max = 9, int den_max = 5);
ExactElement random_exact_element(const GroupPtr& g, Engine& rng);
/// Sum of `terms` random monomials of weighted degree in [min_degree, max_degree].
StratifiedPolynomial random_polynomial(const GroupPtr& g, int max_degree, int terms, Engine& rng, int min_degree = 0);

}  // namespace carnot
