#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "carnot/approximator.hpp"
#include "carnot/domain.hpp"
#include "carnot/finite_difference.hpp"
#include "carnot/sampling.hpp"
#include "carnot/taylor.hpp"

namespace carnot {

/// max over sampled pairs of |f(p) - f(p')| / d(p, p')^alpha: a lower bound
/// for the Holder seminorm in the gauge pseudodistance.
double holder_seminorm(const ScalarField& f, const std::vector<NumericElement>& points, double alpha);

struct SamplingOptions {
  std::vector<double> radii = default_radii();
  int samples = 200;
  std::uint64_t seed = 1;
};

/// sup |u - P_e| over samples of Omega intersected with B(rho), per radius.
DecayReport decay_exponent(const ScalarField& u, const StratifiedPolynomial& pe, const Domain& domain,
                           const SamplingOptions& options = {});

struct BarrierOptions {
  /// The constant M in g = (M + f_bound)(1 - (r1^2/psi)^k).
  double m_bar = 1.0;
  int samples = 400;
  std::uint64_t seed = 1;
  double fd_step = 1e-3;
};

struct BarrierReport {
  std::optional<int> k_found;
  /// Worst slack min(-f_bound - L g) at k_found, or the best over the scan.
  double margin = 0;
  int samples = 0;
};

/// Scans k = 1..k_max for the barrier g above on Omega intersected with the
/// Euclidean ball B_e(p0, r1); L = sum a_ij X_i X_j with constant a.
BarrierReport barrier_check(const Domain& domain, const Eigen::MatrixXd& a, double f_bound,
                            const NumericElement& p0, double r1, int k_max, const BarrierOptions& options = {});

/// g = (M + f_bound)(1 - (r1^2/psi)^k) with psi the squared Euclidean
/// distance to p0 - r1 nu.
ScalarField barrier_function(const Domain& domain, const NumericElement& p0, double r1, int k, double f_bound,
                             double m_bar);

struct MCOptions {
  int n_paths = 100000;
  double dt = 1e-4;
  std::uint64_t seed = 0;
  long max_steps = 100'000'000;
  int workers = 0;  // 0: hardware concurrency
  /// Constant coefficient matrix; identity (Delta_H) when empty.
  Eigen::MatrixXd a;
};

struct MCEstimate {
  double mean = 0;
  double std_error = 0;
  int n_paths = 0;
  std::uint64_t seed = 0;
};

/// u(p) = E[g(exit)] - (1/2) E[int f] for sum a_ij X_i X_j u = f, u = g on the
/// boundary, from the scheme p <- p o exp(sqrt(dt) A^{1/2} zeta). The domain
/// must be bounded (a gauge radius is required).
MCEstimate mc_dirichlet(const Domain& domain, const ScalarField& boundary_data, const ScalarField& f,
                        const NumericElement& p, const MCOptions& options);

struct CharScanOptions {
  int samples = 2000;
  std::uint64_t seed = 1;
  /// Boundary samples are drawn with coordinates in [-box, box].
  double box = 1.0;
  double tolerance = 1e-8;
  double fd_step = 1e-5;
};

struct CharScanResult {
  double min_grad = 0;
  NumericElement argmin;
  bool characteristic = false;
  int samples = 0;
};

/// |grad_H phi| on boundary samples (the origin included when it lies on the
/// boundary), symbolic for polynomial phi.
CharScanResult characteristic_scan(const Domain& domain, const CharScanOptions& options = {});

/// Horizontal gradient (X_1 phi, ..., X_m phi) at p.
std::vector<double> horizontal_gradient(const Domain& domain, const NumericElement& p, double fd_step = 1e-5);

struct NontangentialOptions {
  double a = 0.25;
  int directions = 2000;
  std::uint64_t seed = 1;
};

/// Gauge distance from an interior point to the boundary, sampled along
/// dilation rays p o delta_s(u), |u| = 1.
double boundary_distance(const Domain& domain, const NumericElement& p, double max_radius, int directions,
                         std::uint64_t seed);

/// p3 = p1 o delta_t(exp(c nu)) with nu the inward horizontal normal, c chosen
/// so that d(p3, p1)/t and d(p3, boundary)/t both lie in [a, 1/a].
NumericElement nontangential_point(const Domain& domain, const NumericElement& p1, double t,
                                   const NontangentialOptions& options = {});

struct VolumeRatio {
  double ratio = 0;
  double expected = 0;
  double relative_error = 0;
};

/// |B(2)| / |B(1)| from independent box samples.
VolumeRatio volume_ratio(const GroupPtr& g, int samples, std::uint64_t seed);

struct DistanceProbe {
  /// max d_e / d over the pairs.
  double c1 = 0;
  double epsilon = 0;
  /// max d / d_e^epsilon.
  double c2 = 0;
  int pairs = 0;
};

DistanceProbe distance_probe(const GroupPtr& g, int pairs, std::uint64_t seed);

/// u = x_m P + x_m |p|^{k-1+alpha} on the half-space {x_m > 0}: runs the
/// Algorithm with f = Delta_H(x_m P) and the free coefficients of P, then
/// measures the decay of u - x_m P_found.
struct ManufacturedCase {
  GroupPtr group;
  int k = 2;
  double alpha = 0.5;
  StratifiedPolynomial p_true;
};

struct ManufacturedReport {
  ApproxResult approx;
  DecayReport decay;
};

ManufacturedReport manufactured_decay(const ManufacturedCase& c, const SamplingOptions& options = {});

}  // namespace carnot
