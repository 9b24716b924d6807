#pragma once

// Monte Carlo and closed-form evaluation of the limiting constants:
//   phi_T(t)          isolated T-subgraphs per vertex, thermodynamic regime
//   k^-1 E_f[phi_T(lambda f(X))]
//   E_f[exp(-theta lambda f(X))]  isolated vertices, random-radius model
//   mu_T              normalised T-subgraph counts, sparse regime

#include <cstdint>
#include <vector>

#include "rgd/core_model.hpp"
#include "rgd/estimate.hpp"
#include "rgd/motif.hpp"

namespace rgd {

struct SectorConfiguration {
  std::vector<Point2> apexes;  // apexes[0] is the origin
  std::vector<double> orientations;
  double alpha = kTwoPi;
};

struct MonteCarloOptions {
  std::uint64_t samples = 100000;
  /// Hit-or-miss draws per union-area evaluation in nested estimators.
  std::uint64_t inner_samples = 4096;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Radius of the disk the relative apex positions are drawn from; 0 means
  /// the pattern order k, which already contains every connected configuration.
  double sampling_radius = 0.0;
};

/// Hit-or-miss area of the union of unit-radius sectors over the apex
/// bounding box inflated by one.
LimitEstimate sector_union_area(const SectorConfiguration& config, std::uint64_t samples,
                                std::uint64_t seed, unsigned threads = 1);

LimitEstimate estimate_phi(const MotifPattern& pattern, double alpha, double t,
                           const MonteCarloOptions& opts);

LimitEstimate thermodynamic_limit(const MotifPattern& pattern, double alpha, double lambda,
                                  const DensitySpec& density, const MonteCarloOptions& opts);

LimitEstimate isolated_vertex_limit(const DensitySpec& density, const NormSpec& norm,
                                    double lambda, std::uint64_t samples, std::uint64_t seed,
                                    unsigned threads = 1);

/// Product of the geometric factor (1/k!) * |D(0,rho)|^{k-1} * E[h_T] and
/// the integral of f^k, with errors combined in quadrature.
LimitEstimate estimate_mu(const MotifPattern& pattern, double alpha, const DensitySpec& density,
                          const MonteCarloOptions& opts);

/// k = 2 only: mutual pair (pi/2) p^2 * int f^2, single arc pi p (1 - p) * int f^2,
/// with p = alpha / (2 pi).
LimitEstimate closed_form_mu_k2(const MotifPattern& pattern, double alpha,
                                const DensitySpec& density);

/// Analytic integral of f^k for every supported density.
double density_power_integral_exact(const DensitySpec& density, int k);

}  // namespace rgd
