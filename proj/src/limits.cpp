#include "rgd/limits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rgd/census.hpp"
#include "rgd/parallel.hpp"
#include "rgd/random.hpp"

namespace rgd {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

constexpr int kMaxK = kMaxMotifOrder;

/// Relative configuration: apex 0 at the origin, the others uniform in
/// D(0, radius); orientations uniform.
struct Configuration {
  int k = 0;
  double xy[2 * kMaxK] = {};
  double y[kMaxK] = {};
};

Configuration draw_configuration(int k, double radius, CounterRng& rng) {
  Configuration c;
  c.k = k;
  for (int i = 1; i < k; ++i) {
    double a, b;
    do {
      a = 2.0 * rng.uniform() - 1.0;
      b = 2.0 * rng.uniform() - 1.0;
    } while (a * a + b * b >= 1.0);
    c.xy[2 * i] = radius * a;
    c.xy[2 * i + 1] = radius * b;
  }
  for (int i = 0; i < k; ++i) c.y[i] = rng.angle();
  return c;
}

AdjacencyBits adjacency_of(const Configuration& c, double alpha) {
  return sector_configuration_adjacency(c.k, {c.xy, static_cast<std::size_t>(2 * c.k)},
                                        {c.y, static_cast<std::size_t>(c.k)}, alpha);
}

struct AreaDraw {
  double area;
  double std_error;
};

AreaDraw union_area(int k, const double* xy, const double* y, double alpha,
                    std::uint64_t samples, CounterRng& rng) {
  double lo_x = xy[0], hi_x = xy[0], lo_y = xy[1], hi_y = xy[1];
  for (int i = 1; i < k; ++i) {
    lo_x = std::min(lo_x, xy[2 * i]);
    hi_x = std::max(hi_x, xy[2 * i]);
    lo_y = std::min(lo_y, xy[2 * i + 1]);
    hi_y = std::max(hi_y, xy[2 * i + 1]);
  }
  lo_x -= 1.0;
  lo_y -= 1.0;
  hi_x += 1.0;
  hi_y += 1.0;
  const double w = hi_x - lo_x, h = hi_y - lo_y, box = w * h;
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const double qx = lo_x + w * rng.uniform();
    const double qy = lo_y + h * rng.uniform();
    for (int i = 0; i < k; ++i)
      if (sector_contains(xy[2 * i], xy[2 * i + 1], y[i], alpha, 1.0, qx, qy)) {
        ++hits;
        break;
      }
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {box * p, box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || alpha > kTwoPi) fail("alpha must lie in (0, 2*pi]");
}

double sampling_radius(const MonteCarloOptions& o, int k) {
  return o.sampling_radius > 0.0 ? o.sampling_radius : static_cast<double>(k);
}

LimitEstimate monte_carlo(double scale, const MeanAccumulator& acc, const MonteCarloOptions& o) {
  LimitEstimate e;
  e.value = scale * acc.mean();
  e.std_error = std::abs(scale) * acc.std_error();
  e.samples = acc.count;
  e.method = EstimateMethod::MonteCarlo;
  e.seed = o.seed;
  return e;
}

constexpr const char* kNoHitWarning =
    "pattern was not realised in any sampled configuration; it may be infeasible";

// Nested estimator shared by estimate_phi and thermodynamic_limit. `rate_of`
// returns the intensity t for sample i (fixed t, or lambda f(X_i)).
template <typename RateFn>
LimitEstimate nested_isolation_estimate(const MotifPattern& pattern, double alpha,
                                        const MonteCarloOptions& o, RateFn&& rate_of) {
  const int k = pattern.order();
  const double rho = sampling_radius(o, k);
  const double disk = std::numbers::pi * rho * rho;
  const double region = std::pow(disk, k - 1) / factorial(k - 1);
  const std::uint64_t blocks = (o.samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  struct Partial {
    MeanAccumulator value;
    MeanAccumulator inner_se;
  };
  std::vector<Partial> partial(blocks);
  parallel_for(blocks, o.threads, [&](std::size_t b) {
    Partial acc;
    const std::uint64_t hi = std::min(o.samples, (b + 1) * kMonteCarloBlock);
    for (std::uint64_t i = b * kMonteCarloBlock; i < hi; ++i) {
      CounterRng rng(o.seed, StreamDomain::Configurations, i);
      const double t = rate_of(i);
      const auto c = draw_configuration(k, rho, rng);
      double v = 0.0;
      if (canonical_code(k, adjacency_of(c, alpha)) == pattern.code()) {
        CounterRng inner(o.seed, StreamDomain::InnerArea, i);
        const auto area = union_area(k, c.xy, c.y, alpha, o.inner_samples, inner);
        v = std::pow(t, k - 1) * std::exp(-t * area.area);
        acc.inner_se.add(area.std_error);
      }
      acc.value.add(v);
    }
    partial[b] = acc;
  });
  Partial total;
  for (const auto& p : partial) {
    total.value.merge(p.value);
    total.inner_se.merge(p.inner_se);
  }
  auto e = monte_carlo(region, total.value, o);
  e.inner_std_error = total.inner_se.mean();
  if (total.inner_se.count == 0) e.warning = kNoHitWarning;
  return e;
}

}  // namespace

LimitEstimate sector_union_area(const SectorConfiguration& config, std::uint64_t samples,
                                std::uint64_t seed, unsigned threads) {
  if (samples == 0) fail("sector_union_area requires samples >= 1");
  const auto k = config.apexes.size();
  if (k == 0 || config.orientations.size() != k) fail("sector configuration is empty or ragged");
  check_alpha(config.alpha);
  std::vector<double> xy(2 * k);
  double lo_x = config.apexes[0].x(), hi_x = lo_x, lo_y = config.apexes[0].y(), hi_y = lo_y;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& a = config.apexes[i];
    if (!a.allFinite()) fail("sector apex is not finite");
    xy[2 * i] = a.x();
    xy[2 * i + 1] = a.y();
    lo_x = std::min(lo_x, a.x());
    hi_x = std::max(hi_x, a.x());
    lo_y = std::min(lo_y, a.y());
    hi_y = std::max(hi_y, a.y());
  }
  lo_x -= 1.0;
  lo_y -= 1.0;
  const double w = hi_x + 1.0 - lo_x, h = hi_y + 1.0 - lo_y;
  const auto acc = blocked_mean(samples, threads, [&](std::uint64_t i) {
    CounterRng rng(seed, StreamDomain::InnerArea, i);
    const double qx = lo_x + w * rng.uniform();
    const double qy = lo_y + h * rng.uniform();
    for (std::size_t s = 0; s < k; ++s)
      if (sector_contains(xy[2 * s], xy[2 * s + 1], config.orientations[s], config.alpha, 1.0, qx, qy))
        return 1.0;
    return 0.0;
  });
  LimitEstimate e;
  e.value = w * h * acc.mean();
  e.std_error = w * h * acc.std_error();
  e.samples = samples;
  e.method = EstimateMethod::MonteCarlo;
  e.seed = seed;
  return e;
}

LimitEstimate estimate_phi(const MotifPattern& pattern, double alpha, double t,
                           const MonteCarloOptions& opts) {
  check_alpha(alpha);
  if (!(t >= 0.0)) fail("estimate_phi requires t >= 0");
  const int k = pattern.order();
  if (k == 1) return LimitEstimate::exact(std::exp(-t * alpha / 2.0));
  if (opts.samples == 0 || opts.inner_samples == 0) fail("estimate_phi requires samples >= 1");
  return nested_isolation_estimate(pattern, alpha, opts, [t](std::uint64_t) { return t; });
}

LimitEstimate thermodynamic_limit(const MotifPattern& pattern, double alpha, double lambda,
                                  const DensitySpec& density, const MonteCarloOptions& opts) {
  check_alpha(alpha);
  density.validate();
  if (density.dimension != 2) fail("the sector model lives in dimension 2");
  if (!(lambda > 0.0)) fail("thermodynamic_limit requires lambda > 0");
  const int k = pattern.order();
  const double inv_k = 1.0 / k;

  if (density.kind != DensityKind::IsotropicGaussian) {
    auto e = estimate_phi(pattern, alpha, lambda * density.max_value(), opts);
    e.value *= inv_k;
    e.std_error *= inv_k;
    e.inner_std_error *= inv_k;
    return e;
  }
  if (opts.samples == 0) fail("thermodynamic_limit requires samples >= 1");
  auto rate = [&](std::uint64_t i) {
    CounterRng rng(opts.seed, StreamDomain::LimitOuter, i);
    Eigen::VectorXd x(2);
    draw_point(density, rng, x);
    return lambda * density_at(density, x);
  };
  if (k == 1) {
    const auto acc = blocked_mean(opts.samples, opts.threads,
                                  [&](std::uint64_t i) { return std::exp(-rate(i) * alpha / 2.0); });
    return monte_carlo(1.0, acc, opts);
  }
  auto e = nested_isolation_estimate(pattern, alpha, opts, rate);
  e.value *= inv_k;
  e.std_error *= inv_k;
  e.inner_std_error *= inv_k;
  return e;
}

LimitEstimate isolated_vertex_limit(const DensitySpec& density, const NormSpec& norm,
                                    double lambda, std::uint64_t samples, std::uint64_t seed,
                                    unsigned threads) {
  density.validate();
  if (norm.dimension != density.dimension) fail("norm and density dimensions differ");
  if (!(lambda >= 0.0)) fail("isolated_vertex_limit requires lambda >= 0");
  if (lambda == 0.0) return LimitEstimate::exact(1.0);
  const double theta = unit_ball_volume(norm);
  if (density.kind != DensityKind::IsotropicGaussian)
    return LimitEstimate::exact(std::exp(-theta * lambda * density.max_value()));
  if (samples == 0) fail("isolated_vertex_limit requires samples >= 1");
  const auto acc = blocked_mean(samples, threads, [&](std::uint64_t i) {
    CounterRng rng(seed, StreamDomain::LimitOuter, i);
    Eigen::VectorXd x(density.dimension);
    draw_point(density, rng, x);
    return std::exp(-theta * lambda * density_at(density, x));
  });
  MonteCarloOptions o;
  o.seed = seed;
  return monte_carlo(1.0, acc, o);
}

LimitEstimate estimate_mu(const MotifPattern& pattern, double alpha, const DensitySpec& density,
                          const MonteCarloOptions& opts) {
  check_alpha(alpha);
  density.validate();
  if (density.dimension != 2) fail("the sector model lives in dimension 2");
  const int k = pattern.order();
  if (k < 2) fail("estimate_mu requires k >= 2");
  if (opts.samples == 0) fail("estimate_mu requires samples >= 1");
  const double rho = sampling_radius(opts, k);
  const double scale = std::pow(std::numbers::pi * rho * rho, k - 1) / factorial(k);
  const auto acc = blocked_mean(opts.samples, opts.threads, [&](std::uint64_t i) {
    CounterRng rng(opts.seed, StreamDomain::Configurations, i);
    const auto c = draw_configuration(k, rho, rng);
    return canonical_code(k, adjacency_of(c, alpha)) == pattern.code() ? 1.0 : 0.0;
  });
  const auto geometric = monte_carlo(scale, acc, opts);
  const auto integral = density_power_integral(
      density, k, opts.samples, derive_seed(opts.seed, 0x6d75), opts.threads);

  LimitEstimate e = geometric;
  e.value = geometric.value * integral.value;
  e.std_error = std::hypot(geometric.std_error * integral.value, geometric.value * integral.std_error);
  if (acc.sum == 0.0) e.warning = kNoHitWarning;
  return e;
}

double density_power_integral_exact(const DensitySpec& density, int k) {
  density.validate();
  if (k < 1) fail("k must be >= 1");
  if (density.kind == DensityKind::IsotropicGaussian) {
    // Product of k gaussians: (2 pi sigma^2)^{-d(k-1)/2} k^{-d/2}.
    const double d = density.dimension;
    const double s2 = density.scale * density.scale;
    return std::pow(kTwoPi * s2, -0.5 * d * (k - 1)) * std::pow(k, -0.5 * d);
  }
  return std::pow(density.max_value(), k - 1);
}

LimitEstimate closed_form_mu_k2(const MotifPattern& pattern, double alpha,
                                const DensitySpec& density) {
  check_alpha(alpha);
  if (pattern.order() != 2) fail("closed_form_mu_k2 requires a pattern of order 2");
  const double p = alpha / kTwoPi;
  const double integral = density_power_integral_exact(density, 2);
  const double geometric = pattern.arc_count() == 2
                               ? 0.5 * std::numbers::pi * p * p
                               : std::numbers::pi * p * (1.0 - p);
  return LimitEstimate::exact(geometric * integral);
}

}  // namespace rgd
