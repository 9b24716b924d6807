#include "rgd/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

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

}  // namespace

std::string_view to_string(DensityKind k) noexcept {
  switch (k) {
    case DensityKind::UniformSquare:
      return "uniform-square";
    case DensityKind::UniformDisk:
      return "uniform-disk";
    case DensityKind::IsotropicGaussian:
      return "isotropic-gaussian";
  }
  return "?";
}

DensityKind parse_density_kind(std::string_view s) {
  if (s == "uniform-square") return DensityKind::UniformSquare;
  if (s == "uniform-disk") return DensityKind::UniformDisk;
  if (s == "isotropic-gaussian" || s == "gaussian") return DensityKind::IsotropicGaussian;
  fail("unsupported density kind '" + std::string(s) + "'");
}

DensitySpec DensitySpec::uniform_square(int d, double side) {
  DensitySpec f{DensityKind::UniformSquare, d, side};
  f.validate();
  return f;
}

DensitySpec DensitySpec::uniform_disk(int d, double radius) {
  DensitySpec f{DensityKind::UniformDisk, d, radius};
  f.validate();
  return f;
}

DensitySpec DensitySpec::gaussian(int d, double sigma) {
  DensitySpec f{DensityKind::IsotropicGaussian, d, sigma};
  f.validate();
  return f;
}

void DensitySpec::validate() const {
  if (dimension < 1) fail("density dimension must be >= 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) fail("density scale must be positive and finite");
}

double euclidean_ball_volume(int d) {
  if (d < 1) fail("dimension must be >= 1");
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double DensitySpec::max_value() const {
  switch (kind) {
    case DensityKind::UniformSquare:
      return 1.0 / std::pow(scale, dimension);
    case DensityKind::UniformDisk:
      return 1.0 / (euclidean_ball_volume(dimension) * std::pow(scale, dimension));
    case DensityKind::IsotropicGaussian:
      return std::pow(kTwoPi * scale * scale, -0.5 * dimension);
  }
  return 0.0;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> DensitySpec::support_box() const {
  switch (kind) {
    case DensityKind::UniformSquare:
      return {Eigen::VectorXd::Zero(dimension), Eigen::VectorXd::Constant(dimension, scale)};
    case DensityKind::UniformDisk:
      return {Eigen::VectorXd::Constant(dimension, -scale),
              Eigen::VectorXd::Constant(dimension, scale)};
    case DensityKind::IsotropicGaussian:
      break;
  }
  fail("isotropic-gaussian density has unbounded support");
}

std::string_view to_string(NormKind k) noexcept {
  switch (k) {
    case NormKind::L1:
      return "L1";
    case NormKind::L2:
      return "L2";
    case NormKind::Linf:
      return "Linf";
  }
  return "?";
}

NormKind parse_norm_kind(std::string_view s) {
  if (s == "L1" || s == "l1") return NormKind::L1;
  if (s == "L2" || s == "l2") return NormKind::L2;
  if (s == "Linf" || s == "linf" || s == "Linfinity") return NormKind::Linf;
  fail("unsupported norm '" + std::string(s) + "'");
}

double unit_ball_volume(const NormSpec& norm) {
  const int d = norm.dimension;
  if (d < 1) fail("norm dimension must be >= 1");
  switch (norm.kind) {
    case NormKind::L1:
      return std::pow(2.0, d) / factorial(d);
    case NormKind::L2:
      return euclidean_ball_volume(d);
    case NormKind::Linf:
      return std::pow(2.0, d);
  }
  fail("unsupported norm");
}

void SectorConfig::validate() const {
  if (!(alpha > 0.0) || alpha > kTwoPi) fail("sector amplitude alpha must lie in (0, 2*pi]");
  if (!(radius > 0.0) || !std::isfinite(radius)) fail("sector radius must be positive");
}

std::string_view to_string(RadiusLawKind k) noexcept {
  switch (k) {
    case RadiusLawKind::Deterministic:
      return "deterministic";
    case RadiusLawKind::ScaledUniform:
      return "scaled-uniform";
    case RadiusLawKind::ScaledExponential:
      return "scaled-exponential";
  }
  return "?";
}

RadiusLawKind parse_radius_law_kind(std::string_view s) {
  if (s == "deterministic") return RadiusLawKind::Deterministic;
  if (s == "scaled-uniform") return RadiusLawKind::ScaledUniform;
  if (s == "scaled-exponential") return RadiusLawKind::ScaledExponential;
  fail("unsupported radius law '" + std::string(s) + "'");
}

void RadiusLawSpec::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) fail("radius law scale must be positive");
  if (dimension < 1) fail("radius law dimension must be >= 1");
}

double RadiusLawSpec::moment() const {
  const double sd = std::pow(scale, dimension);
  switch (kind) {
    case RadiusLawKind::Deterministic:
      return sd;
    case RadiusLawKind::ScaledUniform:
      return sd / (dimension + 1.0);
    case RadiusLawKind::ScaledExponential:
      return factorial(dimension) * sd;
  }
  return 0.0;
}

RadiusLawSpec RadiusLawSpec::with_moment(RadiusLawKind kind, int d, double target) {
  if (!(target > 0.0)) fail("target moment must be positive");
  double base = target;
  switch (kind) {
    case RadiusLawKind::Deterministic:
      break;
    case RadiusLawKind::ScaledUniform:
      base = target * (d + 1.0);
      break;
    case RadiusLawKind::ScaledExponential:
      base = target / factorial(d);
      break;
  }
  RadiusLawSpec law{kind, std::pow(base, 1.0 / d), d};
  law.validate();
  return law;
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
  PointSet ps;
  if (rows.empty()) return ps;
  const auto d = static_cast<Eigen::Index>(rows.front().size());
  ps.coords.resize(d, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != d) fail("ragged point coordinates");
    for (Eigen::Index c = 0; c < d; ++c) ps.coords(c, static_cast<Eigen::Index>(i)) = rows[i][c];
  }
  return ps;
}

void draw_point(const DensitySpec& density, CounterRng& rng, Eigen::Ref<Eigen::VectorXd> out) {
  const int d = density.dimension;
  switch (density.kind) {
    case DensityKind::UniformSquare:
      for (int c = 0; c < d; ++c) out[c] = density.scale * rng.uniform();
      return;
    case DensityKind::UniformDisk:
      // Rejection from the enclosing cube.
      for (;;) {
        double r2 = 0.0;
        for (int c = 0; c < d; ++c) {
          out[c] = density.scale * (2.0 * rng.uniform() - 1.0);
          r2 += out[c] * out[c];
        }
        if (r2 <= density.scale * density.scale) return;
      }
    case DensityKind::IsotropicGaussian:
      for (int c = 0; c < d; ++c) out[c] = density.scale * rng.normal();
      return;
  }
}

double draw_radius(const RadiusLawSpec& law, CounterRng& rng) {
  switch (law.kind) {
    case RadiusLawKind::Deterministic:
      return law.scale;
    case RadiusLawKind::ScaledUniform:
      return law.scale * rng.uniform_open();
    case RadiusLawKind::ScaledExponential:
      return std::max(rng.exponential(law.scale), std::numeric_limits<double>::min());
  }
  return law.scale;
}

PointSet sample_points(const DensitySpec& density, std::size_t n, std::uint64_t seed) {
  density.validate();
  if (n < 1) fail("sample_points requires n >= 1");
  PointSet ps;
  ps.seed = seed;
  ps.coords.resize(density.dimension, static_cast<Eigen::Index>(n));
  Eigen::VectorXd x(density.dimension);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(seed, StreamDomain::Points, i);
    draw_point(density, rng, x);
    ps.coords.col(static_cast<Eigen::Index>(i)) = x;
  }
  return ps;
}

std::vector<double> sample_orientations(std::size_t n, std::uint64_t seed) {
  if (n < 1) fail("sample_orientations requires n >= 1");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = CounterRng(seed, StreamDomain::Orientations, i).angle();
  return out;
}

std::vector<double> sample_radii(const RadiusLawSpec& law, std::size_t n, std::uint64_t seed) {
  law.validate();
  if (n < 1) fail("sample_radii requires n >= 1");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(seed, StreamDomain::Radii, i);
    out[i] = draw_radius(law, rng);
  }
  return out;
}

bool in_sector(const Point2& apex, double orientation, const SectorConfig& cfg,
               const Point2& query) {
  if (apex == query) fail("in_sector: query coincides with the apex");
  return sector_contains(apex.x(), apex.y(), orientation, cfg.alpha, cfg.radius, query.x(),
                         query.y());
}

LimitEstimate density_power_integral(const DensitySpec& density, int k, std::uint64_t samples,
                                     std::uint64_t seed, unsigned threads) {
  density.validate();
  if (k < 1) fail("density_power_integral requires k >= 1");
  if (k == 1) return LimitEstimate::exact(1.0);
  if (density.kind != DensityKind::IsotropicGaussian)
    return LimitEstimate::exact(std::pow(density.max_value(), k - 1));
  if (samples == 0) fail("density_power_integral requires samples >= 1");

  const auto acc = blocked_mean(samples, threads, [&](std::uint64_t i) {
    CounterRng rng(seed, StreamDomain::DensityIntegral, i);
    Eigen::VectorXd x(density.dimension);
    draw_point(density, rng, x);
    return std::pow(density_at(density, x), k - 1);
  });
  LimitEstimate e;
  e.value = acc.mean();
  e.std_error = acc.std_error();
  e.samples = samples;
  e.method = EstimateMethod::MonteCarlo;
  e.seed = seed;
  return e;
}

}  // namespace rgd
