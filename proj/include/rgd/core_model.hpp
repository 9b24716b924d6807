#pragma once

// Densities, norms, samplers and the two arc predicates.

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rgd/estimate.hpp"
#include "rgd/random.hpp"

namespace rgd {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Point2 = Eigen::Vector2d;

// ---------------------------------------------------------------------------
// Densities

enum class DensityKind { UniformSquare, UniformDisk, IsotropicGaussian };

std::string_view to_string(DensityKind k) noexcept;
DensityKind parse_density_kind(std::string_view s);

/// Sampling density. `scale` is the side length (uniform-square, support
/// [0, scale]^d), the radius (uniform-disk, centred at the origin) or the
/// per-axis standard deviation (isotropic-gaussian, centred at the origin).
struct DensitySpec {
  DensityKind kind = DensityKind::UniformSquare;
  int dimension = 2;
  double scale = 1.0;

  static DensitySpec uniform_square(int d = 2, double side = 1.0);
  static DensitySpec uniform_disk(int d = 2, double radius = 1.0);
  static DensitySpec gaussian(int d = 2, double sigma = 1.0);

  void validate() const;

  /// Essential supremum, stored analytically.
  double max_value() const;
  bool has_bounded_support() const noexcept { return kind != DensityKind::IsotropicGaussian; }

  /// Axis-aligned box containing the support; throws for unbounded support.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> support_box() const;
};

/// Volume of the Euclidean d-ball of radius one.
double euclidean_ball_volume(int d);

template <typename Derived>
double density_at(const DensitySpec& f, const Eigen::MatrixBase<Derived>& x) {
  switch (f.kind) {
    case DensityKind::UniformSquare:
      return (x.minCoeff() >= 0.0 && x.maxCoeff() <= f.scale) ? f.max_value() : 0.0;
    case DensityKind::UniformDisk:
      return x.norm() <= f.scale ? f.max_value() : 0.0;
    case DensityKind::IsotropicGaussian:
      return f.max_value() * std::exp(-0.5 * x.squaredNorm() / (f.scale * f.scale));
  }
  return 0.0;
}

/// Euclidean distance from x to the complement of the support; +inf when
/// the support is unbounded, zero (or negative) outside the support.
template <typename Derived>
double boundary_distance(const DensitySpec& f, const Eigen::MatrixBase<Derived>& x) {
  switch (f.kind) {
    case DensityKind::UniformSquare:
      return std::min(x.minCoeff(), (f.scale - x.array()).minCoeff());
    case DensityKind::UniformDisk:
      return f.scale - x.norm();
    case DensityKind::IsotropicGaussian:
      return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Norms

enum class NormKind { L1, L2, Linf };

std::string_view to_string(NormKind k) noexcept;
NormKind parse_norm_kind(std::string_view s);

struct NormSpec {
  NormKind kind = NormKind::L2;
  int dimension = 2;
};

template <typename Derived>
double norm_of(NormKind kind, const Eigen::MatrixBase<Derived>& v) {
  switch (kind) {
    case NormKind::L1:
      return v.template lpNorm<1>();
    case NormKind::L2:
      return v.norm();
    case NormKind::Linf:
      return v.template lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

/// theta: the d-volume of the open unit ball of the norm.
double unit_ball_volume(const NormSpec& norm);

// ---------------------------------------------------------------------------
// Marks

struct SectorConfig {
  double alpha = kTwoPi;
  double radius = 1.0;

  void validate() const;
};

enum class RadiusLawKind { Deterministic, ScaledUniform, ScaledExponential };

std::string_view to_string(RadiusLawKind k) noexcept;
RadiusLawKind parse_radius_law_kind(std::string_view s);

/// Radius law: the constant `scale`, uniform on (0, scale), or exponential
/// with mean `scale`.
struct RadiusLawSpec {
  RadiusLawKind kind = RadiusLawKind::Deterministic;
  double scale = 1.0;
  int dimension = 2;

  void validate() const;
  /// E[R^d] in closed form.
  double moment() const;
  /// The law of this kind whose d-th moment equals `target`.
  static RadiusLawSpec with_moment(RadiusLawKind kind, int d, double target);
};

// ---------------------------------------------------------------------------
// Point sets

/// n points in R^d stored column-wise (d x n).
struct PointSet {
  Eigen::MatrixXd coords;
  std::uint64_t seed = 0;

  int dimension() const noexcept { return static_cast<int>(coords.rows()); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(coords.cols()); }
  auto point(std::size_t i) const { return coords.col(static_cast<Eigen::Index>(i)); }

  static PointSet from_rows(const std::vector<std::vector<double>>& rows);
};

PointSet sample_points(const DensitySpec& density, std::size_t n, std::uint64_t seed);
std::vector<double> sample_orientations(std::size_t n, std::uint64_t seed);
std::vector<double> sample_radii(const RadiusLawSpec& law, std::size_t n, std::uint64_t seed);

// Single draws shared by the samplers and by the Monte Carlo integrators.
void draw_point(const DensitySpec& density, CounterRng& rng, Eigen::Ref<Eigen::VectorXd> out);
double draw_radius(const RadiusLawSpec& law, CounterRng& rng);

// ---------------------------------------------------------------------------
// Arc predicates

/// Direction of v in [0, 2*pi), anticlockwise from the horizontal axis.
inline double direction_angle(double dx, double dy) noexcept {
  double a = std::atan2(dy, dx);
  if (a < 0.0) a += kTwoPi;
  return a < kTwoPi ? a : 0.0;
}

/// Closed-sector membership without the apex precondition; a query at the
/// apex counts as inside.
inline bool sector_contains(double apex_x, double apex_y, double orientation, double alpha,
                            double radius, double qx, double qy) noexcept {
  const double dx = qx - apex_x;
  const double dy = qy - apex_y;
  const double d2 = dx * dx + dy * dy;
  if (d2 > radius * radius) return false;
  if (alpha >= kTwoPi || d2 == 0.0) return true;
  double rel = direction_angle(dx, dy) - orientation;
  if (rel < 0.0) rel += kTwoPi;
  return rel <= alpha;
}

/// True iff query lies in the closed sector of the given radius and
/// amplitude whose edge starts at `orientation` and opens anticlockwise.
bool in_sector(const Point2& apex, double orientation, const SectorConfig& cfg,
               const Point2& query);

/// True iff ||query - center|| < radius (open ball).
template <typename A, typename B>
bool in_ball(const Eigen::MatrixBase<A>& center, double radius, const NormSpec& norm,
             const Eigen::MatrixBase<B>& query) {
  return norm_of(norm.kind, (query - center).eval()) < radius;
}

// ---------------------------------------------------------------------------

/// Integral of f^k over R^d, written as E_f[f^{k-1}(X)]. Closed form for the
/// uniform laws (and k = 1); Monte Carlo otherwise.
LimitEstimate density_power_integral(const DensitySpec& density, int k, std::uint64_t samples,
                                     std::uint64_t seed, unsigned threads = 1);

}  // namespace rgd
