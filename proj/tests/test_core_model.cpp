#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "rgd/core_model.hpp"
#include "rgd/parallel.hpp"

using namespace rgd;
using std::numbers::pi;

namespace {

double column_mean(const PointSet& p, int row) { return p.coords.row(row).mean(); }

// Hit-or-miss estimate of the integral of f over a box containing (most of) its mass.
MeanAccumulator integrate_density(const DensitySpec& f, double lo, double hi, int samples,
                                  std::uint64_t seed) {
  const int d = f.dimension;
  const double volume = std::pow(hi - lo, d);
  MeanAccumulator acc;
  Eigen::VectorXd x(d);
  for (int i = 0; i < samples; ++i) {
    CounterRng rng(seed, StreamDomain::Probe, static_cast<std::uint64_t>(i));
    for (int j = 0; j < d; ++j) x[j] = rng.uniform(lo, hi);
    acc.add(volume * density_at(f, x));
  }
  return acc;
}

}  // namespace

TEST(SamplePoints, UniformSquareSupport) {
  const auto p = sample_points(DensitySpec::uniform_square(), 4, 7);
  ASSERT_EQ(p.size(), 4u);
  ASSERT_EQ(p.dimension(), 2);
  EXPECT_GE(p.coords.minCoeff(), 0.0);
  EXPECT_LE(p.coords.maxCoeff(), 1.0);
}

TEST(SamplePoints, UniformSquareMean) {
  const auto p = sample_points(DensitySpec::uniform_square(), 100000, 1);
  EXPECT_NEAR(column_mean(p, 0), 0.5, 0.01);
}

TEST(SamplePoints, GaussianSecondMoment) {
  const auto p = sample_points(DensitySpec::gaussian(2, 1.0), 100000, 1);
  for (int axis = 0; axis < 2; ++axis)
    EXPECT_NEAR(p.coords.row(axis).squaredNorm() / 100000.0, 1.0, 0.02);
}

TEST(SamplePoints, UniformDiskInsideSupport) {
  const auto p = sample_points(DensitySpec::uniform_disk(2, 0.5), 5000, 4);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_LE(p.point(i).norm(), 0.5);
  EXPECT_NEAR(column_mean(p, 0), 0.0, 0.02);
}

TEST(SamplePoints, ReproducibleAndPrefixStable) {
  const auto a = sample_points(DensitySpec::gaussian(3), 100, 5);
  const auto b = sample_points(DensitySpec::gaussian(3), 100, 5);
  const auto c = sample_points(DensitySpec::gaussian(3), 50, 5);
  EXPECT_EQ(a.coords, b.coords);
  EXPECT_EQ(a.coords.leftCols(50), c.coords);
  EXPECT_TRUE(a.coords.allFinite());
}

TEST(SampleOrientations, RangeMeanAndDeterminism) {
  for (double y : sample_orientations(3, 5)) {
    EXPECT_GE(y, 0.0);
    EXPECT_LT(y, kTwoPi);
  }
  const auto big = sample_orientations(100000, 2);
  double sum = 0.0;
  for (double y : big) sum += y;
  EXPECT_NEAR(sum / 100000.0, pi, 0.02);
  EXPECT_EQ(sample_orientations(1, 9), sample_orientations(1, 9));
}

TEST(SampleRadii, DeterministicLaw) {
  const auto r = sample_radii({RadiusLawKind::Deterministic, 0.1, 2}, 3, 0);
  EXPECT_EQ(r, (std::vector<double>{0.1, 0.1, 0.1}));
}

TEST(SampleRadii, ScaledUniformMean) {
  const auto r = sample_radii({RadiusLawKind::ScaledUniform, 0.2, 2}, 100000, 3);
  double sum = 0.0;
  for (double x : r) {
    ASSERT_GT(x, 0.0);
    sum += x;
  }
  EXPECT_NEAR(sum / 100000.0, 0.1, 0.002);
}

TEST(SampleRadii, ScaledExponentialSecondMoment) {
  const auto r = sample_radii({RadiusLawKind::ScaledExponential, 0.05, 2}, 100000, 4);
  double sum_sq = 0.0;
  for (double x : r) {
    ASSERT_GT(x, 0.0);
    sum_sq += x * x;
  }
  EXPECT_NEAR(sum_sq / 100000.0, 2 * 0.05 * 0.05, 0.05 * 2 * 0.05 * 0.05);
}

TEST(SampleRadii, NonPositiveScaleRejected) {
  EXPECT_THROW(sample_radii({RadiusLawKind::ScaledUniform, 0.0, 2}, 3, 1), std::invalid_argument);
  EXPECT_THROW(sample_radii({RadiusLawKind::Deterministic, -1.0, 2}, 3, 1), std::invalid_argument);
}

TEST(RadiusLaw, MomentsAndInversion) {
  for (auto kind : {RadiusLawKind::Deterministic, RadiusLawKind::ScaledUniform,
                    RadiusLawKind::ScaledExponential}) {
    for (int d : {1, 2, 3}) {
      const auto law = RadiusLawSpec::with_moment(kind, d, 1e-4);
      EXPECT_NEAR(law.moment(), 1e-4, 1e-16);
      const auto r = sample_radii(law, 200000, 17);
      MeanAccumulator acc;
      for (double x : r) acc.add(std::pow(x, d));
      EXPECT_NEAR(acc.mean(), law.moment(), 4.0 * acc.std_error() + 1e-18);
    }
  }
}

TEST(InSector, GeometryExamples) {
  const SectorConfig cfg{pi / 2, 1.0};
  EXPECT_TRUE(in_sector({0, 0}, 0.0, cfg, {0.5, 0.2}));
  EXPECT_FALSE(in_sector({0, 0}, 0.0, cfg, {0.5, -0.2}));
  EXPECT_TRUE(in_sector({0, 0}, 1.234, {kTwoPi, 1.0}, {0.99, 0.0}));
}

TEST(InSector, ClosedBoundaries) {
  const SectorConfig cfg{pi / 2, 1.0};
  EXPECT_TRUE(in_sector({0, 0}, 0.0, cfg, {1.0, 0.0}));
  EXPECT_TRUE(in_sector({0, 0}, 0.0, cfg, {0.0, 0.5}));
  EXPECT_FALSE(in_sector({0, 0}, 0.0, cfg, {1.0 + 1e-12, 0.0}));
}

TEST(InSector, WrapAround) {
  const SectorConfig cfg{pi / 2, 1.0};
  // Sector from 7pi/4 anticlockwise to pi/4, crossing the zero direction.
  EXPECT_TRUE(in_sector({0, 0}, 7 * pi / 4, cfg, {0.5, 0.1}));
  EXPECT_TRUE(in_sector({0, 0}, 7 * pi / 4, cfg, {0.5, -0.1}));
  EXPECT_FALSE(in_sector({0, 0}, 7 * pi / 4, cfg, {-0.5, 0.1}));
}

TEST(InSector, QueryAtApexIsRejected) {
  EXPECT_THROW(in_sector({0.3, 0.3}, 0.0, {pi, 1.0}, {0.3, 0.3}), std::invalid_argument);
}

TEST(InSector, FullDiskEqualsDistanceTest) {
  const SectorConfig cfg{kTwoPi, 0.3};
  for (std::uint64_t i = 0; i < 20000; ++i) {
    CounterRng rng(1, StreamDomain::Probe, i);
    const Point2 a(rng.uniform(), rng.uniform());
    const Point2 q(rng.uniform(), rng.uniform());
    const double y = rng.angle();
    ASSERT_EQ(in_sector(a, y, cfg, q), (q - a).norm() <= 0.3);
  }
}

TEST(InSector, RotationInvariance) {
  const SectorConfig cfg{2.0, 0.5};
  for (std::uint64_t i = 0; i < 20000; ++i) {
    CounterRng rng(2, StreamDomain::Probe, i);
    const Point2 a(rng.uniform(), rng.uniform());
    const Point2 v(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6));
    const double y = rng.angle();
    const double phi = rng.angle();
    // Stay away from the distance and angle boundaries.
    const double rel = std::fmod(direction_angle(v.x(), v.y()) - y + 2 * kTwoPi, kTwoPi);
    if (std::abs(v.norm() - cfg.radius) < 1e-9 || std::abs(rel - cfg.alpha) < 1e-9 ||
        rel < 1e-9 || kTwoPi - rel < 1e-9)
      continue;
    const Eigen::Rotation2Dd rot(phi);
    const Point2 w = rot * v;
    const double y_rot = std::fmod(y + phi, kTwoPi);
    ASSERT_EQ(in_sector(a, y, cfg, a + v), in_sector(a, y_rot, cfg, a + w)) << "sample " << i;
  }
}

TEST(InBall, NormExamples) {
  const Eigen::Vector2d c(0, 0);
  EXPECT_TRUE(in_ball(c, 0.5, {NormKind::Linf, 2}, Eigen::Vector2d(0.4, 0.4)));
  EXPECT_FALSE(in_ball(c, 0.5, {NormKind::L2, 2}, Eigen::Vector2d(0.4, 0.4)));
  EXPECT_TRUE(in_ball(c, 0.5, {NormKind::L1, 2}, Eigen::Vector2d(0.2, 0.2)));
}

TEST(InBall, OpenBoundary) {
  EXPECT_FALSE(in_ball(Eigen::Vector2d(0, 0), 0.5, {NormKind::L2, 2}, Eigen::Vector2d(0.5, 0)));
}

TEST(InBall, MonotoneInRadius) {
  for (auto kind : {NormKind::L1, NormKind::L2, NormKind::Linf}) {
    for (std::uint64_t i = 0; i < 2000; ++i) {
      CounterRng rng(3, StreamDomain::Probe, i);
      const Eigen::Vector3d c(rng.uniform(), rng.uniform(), rng.uniform());
      const Eigen::Vector3d q(rng.uniform(), rng.uniform(), rng.uniform());
      const double r = rng.uniform(0.0, 1.5);
      if (in_ball(c, r, {kind, 3}, q)) {
        for (double bigger : {r * 1.0001, r + 0.1, 2 * r + 1}) {
          ASSERT_TRUE(in_ball(c, bigger, {kind, 3}, q));
        }
      }
    }
  }
}

TEST(Norms, Axioms) {
  for (auto kind : {NormKind::L1, NormKind::L2, NormKind::Linf}) {
    for (std::uint64_t i = 0; i < 2000; ++i) {
      CounterRng rng(4, StreamDomain::Probe, i);
      Eigen::Vector3d a, b;
      for (int j = 0; j < 3; ++j) {
        a[j] = rng.uniform(-1, 1);
        b[j] = rng.uniform(-1, 1);
      }
      const double s = rng.uniform(-3, 3);
      ASSERT_GE(norm_of(kind, a), 0.0);
      ASSERT_DOUBLE_EQ(norm_of(kind, (a - b).eval()), norm_of(kind, (b - a).eval()));
      ASSERT_LE(norm_of(kind, (a + b).eval()), norm_of(kind, a) + norm_of(kind, b) + 1e-15);
      ASSERT_NEAR(norm_of(kind, (s * a).eval()), std::abs(s) * norm_of(kind, a), 1e-14);
    }
    EXPECT_EQ(norm_of(kind, Eigen::Vector3d::Zero().eval()), 0.0);
  }
}

TEST(UnitBallVolume, ClosedForms) {
  EXPECT_DOUBLE_EQ(unit_ball_volume({NormKind::L2, 2}), pi);
  EXPECT_DOUBLE_EQ(unit_ball_volume({NormKind::Linf, 2}), 4.0);
  EXPECT_DOUBLE_EQ(unit_ball_volume({NormKind::L1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(unit_ball_volume({NormKind::L2, 3}), 4.0 * pi / 3.0);
  EXPECT_DOUBLE_EQ(unit_ball_volume({NormKind::L1, 3}), 8.0 / 6.0);
  EXPECT_DOUBLE_EQ(unit_ball_volume({NormKind::L2, 1}), 2.0);
}

TEST(UnitBallVolume, AgreesWithHitOrMiss) {
  for (auto kind : {NormKind::L1, NormKind::L2, NormKind::Linf}) {
    for (int d : {1, 2, 3}) {
      const double cube = std::pow(2.0, d);
      MeanAccumulator acc;
      Eigen::VectorXd x(d);
      for (std::uint64_t i = 0; i < 200000; ++i) {
        CounterRng rng(5, StreamDomain::Probe, i);
        for (int j = 0; j < d; ++j) x[j] = rng.uniform(-1, 1);
        acc.add(norm_of(kind, x) < 1.0 ? cube : 0.0);
      }
      const double theta = unit_ball_volume({kind, d});
      if (acc.std_error() == 0.0)
        EXPECT_DOUBLE_EQ(acc.mean(), theta);
      else
        EXPECT_NEAR(acc.mean(), theta, 3.0 * acc.std_error()) << to_string(kind) << " d=" << d;
    }
  }
}

TEST(Density, IntegratesToOne) {
  const struct {
    DensitySpec f;
    double lo, hi;
  } cases[] = {{DensitySpec::uniform_square(2, 1.0), -0.1, 1.1},
               {DensitySpec::uniform_square(3, 2.0), 0.0, 2.0},
               {DensitySpec::uniform_disk(2, 1.0), -1.0, 1.0},
               {DensitySpec::uniform_disk(3, 0.5), -0.5, 0.5},
               {DensitySpec::gaussian(2, 1.0), -9.0, 9.0},
               {DensitySpec::gaussian(1, 0.3), -3.0, 3.0}};
  for (const auto& c : cases) {
    const auto acc = integrate_density(c.f, c.lo, c.hi, 200000, 6);
    EXPECT_NEAR(acc.mean(), 1.0, 3.0 * acc.std_error()) << to_string(c.f.kind);
  }
}

TEST(Density, MaxValueBoundsSampledValues) {
  for (const auto& f : {DensitySpec::uniform_square(), DensitySpec::uniform_disk(),
                        DensitySpec::gaussian(2, 0.7)}) {
    const auto p = sample_points(f, 2000, 8);
    for (std::size_t i = 0; i < p.size(); ++i) {
      ASSERT_LE(density_at(f, p.point(i)), f.max_value());
      ASSERT_GT(density_at(f, p.point(i)), 0.0);
    }
  }
  EXPECT_DOUBLE_EQ(DensitySpec::gaussian(2, 1.0).max_value(), 1.0 / (2 * pi));
  EXPECT_DOUBLE_EQ(DensitySpec::uniform_disk(2, 1.0).max_value(), 1.0 / pi);
}

TEST(Density, SupportQueries) {
  EXPECT_TRUE(DensitySpec::uniform_square().has_bounded_support());
  EXPECT_TRUE(DensitySpec::uniform_disk().has_bounded_support());
  EXPECT_FALSE(DensitySpec::gaussian().has_bounded_support());
  const auto [lo, hi] = DensitySpec::uniform_disk(2, 2.0).support_box();
  EXPECT_EQ(lo, Eigen::Vector2d(-2, -2));
  EXPECT_EQ(hi, Eigen::Vector2d(2, 2));
  EXPECT_THROW(DensitySpec::gaussian().support_box(), std::invalid_argument);
  EXPECT_DOUBLE_EQ(boundary_distance(DensitySpec::uniform_square(), Eigen::Vector2d(0.2, 0.7)),
                   0.2);
}

TEST(Density, InvalidParametersRejected) {
  EXPECT_THROW(DensitySpec::uniform_square(2, 0.0).validate(), std::invalid_argument);
  EXPECT_THROW(DensitySpec::gaussian(0, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(parse_density_kind("triangle"), std::invalid_argument);
}

TEST(DensityPowerIntegral, Examples) {
  const auto sq = density_power_integral(DensitySpec::uniform_square(), 2, 1000, 1);
  EXPECT_EQ(sq.value, 1.0);
  EXPECT_EQ(sq.std_error, 0.0);
  EXPECT_EQ(sq.method, EstimateMethod::ClosedForm);

  const auto disk = density_power_integral(DensitySpec::uniform_disk(), 2, 1000, 1);
  EXPECT_DOUBLE_EQ(disk.value, 1.0 / pi);

  const auto g = density_power_integral(DensitySpec::gaussian(2, 1.0), 2, 200000, 1);
  EXPECT_EQ(g.method, EstimateMethod::MonteCarlo);
  EXPECT_GT(g.std_error, 0.0);
  EXPECT_NEAR(g.value, 1.0 / (4 * pi), 3.0 * g.std_error);
}

TEST(DensityPowerIntegral, GaussianHigherPowersAndThreads) {
  const auto f = DensitySpec::gaussian(2, 0.5);
  const double exact3 = std::pow(2 * pi * 0.25, -2.0) / 3.0;
  const auto one = density_power_integral(f, 3, 100000, 4, 1);
  const auto four = density_power_integral(f, 3, 100000, 4, 4);
  EXPECT_NEAR(one.value, exact3, 3.0 * one.std_error);
  EXPECT_EQ(one.value, four.value);
  EXPECT_EQ(one.std_error, four.std_error);
}
