#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "rgd/digraph.hpp"

using namespace rgd;
using std::numbers::pi;

namespace {

struct Sample {
  PointSet points;
  std::vector<double> marks;
};

Sample sector_sample(std::size_t n, std::uint64_t seed) {
  return {sample_points(DensitySpec::uniform_square(), n, seed), sample_orientations(n, seed)};
}

Sample radius_sample(std::size_t n, int d, std::uint64_t seed, double scale) {
  return {sample_points(DensitySpec::uniform_square(d), n, seed),
          sample_radii({RadiusLawKind::ScaledExponential, scale, d}, n, seed)};
}

std::vector<std::uint32_t> row(const GeoDigraph& g, std::size_t i) {
  const auto r = g.out(i);
  return {r.begin(), r.end()};
}

}  // namespace

TEST(SectorBuild, FullDisksGiveMutualPair) {
  const auto p = PointSet::from_rows({{0.0, 0.0}, {0.5, 0.0}});
  const std::vector<double> y{0.3, 4.0};
  const auto g = build_sector_digraph(p, y, {kTwoPi, 1.0});
  EXPECT_TRUE(g.has_arc(0, 1));
  EXPECT_TRUE(g.has_arc(1, 0));
  EXPECT_EQ(g.arc_count(), 2u);
}

TEST(SectorBuild, OrientedSectorsFacingEachOther) {
  const auto p = PointSet::from_rows({{0.0, 0.0}, {0.5, 0.2}});
  const std::vector<double> y{0.0, pi};
  const auto g = build_sector_digraph(p, y, {pi / 2, 1.0});
  EXPECT_TRUE(g.has_arc(0, 1));
  EXPECT_TRUE(g.has_arc(1, 0));
}

TEST(SectorBuild, FarApartPointsHaveNoArcs) {
  const auto p = PointSet::from_rows({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}});
  const std::vector<double> y{0.0, 1.0, 2.0, 3.0};
  EXPECT_EQ(build_sector_digraph(p, y, {kTwoPi, 0.5}).arc_count(), 0u);
}

TEST(SectorBuild, RejectsWrongDimension) {
  const auto p = sample_points(DensitySpec::uniform_square(3), 5, 1);
  EXPECT_THROW(build_sector_digraph(p, std::vector<double>(5, 0.0), {pi, 0.1}),
               std::invalid_argument);
}

TEST(RadiusBuild, AsymmetricRadii) {
  const auto p = PointSet::from_rows({{0.0, 0.0}, {0.5, 0.0}});
  const std::vector<double> r{1.0, 0.1};
  const auto g = build_radius_digraph(p, r, {NormKind::L2, 2});
  EXPECT_TRUE(g.has_arc(0, 1));
  EXPECT_FALSE(g.has_arc(1, 0));
  EXPECT_EQ(g.arc_count(), 1u);
}

TEST(RadiusBuild, RadiiBelowMinimumDistanceGiveNoArcs) {
  const auto p = sample_points(DensitySpec::uniform_square(), 50, 3);
  double min_dist = 1e9;
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t j = i + 1; j < 50; ++j)
      min_dist = std::min(min_dist, (p.point(i) - p.point(j)).norm());
  const std::vector<double> r(50, min_dist * (1.0 - 1e-9));
  EXPECT_EQ(build_radius_digraph(p, r, {NormKind::L2, 2}).arc_count(), 0u);
}

TEST(RadiusBuild, ExactlyOneArcUnderLinf) {
  const auto p = PointSet::from_rows({{0.0, 0.0}, {0.3, 0.25}, {1.0, 1.0}});
  // Linf distances: d01 = 0.3, d02 = 1, d12 = 0.75.
  const std::vector<double> r{0.31, 0.29, 0.5};
  const auto g = build_radius_digraph(p, r, {NormKind::Linf, 2});
  EXPECT_EQ(g.arc_count(), 1u);
  EXPECT_TRUE(g.has_arc(0, 1));
}

TEST(RadiusBuild, RejectsNonPositiveRadius) {
  const auto p = PointSet::from_rows({{0.0, 0.0}, {0.5, 0.0}});
  EXPECT_THROW(build_radius_digraph(p, std::vector<double>{0.1, 0.0}, {NormKind::L2, 2}),
               std::invalid_argument);
}

TEST(BruteForce, SinglePointHasNoArcs) {
  const auto p = PointSet::from_rows({{0.4, 0.4}});
  EXPECT_EQ(brute_force_build(p, std::vector<double>{0.0}, SectorConfig{kTwoPi, 1.0}).arc_count(),
            0u);
  EXPECT_EQ(build_sector_digraph(p, std::vector<double>{0.0}, {kTwoPi, 1.0}).arc_count(), 0u);
}

TEST(OracleEquality, SectorModel) {
  for (std::size_t n : {10u, 50u, 200u}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto s = sector_sample(n, seed);
      const SectorConfig cfg{0.5 + 5.5 * static_cast<double>(seed % 12) / 11.0, 0.15};
      const auto fast = build_sector_digraph(s.points, s.marks, cfg);
      const auto slow = brute_force_build(s.points, s.marks, cfg);
      ASSERT_TRUE(fast.same_arcs(slow)) << "n=" << n << " seed=" << seed;
    }
  }
}

TEST(OracleEquality, RadiusModelAllNorms) {
  for (auto kind : {NormKind::L1, NormKind::L2, NormKind::Linf}) {
    for (int d : {1, 2, 3}) {
      for (std::size_t n : {10u, 50u, 200u}) {
        for (std::uint64_t seed = 0; seed < 100; seed += (d == 2 ? 1 : 5)) {
          const auto s = radius_sample(n, d, seed, 0.08);
          const auto fast = build_radius_digraph(s.points, s.marks, {kind, d});
          const auto slow = brute_force_build(s.points, s.marks, NormSpec{kind, d});
          ASSERT_TRUE(fast.same_arcs(slow))
              << to_string(kind) << " d=" << d << " n=" << n << " seed=" << seed;
        }
      }
    }
  }
}

TEST(OracleEquality, ThreadCountDoesNotMatter) {
  const auto s = sector_sample(20000, 5);
  const auto one = build_sector_digraph(s.points, s.marks, {pi, 0.01}, 1);
  const auto four = build_sector_digraph(s.points, s.marks, {pi, 0.01}, 4);
  EXPECT_TRUE(one.same_arcs(four));
  const auto r = radius_sample(20000, 2, 6, 0.004);
  EXPECT_TRUE(build_radius_digraph(r.points, r.marks, {NormKind::L1, 2}, 1)
                  .same_arcs(build_radius_digraph(r.points, r.marks, {NormKind::L1, 2}, 3)));
}

TEST(OracleEquality, PointsOnCellBoundaries) {
  // Lattice points sitting exactly on multiples of the radius.
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) rows.push_back({0.25 * i, 0.25 * j});
  const auto p = PointSet::from_rows(rows);
  std::vector<double> y(p.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 0.5 * static_cast<double>(i % 13);
  for (double alpha : {pi / 2, pi, kTwoPi}) {
    const SectorConfig cfg{alpha, 0.25};
    EXPECT_TRUE(build_sector_digraph(p, y, cfg).same_arcs(brute_force_build(p, y, cfg)));
  }
  const std::vector<double> r(p.size(), 0.25);
  for (auto kind : {NormKind::L1, NormKind::L2, NormKind::Linf})
    EXPECT_TRUE(build_radius_digraph(p, r, {kind, 2})
                    .same_arcs(brute_force_build(p, r, NormSpec{kind, 2})));
}

TEST(DigraphInvariants, RowsSortedNoSelfLoops) {
  const auto s = sector_sample(5000, 8);
  const auto g = build_sector_digraph(s.points, s.marks, {2.0, 0.03});
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto r = g.out(i);
    for (std::size_t k = 0; k < r.size(); ++k) {
      ASSERT_NE(r[k], i);
      ASSERT_LT(r[k], g.size());
      if (k > 0) ASSERT_LT(r[k - 1], r[k]);
      ASSERT_TRUE(in_sector(s.points.point(i), s.marks[i], {2.0, 0.03},
                            s.points.point(r[k])));
    }
  }
}

TEST(DigraphInvariants, ConstructorValidatesRows) {
  const auto p = PointSet::from_rows({{0.0, 0.0}, {0.1, 0.0}});
  const std::vector<double> m{0.0, 0.0};
  EXPECT_THROW(GeoDigraph(ModelKind::Sector, p, m, SectorConfig{}, {0, 1, 1}, {0}),
               std::invalid_argument);
  EXPECT_THROW(GeoDigraph(ModelKind::Sector, p, m, SectorConfig{}, {0, 1, 1}, {5}),
               std::invalid_argument);
  EXPECT_THROW(GeoDigraph(ModelKind::Sector, p, m, SectorConfig{}, {0, 2, 2}, {1, 1}),
               std::invalid_argument);
  EXPECT_NO_THROW(GeoDigraph(ModelKind::Sector, p, m, SectorConfig{}, {0, 1, 2}, {1, 0}));
}

TEST(DigraphInvariants, FullDiskDegreeEqualsRggDegree) {
  const auto s = sector_sample(3000, 9);
  const double r = 0.04;
  const auto g = build_sector_digraph(s.points, s.marks, {kTwoPi, r});
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::size_t within = 0;
    for (std::size_t j = 0; j < g.size(); ++j)
      if (j != i && (s.points.point(i) - s.points.point(j)).norm() <= r) ++within;
    ASSERT_EQ(g.out_degree(i), within);
  }
}

TEST(DigraphInvariants, InteriorMeanOutDegree) {
  const std::size_t n = 100000;
  const double r = 0.01, alpha = pi / 2;
  const auto s = sector_sample(n, 10);
  const auto g = build_sector_digraph(s.points, s.marks, {alpha, r});
  double sum = 0.0;
  std::size_t interior = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (boundary_distance(DensitySpec::uniform_square(), s.points.point(i)) < r) continue;
    sum += static_cast<double>(g.out_degree(i));
    ++interior;
  }
  const double expected = static_cast<double>(n) * alpha * r * r / 2.0;
  EXPECT_NEAR(sum / static_cast<double>(interior), expected, 0.05 * expected);
}

TEST(SpatialGrid, EveryVertexInExactlyOneCell) {
  const auto p = sample_points(DensitySpec::gaussian(3), 2000, 11);
  const SpatialGrid grid(p, 0.3);
  std::vector<int> seen(p.size(), 0);
  // A query from each point's own position sees the point itself exactly once.
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto x = p.point(i);
    int self = 0;
    grid.for_each_candidate(std::span<const double>(x.data(), 3), [&](std::uint32_t j) {
      if (j == i) ++self;
      ++seen[j];
    });
    ASSERT_EQ(self, 1);
  }
  EXPECT_GT(grid.cell_count(), 1u);
}

TEST(UndirectedEdges, Examples) {
  const auto two = PointSet::from_rows({{0.0, 0.0}, {0.5, 0.0}});
  const auto mutual = build_sector_digraph(two, std::vector<double>{0.0, 0.0}, {kTwoPi, 1.0});
  EXPECT_EQ(underlying_undirected_edges(mutual).size(), 1u);

  const auto one_way = build_radius_digraph(two, std::vector<double>{1.0, 0.1}, {NormKind::L2, 2});
  const auto edges = underlying_undirected_edges(one_way);
  ASSERT_EQ(edges.size(), 1u);
  EXPECT_EQ(edges[0], (std::pair<std::uint32_t, std::uint32_t>{0, 1}));

  const auto far = build_sector_digraph(two, std::vector<double>{0.0, 0.0}, {kTwoPi, 0.1});
  EXPECT_TRUE(underlying_undirected_edges(far).empty());
}

TEST(UndirectedEdges, SymmetricAdjacency) {
  const auto s = sector_sample(2000, 12);
  const auto g = build_sector_digraph(s.points, s.marks, {1.0, 0.05});
  const auto adj = underlying_undirected(g);
  for (std::size_t i = 0; i < adj.size(); ++i)
    for (std::uint32_t j : adj.of(i)) {
      ASSERT_NE(j, i);
      ASSERT_TRUE(adj.adjacent(j, i));
      ASSERT_TRUE(g.has_arc(i, j) || g.has_arc(j, i));
    }
}

TEST(TextFormat, RoundTripSector) {
  const auto s = sector_sample(300, 13);
  const auto g = build_sector_digraph(s.points, s.marks, {2.5, 0.1});
  std::stringstream ss;
  write_digraph(ss, g);
  const auto back = read_digraph(ss);
  EXPECT_EQ(back.model(), ModelKind::Sector);
  EXPECT_TRUE(back.same_arcs(g));
  EXPECT_EQ(back.points().coords, g.points().coords);
  EXPECT_EQ(back.marks(), g.marks());
  const auto& cfg = std::get<SectorConfig>(back.params());
  EXPECT_EQ(cfg.alpha, 2.5);
  EXPECT_EQ(cfg.radius, 0.1);
}

TEST(TextFormat, RoundTripRadius) {
  const auto s = radius_sample(200, 3, 14, 0.1);
  const auto g = build_radius_digraph(s.points, s.marks, {NormKind::Linf, 3});
  std::stringstream ss;
  write_digraph(ss, g);
  const auto back = read_digraph(ss);
  EXPECT_EQ(back.model(), ModelKind::Radius);
  EXPECT_TRUE(back.same_arcs(g));
  EXPECT_EQ(std::get<NormSpec>(back.params()).kind, NormKind::Linf);
}

TEST(TextFormat, HeaderLayout) {
  const auto two = PointSet::from_rows({{0.0, 0.0}, {0.5, 0.0}});
  const auto g = build_sector_digraph(two, std::vector<double>{0.0, 1.0}, {kTwoPi, 1.0});
  std::stringstream ss;
  write_digraph(ss, g);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "2 2 sector");
}

TEST(TextFormat, MalformedInputRejected) {
  std::stringstream bad1("2 2 sector\n0 0 0\n");
  EXPECT_THROW(read_digraph(bad1), std::invalid_argument);
  std::stringstream bad2("x y z\n");
  EXPECT_THROW(read_digraph(bad2), std::invalid_argument);
  std::stringstream bad3("2 2 sector\n0 0 0\n1 0 0\n1 0\n1 1\n");  // self-loop 1->1
  EXPECT_THROW(read_digraph(bad3), std::invalid_argument);
}
