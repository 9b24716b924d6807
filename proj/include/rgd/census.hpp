#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "rgd/digraph.hpp"
#include "rgd/motif.hpp"

namespace rgd {

using SubsetVisitor = std::function<void(std::span<const std::uint32_t>)>;

/// ESU enumeration on the underlying undirected graph: every k-subset whose
/// induced undirected graph is connected is visited exactly once, rooted at
/// its smallest vertex. Only roots in [root_begin, root_end) are expanded.
/// Subsets are passed in discovery order, not sorted.
void enumerate_connected_subsets(const UndirectedAdjacency& adj, int k, std::size_t root_begin,
                                 std::size_t root_end, const SubsetVisitor& visit);

void enumerate_weakly_connected_subsets(const GeoDigraph& g, int k, const SubsetVisitor& visit);

/// Convenience: all weakly connected k-subsets, each sorted, in sorted order.
std::vector<std::vector<std::uint32_t>> weakly_connected_subsets(const GeoDigraph& g, int k);

/// Induced adjacency of `subset` (position i of the span is pattern vertex
/// i) and whether every out-arc of the subset stays inside it.
struct SubsetProfile {
  AdjacencyBits adjacency = 0;
  bool closed = true;
};

SubsetProfile profile_subset(const GeoDigraph& g, std::span<const std::uint32_t> subset);

struct CensusResult {
  std::string pattern;  // literal
  std::size_t n = 0;
  std::uint64_t induced_count = 0;
  std::uint64_t isolated_count = 0;
  /// Count restricted to subsets whose vertices all satisfy the interior
  /// predicate, when one was supplied.
  std::uint64_t interior_induced = 0;
  std::uint64_t interior_isolated = 0;
  double wall_seconds = 0.0;
};

/// Fast census: ESU enumeration sharded by root vertex. `interior`, when
/// non-empty, flags vertices that count as interior.
CensusResult census(const GeoDigraph& g, const MotifPattern& pattern, unsigned threads = 1,
                    std::span<const bool> interior = {});

std::uint64_t count_induced(const GeoDigraph& g, const MotifPattern& pattern, unsigned threads = 1);
std::uint64_t count_isolated(const GeoDigraph& g, const MotifPattern& pattern,
                             unsigned threads = 1);

/// Exhaustive census over all C(n, k) subsets with a bijection-search
/// isomorphism test.
CensusResult brute_force_census(const GeoDigraph& g, const MotifPattern& pattern);

struct SectorProbe {
  double alpha = kTwoPi;
};
struct RadiusProbe {
  NormSpec norm;
  RadiusLawSpec law;
};
using ProbeModel = std::variant<SectorProbe, RadiusProbe>;

struct FeasibilityResult {
  bool feasible = false;
  double hit_rate = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
};

/// Samples random k-point configurations and reports how often the induced
/// digraph is isomorphic to the pattern. Sector model: unit radius, first
/// apex at the origin, the rest uniform in the disk D(0, k). Radius model:
/// radii from the law, remaining points uniform in the cube of half-width
/// (k - 1) * max radius around the origin.
FeasibilityResult feasibility_probe(const MotifPattern& pattern, const ProbeModel& model,
                                    std::uint64_t trials, std::uint64_t seed,
                                    unsigned threads = 1);

/// Induced adjacency of k unit-radius sectors (apex i at `apex_xy[2i..2i+1]`).
AdjacencyBits sector_configuration_adjacency(int k, std::span<const double> apex_xy,
                                             std::span<const double> orientations, double alpha);

}  // namespace rgd
