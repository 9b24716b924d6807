#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "rgd/core_model.hpp"

namespace rgd {

enum class ModelKind { Sector, Radius };

std::string_view to_string(ModelKind k) noexcept;
ModelKind parse_model_kind(std::string_view s);

/// Model parameters carried by a digraph: the sector shape, or the norm used
/// by the radius model (radii themselves are per-vertex marks).
using BuildParams = std::variant<SectorConfig, NormSpec>;

/// Immutable digraph on a point set. Out-adjacency is stored as compressed
/// rows; each row is sorted ascending and free of duplicates and self-loops.
class GeoDigraph {
 public:
  GeoDigraph() = default;
  /// Validates the CSR invariants; throws std::invalid_argument otherwise.
  GeoDigraph(ModelKind model, PointSet points, std::vector<double> marks, BuildParams params,
             std::vector<std::size_t> offsets, std::vector<std::uint32_t> targets);

  ModelKind model() const noexcept { return model_; }
  const PointSet& points() const noexcept { return points_; }
  const std::vector<double>& marks() const noexcept { return marks_; }
  const BuildParams& params() const noexcept { return params_; }

  std::size_t size() const noexcept { return marks_.size(); }
  std::size_t arc_count() const noexcept { return targets_.size(); }

  std::span<const std::uint32_t> out(std::size_t i) const noexcept {
    return {targets_.data() + offsets_[i], targets_.data() + offsets_[i + 1]};
  }
  std::size_t out_degree(std::size_t i) const noexcept { return offsets_[i + 1] - offsets_[i]; }
  bool has_arc(std::size_t from, std::size_t to) const noexcept;

  const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }
  const std::vector<std::uint32_t>& targets() const noexcept { return targets_; }

  /// Same arc set (marks and positions are not compared).
  bool same_arcs(const GeoDigraph& other) const noexcept {
    return offsets_ == other.offsets_ && targets_ == other.targets_;
  }

 private:
  ModelKind model_ = ModelKind::Sector;
  PointSet points_;
  std::vector<double> marks_;
  BuildParams params_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> targets_;
};

/// Uniform grid over a point set. Cell coordinates are floor(x / cell_size)
/// per axis; a query visits the 3^d cells around its own cell.
class SpatialGrid {
 public:
  using CellKey = std::array<std::int64_t, 3>;

  SpatialGrid(const PointSet& points, double cell_size);

  double cell_size() const noexcept { return cell_size_; }
  std::size_t cell_count() const noexcept { return cells_.size(); }
  CellKey cell_of(std::span<const double> x) const noexcept;

  /// Calls visit(j) for every vertex in the cells adjacent to x's cell.
  template <typename Visit>
  void for_each_candidate(std::span<const double> x, Visit&& visit) const {
    const CellKey c = cell_of(x);
    const int d = dimension_;
    const int span_y = d >= 2 ? 1 : 0;
    const int span_z = d >= 3 ? 1 : 0;
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -span_y; dy <= span_y; ++dy)
        for (std::int64_t dz = -span_z; dz <= span_z; ++dz) {
          const auto it = cells_.find(CellKey{c[0] + dx, c[1] + dy, c[2] + dz});
          if (it == cells_.end()) continue;
          for (std::uint32_t k = it->second.first; k < it->second.second; ++k) visit(order_[k]);
        }
  }

 private:
  struct KeyHash {
    std::size_t operator()(const CellKey& k) const noexcept;
  };

  int dimension_;
  double cell_size_;
  std::vector<std::uint32_t> order_;
  std::unordered_map<CellKey, std::pair<std::uint32_t, std::uint32_t>, KeyHash> cells_;
};

/// Grid-accelerated sector model build (d = 2).
GeoDigraph build_sector_digraph(const PointSet& points, std::span<const double> orientations,
                                const SectorConfig& cfg, unsigned threads = 1);

/// Grid-accelerated radius model build; arc i->j iff ||X_i - X_j|| < R_i.
GeoDigraph build_radius_digraph(const PointSet& points, std::span<const double> radii,
                                const NormSpec& norm, unsigned threads = 1);

/// O(n^2) reference build over all ordered pairs.
GeoDigraph brute_force_build(const PointSet& points, std::span<const double> marks,
                             const BuildParams& params);

/// Symmetric neighbour lists of the underlying undirected graph.
struct UndirectedAdjacency {
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> neighbors;

  std::size_t size() const noexcept { return offsets.size() - 1; }
  std::span<const std::uint32_t> of(std::size_t i) const noexcept {
    return {neighbors.data() + offsets[i], neighbors.data() + offsets[i + 1]};
  }
  bool adjacent(std::size_t a, std::size_t b) const noexcept;
};

UndirectedAdjacency underlying_undirected(const GeoDigraph& g);

/// {i, j} with i < j, present iff i->j or j->i; sorted.
std::vector<std::pair<std::uint32_t, std::uint32_t>> underlying_undirected_edges(
    const GeoDigraph& g);

// Plain-text exchange format:
//   n d model
//   # optional comment lines (model parameters)
//   n lines:  x_1 ... x_d mark
//   n lines:  out_degree j_1 ... j_m
void write_digraph(std::ostream& os, const GeoDigraph& g);
GeoDigraph read_digraph(std::istream& is);

}  // namespace rgd
