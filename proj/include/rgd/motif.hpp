#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rgd {

inline constexpr int kMaxMotifOrder = 8;

/// Adjacency of a digraph on up to 8 vertices: bit (i * k + j) is the arc i->j.
using AdjacencyBits = std::uint64_t;

constexpr AdjacencyBits arc_bit(int k, int i, int j) noexcept {
  return AdjacencyBits{1} << (i * k + j);
}

/// Minimal row-major adjacency-matrix encoding over all k! orderings,
/// serialised as [k, big-endian bytes]. Equal iff the digraphs are isomorphic.
std::string canonical_code(int k, AdjacencyBits adjacency);

/// Direct isomorphism test by trying every bijection.
bool isomorphic(int k, AdjacencyBits a, AdjacencyBits b);

bool weakly_connected(int k, AdjacencyBits adjacency);

/// Target digraph T: order k, no self-loops, weakly connected.
class MotifPattern {
 public:
  /// Throws std::invalid_argument on self-loops, out-of-range endpoints,
  /// k outside [1, 8], or a pattern that is not weakly connected.
  MotifPattern(int k, const std::vector<std::pair<int, int>>& arcs);

  static MotifPattern from_bits(int k, AdjacencyBits adjacency);

  /// Literal grammar: `k=<int>; arcs=<a>b>,<a>b>,...` (0-based endpoints).
  static MotifPattern parse(std::string_view literal);

  static MotifPattern single_vertex() { return MotifPattern(1, {}); }
  static MotifPattern single_arc() { return MotifPattern(2, {{0, 1}}); }
  static MotifPattern mutual_pair() { return MotifPattern(2, {{0, 1}, {1, 0}}); }

  int order() const noexcept { return k_; }
  AdjacencyBits adjacency() const noexcept { return adjacency_; }
  const std::string& code() const noexcept { return code_; }
  std::vector<std::pair<int, int>> arcs() const;
  std::size_t arc_count() const noexcept;

  /// Literal in the grammar accepted by parse().
  std::string to_literal() const;

  friend bool operator==(const MotifPattern& a, const MotifPattern& b) noexcept {
    return a.code_ == b.code_;
  }

 private:
  int k_ = 1;
  AdjacencyBits adjacency_ = 0;
  std::string code_;
};

/// One representative per isomorphism class of weakly connected digraphs
/// on k vertices (k <= 4), ordered by canonical code.
std::vector<MotifPattern> all_weakly_connected_patterns(int k);

}  // namespace rgd
