#include "rgd/census.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_map>

#include "rgd/parallel.hpp"
#include "rgd/random.hpp"

namespace rgd {

namespace {

struct EsuState {
  const UndirectedAdjacency& adj;
  int k;
  const SubsetVisitor& visit;
  std::uint32_t root = 0;
  std::vector<std::uint32_t> subset;

  bool in_closed_neighbourhood(std::uint32_t u) const {
    for (auto s : subset)
      if (s == u || adj.adjacent(s, u)) return true;
    return false;
  }

  void extend(std::vector<std::uint32_t> extension) {
    if (static_cast<int>(subset.size()) == k) {
      visit(subset);
      return;
    }
    while (!extension.empty()) {
      const std::uint32_t w = extension.back();
      extension.pop_back();
      // Exclusive neighbours of w: not in the subset nor adjacent to it.
      std::vector<std::uint32_t> next = extension;
      for (auto u : adj.of(w))
        if (u > root && !in_closed_neighbourhood(u)) next.push_back(u);
      subset.push_back(w);
      extend(std::move(next));
      subset.pop_back();
    }
  }
};

class PatternMatcher {
 public:
  explicit PatternMatcher(const MotifPattern& p) : pattern_(p) {}

  bool matches(AdjacencyBits adj) {
    const auto it = memo_.find(adj);
    if (it != memo_.end()) return it->second;
    const bool m = canonical_code(pattern_.order(), adj) == pattern_.code();
    memo_.emplace(adj, m);
    return m;
  }

 private:
  const MotifPattern& pattern_;
  std::unordered_map<AdjacencyBits, bool> memo_;
};

}  // namespace

void enumerate_connected_subsets(const UndirectedAdjacency& adj, int k, std::size_t root_begin,
                                 std::size_t root_end, const SubsetVisitor& visit) {
  if (k < 1) throw std::invalid_argument("subset order must be >= 1");
  root_end = std::min(root_end, adj.size());
  for (std::size_t v = root_begin; v < root_end; ++v) {
    EsuState state{adj, k, visit, static_cast<std::uint32_t>(v), {}};
    state.subset.reserve(static_cast<std::size_t>(k));
    state.subset.push_back(static_cast<std::uint32_t>(v));
    std::vector<std::uint32_t> extension;
    for (auto u : adj.of(v))
      if (u > v) extension.push_back(u);
    state.extend(std::move(extension));
  }
}

void enumerate_weakly_connected_subsets(const GeoDigraph& g, int k, const SubsetVisitor& visit) {
  const auto adj = underlying_undirected(g);
  enumerate_connected_subsets(adj, k, 0, adj.size(), visit);
}

std::vector<std::vector<std::uint32_t>> weakly_connected_subsets(const GeoDigraph& g, int k) {
  std::vector<std::vector<std::uint32_t>> out;
  enumerate_weakly_connected_subsets(g, k, [&](std::span<const std::uint32_t> s) {
    std::vector<std::uint32_t> v(s.begin(), s.end());
    std::sort(v.begin(), v.end());
    out.push_back(std::move(v));
  });
  std::sort(out.begin(), out.end());
  return out;
}

SubsetProfile profile_subset(const GeoDigraph& g, std::span<const std::uint32_t> subset) {
  const int k = static_cast<int>(subset.size());
  SubsetProfile p;
  for (int a = 0; a < k; ++a) {
    for (auto j : g.out(subset[static_cast<std::size_t>(a)])) {
      int b = 0;
      while (b < k && subset[static_cast<std::size_t>(b)] != j) ++b;
      if (b == k)
        p.closed = false;
      else
        p.adjacency |= arc_bit(k, a, b);
    }
  }
  return p;
}

CensusResult census(const GeoDigraph& g, const MotifPattern& pattern, unsigned threads,
                    std::span<const bool> interior) {
  const auto start = std::chrono::steady_clock::now();
  const auto adj = underlying_undirected(g);
  const int k = pattern.order();
  const bool track_interior = !interior.empty();
  if (track_interior && interior.size() != g.size())
    throw std::invalid_argument("interior mask size does not match the digraph");

  constexpr std::size_t kRootChunk = 2048;
  const std::size_t chunks = (g.size() + kRootChunk - 1) / kRootChunk;
  struct Partial {
    std::uint64_t induced = 0, isolated = 0, interior_induced = 0, interior_isolated = 0;
  };
  std::vector<Partial> partial(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    PatternMatcher matcher(pattern);
    Partial acc;
    enumerate_connected_subsets(adj, k, c * kRootChunk, (c + 1) * kRootChunk,
                                [&](std::span<const std::uint32_t> s) {
                                  const auto prof = profile_subset(g, s);
                                  if (!matcher.matches(prof.adjacency)) return;
                                  bool inner = track_interior;
                                  if (inner)
                                    for (auto v : s) inner = inner && interior[v];
                                  ++acc.induced;
                                  if (inner) ++acc.interior_induced;
                                  if (prof.closed) {
                                    ++acc.isolated;
                                    if (inner) ++acc.interior_isolated;
                                  }
                                });
    partial[c] = acc;
  });

  CensusResult r;
  r.pattern = pattern.to_literal();
  r.n = g.size();
  for (const auto& p : partial) {
    r.induced_count += p.induced;
    r.isolated_count += p.isolated;
    r.interior_induced += p.interior_induced;
    r.interior_isolated += p.interior_isolated;
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::uint64_t count_induced(const GeoDigraph& g, const MotifPattern& pattern, unsigned threads) {
  return census(g, pattern, threads).induced_count;
}

std::uint64_t count_isolated(const GeoDigraph& g, const MotifPattern& pattern,
                             unsigned threads) {
  return census(g, pattern, threads).isolated_count;
}

CensusResult brute_force_census(const GeoDigraph& g, const MotifPattern& pattern) {
  const auto start = std::chrono::steady_clock::now();
  const int k = pattern.order();
  const std::size_t n = g.size();
  CensusResult r;
  r.pattern = pattern.to_literal();
  r.n = n;
  if (static_cast<std::size_t>(k) <= n) {
    std::vector<std::uint32_t> subset(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(i);
    for (;;) {
      AdjacencyBits adj = 0;
      bool closed = true;
      for (int a = 0; a < k; ++a) {
        const auto va = subset[static_cast<std::size_t>(a)];
        for (int b = 0; b < k; ++b)
          if (a != b && g.has_arc(va, subset[static_cast<std::size_t>(b)])) adj |= arc_bit(k, a, b);
        for (auto j : g.out(va))
          if (std::find(subset.begin(), subset.end(), j) == subset.end()) closed = false;
      }
      if (isomorphic(k, adj, pattern.adjacency())) {
        ++r.induced_count;
        if (closed) ++r.isolated_count;
      }
      // Next combination in lexicographic order.
      int i = k - 1;
      while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - static_cast<std::size_t>(k - i)) --i;
      if (i < 0) break;
      ++subset[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j)
        subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

AdjacencyBits sector_configuration_adjacency(int k, std::span<const double> apex_xy,
                                             std::span<const double> orientations, double alpha) {
  AdjacencyBits adj = 0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      if (sector_contains(apex_xy[2 * i], apex_xy[2 * i + 1], orientations[i], alpha, 1.0,
                          apex_xy[2 * j], apex_xy[2 * j + 1]))
        adj |= arc_bit(k, i, j);
    }
  return adj;
}

FeasibilityResult feasibility_probe(const MotifPattern& pattern, const ProbeModel& model,
                                    std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  if (trials < 1) throw std::invalid_argument("feasibility probe requires trials >= 1");
  const int k = pattern.order();
  const auto acc = blocked_mean(trials, threads, [&](std::uint64_t t) -> double {
    CounterRng rng(seed, StreamDomain::Probe, t);
    AdjacencyBits adj = 0;
    if (const auto* s = std::get_if<SectorProbe>(&model)) {
      std::vector<double> xy(2 * static_cast<std::size_t>(k), 0.0), y(static_cast<std::size_t>(k));
      for (int i = 1; i < k; ++i) {
        double x0, x1;
        do {
          x0 = k * (2.0 * rng.uniform() - 1.0);
          x1 = k * (2.0 * rng.uniform() - 1.0);
        } while (x0 * x0 + x1 * x1 >= double(k) * k);
        xy[2 * i] = x0;
        xy[2 * i + 1] = x1;
      }
      for (auto& v : y) v = rng.angle();
      adj = sector_configuration_adjacency(k, xy, y, s->alpha);
    } else {
      const auto& r = std::get<RadiusProbe>(model);
      const int d = r.norm.dimension;
      std::vector<double> radii(static_cast<std::size_t>(k));
      double rmax = 0.0;
      for (auto& v : radii) {
        v = draw_radius(r.law, rng);
        rmax = std::max(rmax, v);
      }
      Eigen::MatrixXd x = Eigen::MatrixXd::Zero(d, k);
      const double half = (k - 1) * rmax;
      for (int i = 1; i < k; ++i)
        for (int c = 0; c < d; ++c) x(c, i) = half * (2.0 * rng.uniform() - 1.0);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          if (i != j && in_ball(x.col(i), radii[static_cast<std::size_t>(i)], r.norm, x.col(j)))
            adj |= arc_bit(k, i, j);
    }
    return canonical_code(k, adj) == pattern.code() ? 1.0 : 0.0;
  });
  FeasibilityResult r;
  r.trials = trials;
  r.hits = static_cast<std::uint64_t>(acc.sum + 0.5);
  r.hit_rate = acc.mean();
  r.feasible = r.hits > 0;
  return r;
}

}  // namespace rgd
