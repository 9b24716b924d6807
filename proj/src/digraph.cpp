#include "rgd/digraph.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "rgd/parallel.hpp"

namespace rgd {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

// Keeps pairs at exactly the interaction range inside adjacent cells despite
// rounding in x / cell_size.
constexpr double kCellSlack = 1.0 + 1e-9;

std::span<const double> column(const PointSet& p, std::size_t i) {
  const auto d = static_cast<std::size_t>(p.dimension());
  return {p.coords.data() + i * d, d};
}

template <typename RowFn>
std::pair<std::vector<std::size_t>, std::vector<std::uint32_t>> build_rows(std::size_t n,
                                                                           unsigned threads,
                                                                           RowFn&& row) {
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<std::vector<std::uint32_t>> rows(n);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t hi = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < hi; ++i) {
      row(i, rows[i]);
      std::sort(rows[i].begin(), rows[i].end());
    }
  });
  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + rows[i].size();
  std::vector<std::uint32_t> targets;
  targets.reserve(offsets.back());
  for (auto& r : rows) targets.insert(targets.end(), r.begin(), r.end());
  return {std::move(offsets), std::move(targets)};
}

void check_size(const PointSet& points, std::size_t marks) {
  if (points.size() != marks) fail("mark count does not match the number of points");
  if (points.size() > std::numeric_limits<std::uint32_t>::max()) fail("too many points");
}

}  // namespace

std::string_view to_string(ModelKind k) noexcept {
  return k == ModelKind::Sector ? "sector" : "radius";
}

ModelKind parse_model_kind(std::string_view s) {
  if (s == "sector") return ModelKind::Sector;
  if (s == "radius") return ModelKind::Radius;
  fail("unknown model '" + std::string(s) + "'");
}

GeoDigraph::GeoDigraph(ModelKind model, PointSet points, std::vector<double> marks,
                       BuildParams params, std::vector<std::size_t> offsets,
                       std::vector<std::uint32_t> targets)
    : model_(model),
      points_(std::move(points)),
      marks_(std::move(marks)),
      params_(std::move(params)),
      offsets_(std::move(offsets)),
      targets_(std::move(targets)) {
  const std::size_t n = marks_.size();
  if (points_.size() != n) fail("point count does not match mark count");
  if (offsets_.size() != n + 1 || offsets_.front() != 0 || offsets_.back() != targets_.size())
    fail("malformed adjacency offsets");
  for (std::size_t i = 0; i < n; ++i) {
    if (offsets_[i] > offsets_[i + 1]) fail("malformed adjacency offsets");
    const auto row = out(i);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k] >= n) fail("out-neighbour index out of range");
      if (row[k] == i) fail("self-loop at vertex " + std::to_string(i));
      if (k > 0 && row[k - 1] >= row[k]) fail("adjacency row not sorted and duplicate-free");
    }
  }
}

bool GeoDigraph::has_arc(std::size_t from, std::size_t to) const noexcept {
  const auto row = out(from);
  return std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(to));
}

std::size_t SpatialGrid::KeyHash::operator()(const CellKey& k) const noexcept {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (auto v : k) h = mix64(h ^ static_cast<std::uint64_t>(v));
  return static_cast<std::size_t>(h);
}

SpatialGrid::SpatialGrid(const PointSet& points, double cell_size)
    : dimension_(points.dimension()), cell_size_(cell_size) {
  if (dimension_ < 1 || dimension_ > 3) fail("spatial grid supports dimensions 1 to 3");
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) fail("cell size must be positive");
  const std::size_t n = points.size();
  std::vector<std::pair<CellKey, std::uint32_t>> keyed(n);
  for (std::size_t i = 0; i < n; ++i) keyed[i] = {cell_of(column(points, i)), static_cast<std::uint32_t>(i)};
  std::sort(keyed.begin(), keyed.end());
  order_.resize(n);
  cells_.reserve(n);
  std::size_t lo = 0;
  for (std::size_t i = 0; i < n; ++i) {
    order_[i] = keyed[i].second;
    if (i + 1 == n || keyed[i + 1].first != keyed[i].first) {
      cells_.emplace(keyed[i].first,
                     std::pair{static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(i + 1)});
      lo = i + 1;
    }
  }
}

SpatialGrid::CellKey SpatialGrid::cell_of(std::span<const double> x) const noexcept {
  CellKey key{0, 0, 0};
  for (int c = 0; c < dimension_; ++c)
    key[c] = static_cast<std::int64_t>(std::floor(x[c] / cell_size_));
  return key;
}

GeoDigraph build_sector_digraph(const PointSet& points, std::span<const double> orientations,
                                const SectorConfig& cfg, unsigned threads) {
  cfg.validate();
  if (points.dimension() != 2) fail("sector model requires dimension 2");
  check_size(points, orientations.size());
  const SpatialGrid grid(points, cfg.radius * kCellSlack);
  const double* xy = points.coords.data();
  auto [offsets, targets] = build_rows(points.size(), threads, [&](std::size_t i, auto& row) {
    const double ax = xy[2 * i], ay = xy[2 * i + 1];
    grid.for_each_candidate(column(points, i), [&](std::uint32_t j) {
      if (j == i) return;
      if (sector_contains(ax, ay, orientations[i], cfg.alpha, cfg.radius, xy[2 * j], xy[2 * j + 1]))
        row.push_back(j);
    });
  });
  return GeoDigraph(ModelKind::Sector, points, {orientations.begin(), orientations.end()}, cfg,
                    std::move(offsets), std::move(targets));
}

GeoDigraph build_radius_digraph(const PointSet& points, std::span<const double> radii,
                                const NormSpec& norm, unsigned threads) {
  check_size(points, radii.size());
  if (norm.dimension != points.dimension()) fail("norm dimension does not match the points");
  double max_radius = 0.0;
  for (double r : radii) {
    if (!(r > 0.0) || !std::isfinite(r)) fail("radius model requires positive finite radii");
    max_radius = std::max(max_radius, r);
  }
  if (points.size() == 0) {
    return GeoDigraph(ModelKind::Radius, points, {}, norm, {0}, {});
  }
  const SpatialGrid grid(points, max_radius * kCellSlack);
  auto [offsets, targets] = build_rows(points.size(), threads, [&](std::size_t i, auto& row) {
    const auto xi = points.point(i);
    grid.for_each_candidate(column(points, i), [&](std::uint32_t j) {
      if (j == i) return;
      if (in_ball(xi, radii[i], norm, points.point(j))) row.push_back(j);
    });
  });
  return GeoDigraph(ModelKind::Radius, points, {radii.begin(), radii.end()}, norm,
                    std::move(offsets), std::move(targets));
}

GeoDigraph brute_force_build(const PointSet& points, std::span<const double> marks,
                             const BuildParams& params) {
  check_size(points, marks.size());
  const std::size_t n = points.size();
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> targets;
  const bool sector = std::holds_alternative<SectorConfig>(params);
  if (sector) {
    std::get<SectorConfig>(params).validate();
    if (points.dimension() != 2) fail("sector model requires dimension 2");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      bool arc;
      if (sector) {
        const Point2 apex = points.point(i);
        const Point2 query = points.point(j);
        // Coincident points are at distance zero, hence inside the closed sector.
        arc = apex == query || in_sector(apex, marks[i], std::get<SectorConfig>(params), query);
      } else {
        arc = in_ball(points.point(i), marks[i], std::get<NormSpec>(params), points.point(j));
      }
      if (arc) targets.push_back(static_cast<std::uint32_t>(j));
    }
    offsets.push_back(targets.size());
  }
  return GeoDigraph(sector ? ModelKind::Sector : ModelKind::Radius, points,
                    {marks.begin(), marks.end()}, params, std::move(offsets), std::move(targets));
}

bool UndirectedAdjacency::adjacent(std::size_t a, std::size_t b) const noexcept {
  const auto row = of(a);
  return std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(b));
}

UndirectedAdjacency underlying_undirected(const GeoDigraph& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (auto j : g.out(i)) {
      ++degree[i];
      ++degree[j];
    }
  UndirectedAdjacency u;
  u.offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) u.offsets[i + 1] = u.offsets[i] + degree[i];
  u.neighbors.resize(u.offsets.back());
  std::vector<std::size_t> fill(u.offsets.begin(), u.offsets.end() - 1);
  for (std::size_t i = 0; i < n; ++i)
    for (auto j : g.out(i)) {
      u.neighbors[fill[i]++] = j;
      u.neighbors[fill[j]++] = static_cast<std::uint32_t>(i);
    }
  // Sort rows and drop the duplicate produced by mutual arcs.
  std::vector<std::size_t> new_offsets(n + 1, 0);
  std::size_t write = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto first = u.neighbors.begin() + static_cast<std::ptrdiff_t>(u.offsets[i]);
    auto last = u.neighbors.begin() + static_cast<std::ptrdiff_t>(u.offsets[i + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    for (auto it = first; it != last; ++it) u.neighbors[write++] = *it;
    new_offsets[i + 1] = write;
  }
  u.neighbors.resize(write);
  u.offsets = std::move(new_offsets);
  return u;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> underlying_undirected_edges(
    const GeoDigraph& g) {
  const auto u = underlying_undirected(g);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (auto j : u.of(i))
      if (j > i) edges.emplace_back(static_cast<std::uint32_t>(i), j);
  return edges;
}

void write_digraph(std::ostream& os, const GeoDigraph& g) {
  const int d = g.points().dimension();
  os << g.size() << ' ' << d << ' ' << to_string(g.model()) << '\n';
  os << std::setprecision(17);
  if (const auto* s = std::get_if<SectorConfig>(&g.params()))
    os << "# alpha " << s->alpha << " radius " << s->radius << '\n';
  else
    os << "# norm " << to_string(std::get<NormSpec>(g.params()).kind) << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto p = g.points().point(i);
    for (int c = 0; c < d; ++c) os << p[c] << ' ';
    os << g.marks()[i] << '\n';
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    os << g.out_degree(i);
    for (auto j : g.out(i)) os << ' ' << j;
    os << '\n';
  }
}

GeoDigraph read_digraph(std::istream& is) {
  std::size_t n = 0;
  int d = 0;
  std::string model_name;
  BuildParams params = SectorConfig{};
  bool have_header = false;

  // Comment lines after the header carry the model parameters.
  auto parse_comment = [&](const std::string& text) {
    if (!have_header) return;
    std::istringstream c(text.substr(1));
    std::string key;
    while (c >> key) {
      if (key == "alpha" || key == "radius") {
        double v = 0.0;
        if (!(c >> v)) fail("malformed parameter comment");
        if (auto* s = std::get_if<SectorConfig>(&params)) (key == "alpha" ? s->alpha : s->radius) = v;
      } else if (key == "norm") {
        std::string v;
        c >> v;
        params = NormSpec{parse_norm_kind(v), d};
      }
    }
  };
  std::string line;
  auto next_line = [&]() -> std::string {
    while (std::getline(is, line)) {
      if (!line.empty() && line[0] == '#') {
        parse_comment(line);
        continue;
      }
      return line;
    }
    fail("unexpected end of digraph file");
  };

  {
    std::istringstream header(next_line());
    if (!(header >> n >> d >> model_name) || d < 1) fail("malformed digraph header");
  }
  const ModelKind model = parse_model_kind(model_name);
  if (model == ModelKind::Radius) params = NormSpec{NormKind::L2, d};
  have_header = true;

  std::vector<std::vector<double>> rows(n, std::vector<double>(static_cast<std::size_t>(d)));
  std::vector<double> marks(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::istringstream ls(next_line());
    for (int c = 0; c < d; ++c)
      if (!(ls >> rows[i][static_cast<std::size_t>(c)])) fail("malformed coordinate line");
    if (!(ls >> marks[i])) fail("malformed coordinate line");
  }
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> targets;
  for (std::size_t i = 0; i < n; ++i) {
    std::istringstream ls(next_line());
    std::size_t deg = 0;
    if (!(ls >> deg)) fail("malformed adjacency line");
    for (std::size_t k = 0; k < deg; ++k) {
      std::uint32_t j;
      if (!(ls >> j)) fail("malformed adjacency line");
      targets.push_back(j);
    }
    offsets.push_back(targets.size());
  }
  PointSet ps = n ? PointSet::from_rows(rows) : PointSet{Eigen::MatrixXd(d, 0), 0};
  return GeoDigraph(model, std::move(ps), std::move(marks), params, std::move(offsets),
                    std::move(targets));
}

}  // namespace rgd
