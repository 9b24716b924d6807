#include "rgd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

#include "rgd/census.hpp"
#include "rgd/format.hpp"
#include "rgd/parallel.hpp"
#include "rgd/random.hpp"

namespace rgd {

namespace {

[[noreturn]] void reject(const std::string& what) { throw RegimeError(what); }

bool is_sparse(Regime r) {
  return r == Regime::SparseIsolatedT3 || r == Regime::SparseInducedT4;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::ThermoT1:
      return "thermo-T1";
    case Regime::RadiusT2:
      return "radius-T2";
    case Regime::SparseIsolatedT3:
      return "sparse-isolated-T3";
    case Regime::SparseInducedT4:
      return "sparse-induced-T4";
  }
  return "?";
}

Regime parse_regime(std::string_view s) {
  if (s == "thermo-T1") return Regime::ThermoT1;
  if (s == "radius-T2") return Regime::RadiusT2;
  if (s == "sparse-isolated-T3") return Regime::SparseIsolatedT3;
  if (s == "sparse-induced-T4") return Regime::SparseInducedT4;
  throw std::invalid_argument("unknown regime '" + std::string(s) + "'");
}

RegimeSchedule RegimeSchedule::thermodynamic(double lambda) {
  RegimeSchedule s;
  s.regime = Regime::ThermoT1;
  s.lambda = lambda;
  s.validate(1);
  return s;
}

RegimeSchedule RegimeSchedule::random_radius(double lambda, RadiusLawKind family, int dimension) {
  RegimeSchedule s;
  s.regime = Regime::RadiusT2;
  s.lambda = lambda;
  s.radius_family = family;
  s.dimension = dimension;
  s.validate(1);
  return s;
}

RegimeSchedule RegimeSchedule::sparse(Regime regime, double beta, int k) {
  if (!is_sparse(regime)) reject("sparse() requires a sparse regime");
  RegimeSchedule s;
  s.regime = regime;
  s.beta = beta;
  s.validate(k);
  return s;
}

std::pair<double, double> RegimeSchedule::beta_window(int k) {
  if (k < 2) reject("sparse regimes require pattern order k >= 2");
  return {0.5, (2.0 * k - 1.0) / (4.0 * (k - 1.0))};
}

void RegimeSchedule::validate(int k) const {
  switch (regime) {
    case Regime::ThermoT1:
      if (!(lambda > 0.0) || !std::isfinite(lambda)) reject("thermo-T1 requires lambda in (0, inf)");
      break;
    case Regime::RadiusT2:
      if (!(lambda > 0.0) || !std::isfinite(lambda))
        reject("radius-T2 experiments require lambda in (0, inf)");
      if (k != 1) reject("radius-T2 concerns isolated single vertices (k = 1)");
      if (dimension < 1) reject("radius-T2 requires dimension >= 1");
      break;
    case Regime::SparseIsolatedT3: {
      const auto [lo, hi] = beta_window(k);
      if (!(beta > lo && beta < hi)) {
        std::ostringstream os;
        os << "sparse-isolated-T3 requires beta in (" << lo << ", " << hi << ") for k=" << k
           << ", got " << beta;
        reject(os.str());
      }
      break;
    }
    case Regime::SparseInducedT4: {
      const double hi = beta_window(k).second;
      if (!(beta > 0.0 && beta < hi)) {
        std::ostringstream os;
        os << "sparse-induced-T4 requires beta in (0, " << hi << ") for k=" << k << ", got "
           << beta;
        reject(os.str());
      }
      break;
    }
  }
}

double RegimeSchedule::radius_at(std::size_t n) const {
  const double nn = static_cast<double>(n);
  switch (regime) {
    case Regime::ThermoT1:
      return std::sqrt(lambda / nn);
    case Regime::RadiusT2:
      return std::pow(lambda / nn, 1.0 / dimension);
    case Regime::SparseIsolatedT3:
    case Regime::SparseInducedT4:
      return std::pow(nn, -beta);
  }
  return 0.0;
}

RadiusLawSpec RegimeSchedule::radius_law_at(std::size_t n) const {
  if (regime != Regime::RadiusT2) reject("radius laws belong to the radius-T2 regime");
  return RadiusLawSpec::with_moment(radius_family, dimension, lambda / static_cast<double>(n));
}

double normalize_count(std::uint64_t count, std::size_t n, double r, int k, Regime regime) {
  const double c = static_cast<double>(count);
  const double nn = static_cast<double>(n);
  if (!is_sparse(regime)) return c / nn;
  return c / (std::pow(nn, k) * std::pow(r, 2.0 * (k - 1)));
}

void validate_experiment(const ExperimentSpec& spec) {
  const int k = spec.pattern.order();
  spec.density.validate();
  spec.schedule.validate(k);
  const Regime r = spec.schedule.regime;
  if (r == Regime::RadiusT2) {
    if (spec.model.kind != ModelKind::Radius) reject("radius-T2 uses the radius model");
    if (spec.model.norm.dimension != spec.density.dimension ||
        spec.schedule.dimension != spec.density.dimension)
      reject("radius-T2: norm, schedule and density dimensions differ");
  } else {
    if (spec.model.kind != ModelKind::Sector) reject(std::string(to_string(r)) + " uses the sector model");
    if (spec.density.dimension != 2) reject("the sector model lives in dimension 2");
    SectorConfig{spec.model.alpha, 1.0}.validate();
  }
  if (r == Regime::SparseInducedT4 && !spec.density.has_bounded_support())
    reject("sparse-induced-T4 requires a density with bounded support");
  if (spec.n_list.empty()) reject("experiment needs at least one n");
  for (auto n : spec.n_list)
    if (n < static_cast<std::size_t>(k)) reject("every n must be at least the pattern order");
  if (spec.seeds_per_n < 1) reject("experiment needs at least one seed per n");
}

LimitEstimate regime_limit(const ExperimentSpec& spec) {
  MonteCarloOptions o;
  o.samples = spec.limit_samples;
  o.inner_samples = spec.inner_samples;
  o.seed = derive_seed(spec.master_seed, static_cast<std::uint64_t>(StreamDomain::LimitOuter));
  o.threads = spec.threads;
  switch (spec.schedule.regime) {
    case Regime::ThermoT1:
      return thermodynamic_limit(spec.pattern, spec.model.alpha, spec.schedule.lambda,
                                 spec.density, o);
    case Regime::RadiusT2:
      return isolated_vertex_limit(spec.density, spec.model.norm, spec.schedule.lambda, o.samples,
                                   o.seed, o.threads);
    case Regime::SparseIsolatedT3:
    case Regime::SparseInducedT4:
      if (spec.pattern.order() == 2) return closed_form_mu_k2(spec.pattern, spec.model.alpha, spec.density);
      return estimate_mu(spec.pattern, spec.model.alpha, spec.density, o);
  }
  return {};
}

std::vector<std::pair<std::string, std::string>> describe(const ExperimentSpec& spec) {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("regime", std::string(to_string(spec.schedule.regime)));
  e.emplace_back("lambda", format_double(spec.schedule.lambda));
  e.emplace_back("beta", format_double(spec.schedule.beta));
  e.emplace_back("radius_family", std::string(to_string(spec.schedule.radius_family)));
  e.emplace_back("pattern", spec.pattern.to_literal());
  e.emplace_back("model", std::string(to_string(spec.model.kind)));
  e.emplace_back("alpha", format_double(spec.model.alpha));
  e.emplace_back("norm", std::string(to_string(spec.model.norm.kind)));
  e.emplace_back("density", std::string(to_string(spec.density.kind)));
  e.emplace_back("dimension", std::to_string(spec.density.dimension));
  e.emplace_back("density_scale", format_double(spec.density.scale));
  e.emplace_back("n_list", join_sizes(spec.n_list));
  e.emplace_back("seeds_per_n", std::to_string(spec.seeds_per_n));
  e.emplace_back("master_seed", std::to_string(spec.master_seed));
  e.emplace_back("limit_samples", std::to_string(spec.limit_samples));
  e.emplace_back("inner_samples", std::to_string(spec.inner_samples));
  return e;
}

ExperimentReport run_convergence(const ExperimentSpec& spec) {
  validate_experiment(spec);
  const int k = spec.pattern.order();
  const Regime regime = spec.schedule.regime;

  ExperimentReport report;
  report.config = describe(spec);
  report.regime = regime;
  report.pattern = spec.pattern.to_literal();
  report.k = k;
  report.limit = regime_limit(spec);

  const std::size_t cells = spec.n_list.size() * spec.seeds_per_n;
  report.rows.resize(cells);
  parallel_for(cells, spec.threads, [&](std::size_t cell) {
    const std::size_t n = spec.n_list[cell / spec.seeds_per_n];
    const std::size_t s = cell % spec.seeds_per_n;
    const std::uint64_t seed = derive_seed(spec.master_seed, n, s);
    const PointSet points = sample_points(spec.density, n, seed);

    double r = spec.schedule.radius_at(n);
    GeoDigraph g;
    if (regime == Regime::RadiusT2) {
      const auto radii = sample_radii(spec.schedule.radius_law_at(n), n, seed);
      g = build_radius_digraph(points, radii, spec.model.norm);
    } else {
      const auto y = sample_orientations(n, seed);
      g = build_sector_digraph(points, y, SectorConfig{spec.model.alpha, r});
    }

    std::unique_ptr<bool[]> interior;
    double interior_fraction = 0.0;
    if (spec.density.has_bounded_support()) {
      double reach = r;
      if (regime == Regime::RadiusT2)
        reach = *std::max_element(g.marks().begin(), g.marks().end());
      interior = std::make_unique<bool[]>(n);
      std::size_t inside = 0;
      for (std::size_t i = 0; i < n; ++i) {
        interior[i] = boundary_distance(spec.density, points.point(i)) >= k * reach;
        inside += interior[i];
      }
      interior_fraction = static_cast<double>(inside) / static_cast<double>(n);
    }
    const auto result =
        census(g, spec.pattern, 1,
               interior ? std::span<const bool>(interior.get(), n) : std::span<const bool>{});

    ExperimentRow row;
    row.n = n;
    row.r_n = r;
    row.seed_index = s;
    row.seed = seed;
    row.induced = result.induced_count;
    row.isolated = result.isolated_count;
    const bool induced_statistic = regime == Regime::SparseInducedT4;
    row.normalized =
        normalize_count(induced_statistic ? row.induced : row.isolated, n, r, k, regime);
    if (interior && interior_fraction > 0.0) {
      const auto c = induced_statistic ? result.interior_induced : result.interior_isolated;
      row.interior_normalized = normalize_count(c, n, r, k, regime) / interior_fraction;
    }
    report.rows[cell] = row;
  });

  summarize(report, spec.check);
  return report;
}

void summarize(ExperimentReport& report, const CheckSpec& check) {
  report.aggregates.clear();
  report.checks.clear();
  std::map<std::size_t, std::vector<const ExperimentRow*>> by_n;
  std::vector<std::size_t> order;
  for (const auto& row : report.rows) {
    if (!by_n.count(row.n)) order.push_back(row.n);
    by_n[row.n].push_back(&row);
  }
  const auto& limit = report.limit;
  for (auto n : order) {
    const auto& rows = by_n[n];
    NAggregate a;
    a.n = n;
    a.r_n = rows.front()->r_n;
    a.seeds = rows.size();
    MeanAccumulator stat, induced, isolated, interior;
    bool has_interior = true;
    for (const auto* r : rows) {
      stat.add(r->normalized);
      induced.add(static_cast<double>(r->induced));
      isolated.add(static_cast<double>(r->isolated));
      if (r->interior_normalized)
        interior.add(*r->interior_normalized);
      else
        has_interior = false;
    }
    a.mean = stat.mean();
    a.std_dev = std::sqrt(stat.variance());
    a.std_error = stat.std_error();
    a.rel_error = limit.value != 0.0 ? std::abs(a.mean - limit.value) / std::abs(limit.value)
                                     : std::abs(a.mean);
    a.combined_se = std::hypot(a.std_error, limit.std_error);
    a.mean_induced = induced.mean();
    a.mean_isolated = isolated.mean();
    a.isolation_gap = a.mean_induced > 0.0 ? 1.0 - a.mean_isolated / a.mean_induced : 0.0;
    if (has_interior && interior.count) a.interior_mean = interior.mean();
    report.aggregates.push_back(a);
  }

  bool enough_seeds = !report.aggregates.empty();
  for (const auto& a : report.aggregates) enough_seeds = enough_seeds && a.seeds >= 10;
  report.diagnostics.reset();
  if (enough_seeds) report.diagnostics = concentration_diagnostic(report);

  if (report.aggregates.empty()) return;
  const auto& last = report.aggregates.back();
  auto describe_value = [](double v) { return format_double(v); };
  if (check.rel_tol > 0.0) {
    report.checks.push_back({"relative_error", last.rel_error <= check.rel_tol,
                             "n=" + std::to_string(last.n) + " rel_error=" +
                                 describe_value(last.rel_error) + " tol=" +
                                 describe_value(check.rel_tol)});
  }
  if (check.se_multiplier > 0.0) {
    const double dev = std::abs(last.mean - limit.value);
    report.checks.push_back({"standard_error", dev <= check.se_multiplier * last.combined_se,
                             "n=" + std::to_string(last.n) + " |mean-limit|=" +
                                 describe_value(dev) + " bound=" +
                                 describe_value(check.se_multiplier * last.combined_se)});
  }
  bool ordered = true;
  for (const auto& r : report.rows) ordered = ordered && r.isolated <= r.induced;
  report.checks.push_back({"isolated_le_induced", ordered, ordered ? "all rows" : "violated"});
}

ConcentrationSummary concentration_diagnostic(const ExperimentReport& report) {
  ConcentrationSummary out;
  std::map<std::size_t, std::vector<double>> by_n;
  std::vector<std::size_t> order;
  for (const auto& row : report.rows) {
    if (!by_n.count(row.n)) order.push_back(row.n);
    by_n[row.n].push_back(row.normalized);
  }
  std::sort(order.begin(), order.end());
  for (auto n : order) {
    const auto& v = by_n[n];
    if (v.size() < 10)
      throw std::invalid_argument("concentration diagnostic needs at least 10 seeds per n");
    MeanAccumulator acc;
    for (double x : v) acc.add(x);
    ConcentrationRow c;
    c.n = n;
    const double mean = acc.mean();
    const double sd = std::sqrt(acc.variance());
    for (double x : v) c.max_abs_deviation = std::max(c.max_abs_deviation, std::abs(x - mean));
    c.std_over_mean = mean != 0.0 ? sd / std::abs(mean) : 0.0;
    c.deviation_ratio = mean != 0.0 ? c.max_abs_deviation / std::abs(mean) : 0.0;
    out.rows.push_back(c);
  }
  out.trend_checked = out.rows.size() >= 2;
  for (std::size_t i = 1; i < out.rows.size(); ++i)
    if (!(out.rows[i].deviation_ratio < out.rows[i - 1].deviation_ratio)) out.flagged = true;
  return out;
}

}  // namespace rgd
