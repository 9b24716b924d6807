#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rgd/core_model.hpp"
#include "rgd/digraph.hpp"
#include "rgd/limits.hpp"
#include "rgd/motif.hpp"

namespace rgd {

enum class Regime { ThermoT1, RadiusT2, SparseIsolatedT3, SparseInducedT4 };

std::string_view to_string(Regime r) noexcept;
Regime parse_regime(std::string_view s);

/// Thrown when a schedule, model or density is incompatible with a regime.
class RegimeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scaling of the interaction range with n for one convergence regime.
///   thermo-T1:            r_n = sqrt(lambda / n)
///   radius-T2:            E[R_n^d] = lambda / n for the chosen radius family
///   sparse-*-T3 / T4:     r_n = n^{-beta}
struct RegimeSchedule {
  Regime regime = Regime::ThermoT1;
  double lambda = 1.0;
  double beta = 0.6;
  RadiusLawKind radius_family = RadiusLawKind::Deterministic;
  int dimension = 2;

  static RegimeSchedule thermodynamic(double lambda);
  static RegimeSchedule random_radius(double lambda, RadiusLawKind family, int dimension = 2);
  static RegimeSchedule sparse(Regime regime, double beta, int k);

  /// Open interval of admissible beta for pattern order k >= 2 (sparse regimes).
  static std::pair<double, double> beta_window(int k);

  /// Throws RegimeError when the schedule cannot satisfy its regime for order k.
  void validate(int k) const;

  /// Sector radius r_n (T1, T3, T4) or the nominal radius (lambda/n)^{1/d} (T2).
  double radius_at(std::size_t n) const;
  RadiusLawSpec radius_law_at(std::size_t n) const;
};

/// count / n for T1 and T2; count / (n^k r^{2(k-1)}) for T3 and T4.
double normalize_count(std::uint64_t count, std::size_t n, double r, int k, Regime regime);

struct ModelSpec {
  ModelKind kind = ModelKind::Sector;
  double alpha = kTwoPi;
  NormSpec norm{};
};

struct CheckSpec {
  double rel_tol = 0.0;        // <= 0 disables the relative-error check
  double se_multiplier = 3.0;  // <= 0 disables the standard-error check
};

struct ExperimentSpec {
  RegimeSchedule schedule;
  MotifPattern pattern = MotifPattern::single_vertex();
  ModelSpec model;
  DensitySpec density;
  std::vector<std::size_t> n_list;
  std::size_t seeds_per_n = 20;
  std::uint64_t master_seed = 1;
  std::uint64_t limit_samples = 200000;
  std::uint64_t inner_samples = 4096;
  unsigned threads = 1;
  CheckSpec check;
};

/// Rejects inconsistent combinations (wrong model for the regime, gaussian
/// density for T4, beta outside its window, ...).
void validate_experiment(const ExperimentSpec& spec);

struct ExperimentRow {
  std::size_t n = 0;
  double r_n = 0.0;
  std::size_t seed_index = 0;
  std::uint64_t seed = 0;
  std::uint64_t induced = 0;
  std::uint64_t isolated = 0;
  double normalized = 0.0;
  /// Statistic restricted to subsets at least k * r_n from the support
  /// boundary, normalised by the interior mass fraction. Absent for
  /// unbounded support.
  std::optional<double> interior_normalized;
};

struct NAggregate {
  std::size_t n = 0;
  double r_n = 0.0;
  std::size_t seeds = 0;
  double mean = 0.0;
  double std_dev = 0.0;
  double std_error = 0.0;
  double rel_error = 0.0;
  double combined_se = 0.0;
  double mean_induced = 0.0;
  double mean_isolated = 0.0;
  /// 1 - isolated / induced (0 when nothing was induced).
  double isolation_gap = 0.0;
  std::optional<double> interior_mean;
};

struct ConcentrationRow {
  std::size_t n = 0;
  double std_over_mean = 0.0;
  double max_abs_deviation = 0.0;
  double deviation_ratio = 0.0;  // max_abs_deviation / mean
};

struct ConcentrationSummary {
  std::vector<ConcentrationRow> rows;
  bool trend_checked = false;  // needs at least two values of n
  bool flagged = false;        // deviation ratio failed to decrease along n
};

struct CriterionCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentReport {
  std::vector<std::pair<std::string, std::string>> config;
  Regime regime = Regime::ThermoT1;
  std::string pattern;
  int k = 1;
  LimitEstimate limit;
  std::vector<ExperimentRow> rows;
  std::vector<NAggregate> aggregates;
  std::optional<ConcentrationSummary> diagnostics;
  std::vector<CriterionCheck> checks;
};

/// The limit each regime converges to.
LimitEstimate regime_limit(const ExperimentSpec& spec);

/// One build + census per (n, seed) cell; the cell seed is derived from
/// (master seed, n, seed index) so results do not depend on the thread count.
ExperimentReport run_convergence(const ExperimentSpec& spec);

/// Per-n relative spread of the normalised statistic. Requires >= 10 seeds per n.
ConcentrationSummary concentration_diagnostic(const ExperimentReport& report);

/// Recomputes aggregates and checks from rows and the limit.
void summarize(ExperimentReport& report, const CheckSpec& check);

/// Echo of the experiment parameters, sufficient to re-run it.
std::vector<std::pair<std::string, std::string>> describe(const ExperimentSpec& spec);

}  // namespace rgd
