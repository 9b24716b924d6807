#pragma once

// Sectioned key-value run configuration:
//
//   # comment
//   command = converge
//   seed = 42
//   [model]
//   kind = sector
//   alpha = pi/2
//
// Values are strings, integers, reals (reals also accept `pi`, `2pi`,
// `2*pi/3`, ...), or comma-separated lists. Unknown sections and keys are
// errors.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rgd/core_model.hpp"
#include "rgd/digraph.hpp"
#include "rgd/harness.hpp"
#include "rgd/motif.hpp"
#include "rgd/report.hpp"

namespace rgd {

enum class Command { Generate, Census, Limit, Converge, Probe };

std::string_view to_string(Command c) noexcept;
std::optional<Command> parse_command(std::string_view s) noexcept;

enum class LimitQuantity { Thermodynamic, Phi, IsolatedVertex, Mu, MuClosed, DensityPower };

std::string_view to_string(LimitQuantity q) noexcept;

struct ConfigIssue {
  std::string key;  // "section.key", or the section / line content
  int line = 0;
  std::string reason;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

struct ConfigEntry {
  std::string section;  // empty for top-level keys
  std::string key;
  std::string value;
  int line = 0;

  std::string qualified() const { return section.empty() ? key : section + "." + key; }
};

struct RunConfig {
  std::optional<Command> command;
  std::uint64_t seed = 1;

  ModelKind model = ModelKind::Sector;
  double alpha = kTwoPi;
  double radius = 0.05;  // sector radius for generate / census
  NormSpec norm{NormKind::L2, 2};
  RadiusLawSpec radius_law{RadiusLawKind::Deterministic, 0.05, 2};

  DensitySpec density;
  MotifPattern pattern = MotifPattern::single_vertex();

  std::optional<RegimeSchedule> regime;
  std::vector<std::size_t> n_list{1000};
  std::size_t seeds = 20;

  std::optional<LimitQuantity> limit_quantity;
  std::uint64_t samples = 200000;
  std::uint64_t inner_samples = 4096;
  double t = 1.0;
  double lambda = 1.0;
  int power = 2;

  std::uint64_t trials = 10000;

  CheckSpec check{0.0, 3.0};

  std::string input_path;
  std::string output_path;
  std::optional<ReportFormat> format;

  std::vector<ConfigEntry> entries;

  /// Echo of every entry ("section.key" -> raw value) plus the effective seed.
  std::vector<std::pair<std::string, std::string>> echo() const;

  ExperimentSpec experiment(unsigned threads) const;
};

/// Parses and validates; throws ConfigError listing every problem found.
RunConfig parse_config(std::string_view text);

/// Real literal with optional pi factor: 1.5, pi, 2pi, 2*pi, pi/3, 2*pi/3.
std::optional<double> parse_real(std::string_view s);

}  // namespace rgd
