#include "rgd/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "rgd/format.hpp"

namespace rgd {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_plain_real(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

template <typename Int>
std::optional<Int> parse_integer(std::string_view s) {
  s = trim(s);
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

struct Parser {
  RunConfig cfg;
  std::vector<ConfigIssue> issues;
  std::map<std::string, int> lines;  // qualified key -> line

  std::string regime_kind;
  std::optional<double> regime_lambda, regime_beta;
  RadiusLawKind regime_family = RadiusLawKind::Deterministic;
  bool density_dimension_set = false;

  void issue(const std::string& key, int line, std::string reason) {
    issues.push_back({key, line, std::move(reason)});
  }
  int line_of(const std::string& key) const {
    const auto it = lines.find(key);
    return it == lines.end() ? 0 : it->second;
  }

  bool real(const ConfigEntry& e, double& out) {
    if (auto v = parse_real(e.value)) {
      out = *v;
      return true;
    }
    issue(e.qualified(), e.line, "expected a real number, got '" + e.value + "'");
    return false;
  }
  template <typename Int>
  bool integer(const ConfigEntry& e, Int& out) {
    if (auto v = parse_integer<Int>(e.value)) {
      out = *v;
      return true;
    }
    issue(e.qualified(), e.line, "expected a non-negative integer, got '" + e.value + "'");
    return false;
  }
  template <typename Fn>
  void guarded(const ConfigEntry& e, Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& ex) {
      issue(e.qualified(), e.line, ex.what());
    }
  }

  using Handler = std::function<void(const ConfigEntry&)>;
  std::map<std::string, std::map<std::string, Handler>> schema() {
    std::map<std::string, std::map<std::string, Handler>> s;
    s[""]["command"] = [this](const ConfigEntry& e) {
      cfg.command = parse_command(e.value);
      if (!cfg.command)
        issue(e.qualified(), e.line, "unknown command '" + e.value +
                                         "' (generate|census|limit|converge|probe)");
    };
    s[""]["seed"] = [this](const ConfigEntry& e) { integer(e, cfg.seed); };

    s["model"]["kind"] = [this](const ConfigEntry& e) {
      guarded(e, [&] { cfg.model = parse_model_kind(e.value); });
    };
    s["model"]["alpha"] = [this](const ConfigEntry& e) {
      if (real(e, cfg.alpha) && !(cfg.alpha > 0.0 && cfg.alpha <= kTwoPi))
        issue(e.qualified(), e.line,
              "alpha = " + format_double(cfg.alpha) + " is outside the admissible range (0, 2*pi] = (0, " +
                  format_double(kTwoPi) + "]");
    };
    s["model"]["radius"] = [this](const ConfigEntry& e) {
      if (real(e, cfg.radius) && !(cfg.radius > 0.0))
        issue(e.qualified(), e.line, "radius must be positive");
    };
    s["model"]["norm"] = [this](const ConfigEntry& e) {
      guarded(e, [&] { cfg.norm.kind = parse_norm_kind(e.value); });
    };
    s["model"]["radius_law"] = [this](const ConfigEntry& e) {
      guarded(e, [&] { cfg.radius_law.kind = parse_radius_law_kind(e.value); });
    };
    s["model"]["radius_scale"] = [this](const ConfigEntry& e) {
      if (real(e, cfg.radius_law.scale) && !(cfg.radius_law.scale > 0.0))
        issue(e.qualified(), e.line, "radius_scale must be positive");
    };

    s["density"]["kind"] = [this](const ConfigEntry& e) {
      guarded(e, [&] { cfg.density.kind = parse_density_kind(e.value); });
    };
    s["density"]["dimension"] = [this](const ConfigEntry& e) {
      if (integer(e, cfg.density.dimension)) {
        density_dimension_set = true;
        if (cfg.density.dimension < 1 || cfg.density.dimension > 3)
          issue(e.qualified(), e.line, "dimension must lie in [1, 3]");
      }
    };
    s["density"]["scale"] = [this](const ConfigEntry& e) {
      if (real(e, cfg.density.scale) && !(cfg.density.scale > 0.0))
        issue(e.qualified(), e.line, "scale must be positive");
    };

    s["pattern"]["literal"] = [this](const ConfigEntry& e) {
      guarded(e, [&] { cfg.pattern = MotifPattern::parse(e.value); });
    };

    s["regime"]["kind"] = [this](const ConfigEntry& e) {
      regime_kind = e.value;
      guarded(e, [&] { parse_regime(e.value); });
    };
    s["regime"]["lambda"] = [this](const ConfigEntry& e) {
      double v;
      if (real(e, v)) regime_lambda = v;
    };
    s["regime"]["beta"] = [this](const ConfigEntry& e) {
      double v;
      if (real(e, v)) regime_beta = v;
    };
    s["regime"]["radius_family"] = [this](const ConfigEntry& e) {
      guarded(e, [&] { regime_family = parse_radius_law_kind(e.value); });
    };

    s["sweep"]["n"] = [this](const ConfigEntry& e) {
      cfg.n_list.clear();
      std::string_view rest = e.value;
      while (true) {
        const auto comma = rest.find(',');
        const auto item = rest.substr(0, comma);
        auto v = parse_integer<std::size_t>(item);
        if (!v || *v < 1) {
          issue(e.qualified(), e.line, "expected a comma-separated list of positive integers");
          return;
        }
        cfg.n_list.push_back(*v);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
    };
    s["sweep"]["seeds"] = [this](const ConfigEntry& e) {
      if (integer(e, cfg.seeds) && cfg.seeds < 1) issue(e.qualified(), e.line, "seeds must be >= 1");
    };

    s["limit"]["quantity"] = [this](const ConfigEntry& e) {
      static const std::map<std::string, LimitQuantity, std::less<>> names{
          {"thermodynamic", LimitQuantity::Thermodynamic},
          {"phi", LimitQuantity::Phi},
          {"isolated-vertex", LimitQuantity::IsolatedVertex},
          {"mu", LimitQuantity::Mu},
          {"mu-closed", LimitQuantity::MuClosed},
          {"density-power", LimitQuantity::DensityPower}};
      const auto it = names.find(e.value);
      if (it == names.end())
        issue(e.qualified(), e.line,
              "unknown quantity '" + e.value +
                  "' (thermodynamic|phi|isolated-vertex|mu|mu-closed|density-power)");
      else
        cfg.limit_quantity = it->second;
    };
    s["limit"]["samples"] = [this](const ConfigEntry& e) {
      if (integer(e, cfg.samples) && cfg.samples < 1) issue(e.qualified(), e.line, "samples must be >= 1");
    };
    s["limit"]["inner_samples"] = [this](const ConfigEntry& e) {
      if (integer(e, cfg.inner_samples) && cfg.inner_samples < 1)
        issue(e.qualified(), e.line, "inner_samples must be >= 1");
    };
    s["limit"]["t"] = [this](const ConfigEntry& e) {
      if (real(e, cfg.t) && !(cfg.t >= 0.0)) issue(e.qualified(), e.line, "t must be >= 0");
    };
    s["limit"]["lambda"] = [this](const ConfigEntry& e) {
      if (real(e, cfg.lambda) && !(cfg.lambda >= 0.0)) issue(e.qualified(), e.line, "lambda must be >= 0");
    };
    s["limit"]["power"] = [this](const ConfigEntry& e) {
      if (integer(e, cfg.power) && cfg.power < 1) issue(e.qualified(), e.line, "power must be >= 1");
    };

    s["probe"]["trials"] = [this](const ConfigEntry& e) {
      if (integer(e, cfg.trials) && cfg.trials < 1) issue(e.qualified(), e.line, "trials must be >= 1");
    };

    s["check"]["rel_tol"] = [this](const ConfigEntry& e) { real(e, cfg.check.rel_tol); };
    s["check"]["se_multiplier"] = [this](const ConfigEntry& e) { real(e, cfg.check.se_multiplier); };

    s["input"]["digraph"] = [this](const ConfigEntry& e) { cfg.input_path = e.value; };
    s["output"]["path"] = [this](const ConfigEntry& e) { cfg.output_path = e.value; };
    s["output"]["format"] = [this](const ConfigEntry& e) {
      guarded(e, [&] { cfg.format = parse_report_format(e.value); });
    };
    return s;
  }

  void finish() {
    const int d = cfg.density.dimension;
    cfg.norm.dimension = d;
    cfg.radius_law.dimension = d;
    if (cfg.model == ModelKind::Sector && d != 2)
      issue("density.dimension", line_of("density.dimension"),
            "the sector model requires dimension 2");

    if (!regime_kind.empty()) {
      try {
        RegimeSchedule s;
        s.regime = parse_regime(regime_kind);
        if (regime_lambda) s.lambda = *regime_lambda;
        if (regime_beta) s.beta = *regime_beta;
        s.radius_family = regime_family;
        s.dimension = d;
        const int k = cfg.pattern.order();
        try {
          s.validate(k);
        } catch (const RegimeError& ex) {
          const bool sparse =
              s.regime == Regime::SparseIsolatedT3 || s.regime == Regime::SparseInducedT4;
          const std::string key = sparse ? "regime.beta" : "regime.lambda";
          issue(key, line_of(key) ? line_of(key) : line_of("regime.kind"), ex.what());
        }
        if (s.regime == Regime::SparseInducedT4 && !cfg.density.has_bounded_support())
          issue("density.kind", line_of("density.kind"),
                "sparse-induced-T4 requires a density with bounded support (got " +
                    std::string(to_string(cfg.density.kind)) + ")");
        cfg.regime = s;
      } catch (const std::invalid_argument&) {
        // already reported for regime.kind
      }
    }

    if (cfg.command == Command::Converge) {
      if (!cfg.regime) {
        issue("regime.kind", 0, "converge requires a [regime] section");
      } else if (issues.empty()) {
        try {
          validate_experiment(cfg.experiment(1));
        } catch (const std::exception& ex) {
          issue("regime.kind", line_of("regime.kind"), ex.what());
        }
      }
    }
    if (cfg.command == Command::Limit && !cfg.limit_quantity)
      issue("limit.quantity", 0, "limit requires [limit] quantity");
  }
};

}  // namespace

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::Generate:
      return "generate";
    case Command::Census:
      return "census";
    case Command::Limit:
      return "limit";
    case Command::Converge:
      return "converge";
    case Command::Probe:
      return "probe";
  }
  return "?";
}

std::optional<Command> parse_command(std::string_view s) noexcept {
  for (auto c : {Command::Generate, Command::Census, Command::Limit, Command::Converge,
                 Command::Probe})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

std::string_view to_string(LimitQuantity q) noexcept {
  switch (q) {
    case LimitQuantity::Thermodynamic:
      return "thermodynamic";
    case LimitQuantity::Phi:
      return "phi";
    case LimitQuantity::IsolatedVertex:
      return "isolated-vertex";
    case LimitQuantity::Mu:
      return "mu";
    case LimitQuantity::MuClosed:
      return "mu-closed";
    case LimitQuantity::DensityPower:
      return "density-power";
  }
  return "?";
}

namespace {
std::string describe_issues(const std::vector<ConfigIssue>& issues) {
  std::ostringstream os;
  os << "invalid configuration:";
  for (const auto& i : issues) {
    os << "\n  ";
    if (i.line > 0) os << "line " << i.line << ": ";
    os << i.key << ": " << i.reason;
  }
  return os.str();
}
}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(describe_issues(issues)), issues_(std::move(issues)) {}

std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  const auto pi_at = s.find("pi");
  if (pi_at == std::string_view::npos) return parse_plain_real(s);
  std::string_view prefix = trim(s.substr(0, pi_at));
  std::string_view suffix = trim(s.substr(pi_at + 2));
  double factor = 1.0;
  if (!prefix.empty()) {
    if (prefix.back() == '*') prefix = trim(prefix.substr(0, prefix.size() - 1));
    if (prefix == "-") {
      factor = -1.0;
    } else {
      auto v = parse_plain_real(prefix);
      if (!v) return std::nullopt;
      factor = *v;
    }
  }
  double divisor = 1.0;
  if (!suffix.empty()) {
    if (suffix.front() != '/') return std::nullopt;
    auto v = parse_plain_real(suffix.substr(1));
    if (!v || *v == 0.0) return std::nullopt;
    divisor = *v;
  }
  return factor * std::numbers::pi / divisor;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  bool seed_written = false;
  for (const auto& e : entries) {
    if (e.section.empty() && e.key == "seed") {
      out.emplace_back("seed", std::to_string(seed));
      seed_written = true;
    } else {
      out.emplace_back(e.qualified(), e.value);
    }
  }
  if (!seed_written) out.emplace_back("seed", std::to_string(seed));
  return out;
}

ExperimentSpec RunConfig::experiment(unsigned threads) const {
  ExperimentSpec spec;
  if (regime) spec.schedule = *regime;
  spec.pattern = pattern;
  spec.model.kind = model;
  spec.model.alpha = alpha;
  spec.model.norm = norm;
  spec.density = density;
  spec.n_list = n_list;
  spec.seeds_per_n = seeds;
  spec.master_seed = seed;
  spec.limit_samples = samples;
  spec.inner_samples = inner_samples;
  spec.threads = threads;
  spec.check = check;
  return spec;
}

RunConfig parse_config(std::string_view text) {
  Parser p;
  const auto schema = p.schema();
  std::string section;
  std::set<std::string> seen;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        p.issue(std::string(line), line_no, "malformed section header");
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!schema.count(section) || section.empty())
        p.issue("[" + section + "]", line_no, "unknown section");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      p.issue(std::string(line), line_no, "expected key = value");
      continue;
    }
    ConfigEntry e{section, std::string(trim(line.substr(0, eq))),
                  std::string(trim(line.substr(eq + 1))), line_no};
    const auto sec = schema.find(section);
    if (sec == schema.end()) continue;  // unknown section already reported
    const auto handler = sec->second.find(e.key);
    if (handler == sec->second.end()) {
      p.issue(e.qualified(), line_no, "unknown key");
      continue;
    }
    if (!seen.insert(e.qualified()).second) {
      p.issue(e.qualified(), line_no, "duplicate key");
      continue;
    }
    p.lines[e.qualified()] = line_no;
    handler->second(e);
    p.cfg.entries.push_back(std::move(e));
  }
  p.finish();
  if (!p.issues.empty()) throw ConfigError(std::move(p.issues));
  return std::move(p.cfg);
}

}  // namespace rgd
