#include "rgd/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "rgd/config.hpp"
#include "rgd/format.hpp"

namespace rgd {

namespace {

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  unsigned threads = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GeoDigraph generate_digraph(const RunConfig& cfg, unsigned threads) {
  const std::size_t n = cfg.n_list.front();
  const PointSet points = sample_points(cfg.density, n, cfg.seed);
  if (cfg.model == ModelKind::Sector) {
    const auto orient = sample_orientations(n, cfg.seed);
    return build_sector_digraph(points, orient, SectorConfig{cfg.alpha, cfg.radius}, threads);
  }
  const auto radii = sample_radii(cfg.radius_law, n, cfg.seed);
  return build_radius_digraph(points, radii, cfg.norm, threads);
}

Json echo_json(const RunConfig& cfg) {
  Json j = Json::object();
  for (const auto& [k, v] : cfg.echo()) j[k] = v;
  return j;
}

MonteCarloOptions mc_options(const RunConfig& cfg, unsigned threads) {
  MonteCarloOptions o;
  o.samples = cfg.samples;
  o.inner_samples = cfg.inner_samples;
  o.seed = cfg.seed;
  o.threads = threads;
  return o;
}

LimitEstimate evaluate_limit(const RunConfig& cfg, unsigned threads) {
  const auto opts = mc_options(cfg, threads);
  switch (*cfg.limit_quantity) {
    case LimitQuantity::Thermodynamic:
      return thermodynamic_limit(cfg.pattern, cfg.alpha, cfg.lambda, cfg.density, opts);
    case LimitQuantity::Phi:
      return estimate_phi(cfg.pattern, cfg.alpha, cfg.t, opts);
    case LimitQuantity::IsolatedVertex:
      return isolated_vertex_limit(cfg.density, cfg.norm, cfg.lambda, cfg.samples, cfg.seed,
                                   threads);
    case LimitQuantity::Mu:
      return estimate_mu(cfg.pattern, cfg.alpha, cfg.density, opts);
    case LimitQuantity::MuClosed:
      return closed_form_mu_k2(cfg.pattern, cfg.alpha, cfg.density);
    case LimitQuantity::DensityPower:
      return density_power_integral(cfg.density, cfg.power, cfg.samples, cfg.seed, threads);
  }
  throw std::logic_error("unhandled limit quantity");
}

std::string render_limit(const RunConfig& cfg, const LimitEstimate& e, ReportFormat format) {
  const std::string quantity(to_string(*cfg.limit_quantity));
  if (format == ReportFormat::Csv) {
    return "quantity,value,std_error,samples,method\n" + quantity + ',' +
           format_double(e.value) + ',' + format_double(e.std_error) + ',' +
           std::to_string(e.samples) + ',' + std::string(to_string(e.method)) + '\n';
  }
  Json j;
  j["config"] = echo_json(cfg);
  j["quantity"] = quantity;
  j["pattern"] = cfg.pattern.to_literal();
  const Json body = to_json(e);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j.dump(2) + '\n';
}

std::string render_census(const RunConfig& cfg, const CensusResult& r, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    return "pattern,n,induced,isolated\n\"" + r.pattern + "\"," + std::to_string(r.n) + ',' +
           std::to_string(r.induced_count) + ',' + std::to_string(r.isolated_count) + '\n';
  }
  Json j;
  j["config"] = echo_json(cfg);
  const Json body = to_json(r);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j.dump(2) + '\n';
}

std::string render_probe(const RunConfig& cfg, const FeasibilityResult& r, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    return "pattern,feasible,hit_rate,hits,trials\n\"" + cfg.pattern.to_literal() + "\"," +
           (r.feasible ? "true" : "false") + ',' + format_double(r.hit_rate) + ',' +
           std::to_string(r.hits) + ',' + std::to_string(r.trials) + '\n';
  }
  Json j;
  j["config"] = echo_json(cfg);
  j["pattern"] = cfg.pattern.to_literal();
  const Json body = to_json(r);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j.dump(2) + '\n';
}

int run(Command command, RunConfig& cfg, unsigned threads) {
  const ReportFormat format = cfg.format.value_or(ReportFormat::Json);
  switch (command) {
    case Command::Generate: {
      std::ostringstream os;
      write_digraph(os, generate_digraph(cfg, threads));
      write_text(os.str(), cfg.output_path);
      break;
    }
    case Command::Census: {
      GeoDigraph g = [&] {
        if (cfg.input_path.empty()) return generate_digraph(cfg, threads);
        std::ifstream in(cfg.input_path);
        if (!in) throw std::runtime_error("cannot read '" + cfg.input_path + "'");
        return read_digraph(in);
      }();
      write_text(render_census(cfg, census(g, cfg.pattern, threads), format), cfg.output_path);
      break;
    }
    case Command::Limit:
      write_text(render_limit(cfg, evaluate_limit(cfg, threads), format), cfg.output_path);
      break;
    case Command::Converge: {
      ExperimentReport report = run_convergence(cfg.experiment(threads));
      auto resolved = std::move(report.config);
      report.config = cfg.echo();
      for (auto& [k, v] : resolved) report.config.emplace_back("resolved." + k, std::move(v));
      emit_report(report, format, cfg.output_path);
      break;
    }
    case Command::Probe: {
      ProbeModel model = cfg.model == ModelKind::Sector
                             ? ProbeModel{SectorProbe{cfg.alpha}}
                             : ProbeModel{RadiusProbe{cfg.norm, cfg.radius_law}};
      const auto r = feasibility_probe(cfg.pattern, model, cfg.trials, cfg.seed, threads);
      write_text(render_probe(cfg, r, format), cfg.output_path);
      break;
    }
  }
  return kExitOk;
}

}  // namespace

int cli_main(std::span<const std::string> args) {
  CLI::App app{"Random geometric digraph simulator: motif censuses and their limits", "rgd"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Flags flags;
  app.add_option("--config", flags.config_path, "Run configuration file");
  app.add_option("--seed", flags.seed, "Master seed (overrides the config)");
  app.add_option("--out", flags.out, "Output path (default: stdout)");
  app.add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", flags.threads, "Worker threads (default: hardware concurrency)");

  const std::pair<Command, const char*> subcommands[] = {
      {Command::Generate, "Sample points and write the digraph"},
      {Command::Census, "Count induced and isolated copies of the pattern"},
      {Command::Limit, "Evaluate a limiting constant"},
      {Command::Converge, "Run a convergence sweep against the regime limit"},
      {Command::Probe, "Estimate whether the pattern is realizable"}};
  for (const auto& [c, help] : subcommands) app.add_subcommand(std::string(to_string(c)), help);

  std::vector<const char*> argv{"rgd"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfigError;
  }

  const Command command = *parse_command(app.get_subcommands().front()->get_name());
  if (flags.config_path.empty()) {
    std::cerr << "error: --config is required\n\n" << app.help();
    return kExitConfigError;
  }

  RunConfig cfg;
  try {
    cfg = parse_config(read_file(flags.config_path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  if (cfg.command && *cfg.command != command) {
    std::cerr << "error: config declares command '" << to_string(*cfg.command)
              << "' but '" << to_string(command) << "' was requested\n";
    return kExitConfigError;
  }
  if (command == Command::Limit && !cfg.limit_quantity) {
    std::cerr << "error: limit.quantity: required by the limit command\n";
    return kExitConfigError;
  }
  if (command == Command::Converge && !cfg.regime) {
    std::cerr << "error: regime.kind: required by the converge command\n";
    return kExitConfigError;
  }
  if (flags.seed) cfg.seed = *flags.seed;
  if (!flags.out.empty()) cfg.output_path = flags.out;
  if (!flags.format.empty()) cfg.format = parse_report_format(flags.format);

  unsigned threads = flags.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  try {
    return run(command, cfg, threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

}  // namespace rgd
