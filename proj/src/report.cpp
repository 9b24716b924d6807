#include "rgd/report.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "rgd/format.hpp"

namespace rgd {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> optional_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

ReportFormat parse_report_format(std::string_view s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  throw std::invalid_argument("unknown output format '" + std::string(s) + "' (csv|json)");
}

void write_csv(std::ostream& os, const ExperimentReport& report) {
  os << kCsvHeader << '\n';
  const std::string regime(to_string(report.regime));
  const std::string limit = format_double(report.limit.value);
  const std::string limit_se = format_double(report.limit.std_error);
  for (const auto& r : report.rows) {
    os << regime << ',' << r.n << ',' << format_double(r.r_n) << ',' << r.seed << ','
       << r.induced << ',' << r.isolated << ',' << format_double(r.normalized) << ',' << limit
       << ',' << limit_se << '\n';
  }
}

Json to_json(const LimitEstimate& e) {
  Json j;
  j["value"] = e.value;
  j["std_error"] = e.std_error;
  j["samples"] = e.samples;
  j["method"] = std::string(to_string(e.method));
  j["seed"] = e.seed;
  j["inner_std_error"] = e.inner_std_error;
  if (!e.warning.empty()) j["warning"] = e.warning;
  return j;
}

LimitEstimate limit_from_json(const Json& j) {
  LimitEstimate e;
  e.value = j.at("value").get<double>();
  e.std_error = j.at("std_error").get<double>();
  e.samples = j.at("samples").get<std::uint64_t>();
  e.method = j.at("method").get<std::string>() == "closed-form" ? EstimateMethod::ClosedForm
                                                                : EstimateMethod::MonteCarlo;
  e.seed = j.at("seed").get<std::uint64_t>();
  e.inner_std_error = j.value("inner_std_error", 0.0);
  e.warning = j.value("warning", std::string{});
  return e;
}

Json to_json(const ExperimentReport& report) {
  Json j;
  Json config = Json::object();
  for (const auto& [k, v] : report.config) config[k] = v;
  j["config"] = config;
  j["regime"] = std::string(to_string(report.regime));
  j["pattern"] = report.pattern;
  j["k"] = report.k;
  j["limit"] = to_json(report.limit);

  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json row;
    row["n"] = r.n;
    row["r_n"] = r.r_n;
    row["seed_index"] = r.seed_index;
    row["seed"] = r.seed;
    row["induced"] = r.induced;
    row["isolated"] = r.isolated;
    row["normalized"] = r.normalized;
    row["interior_normalized"] = optional_number(r.interior_normalized);
    rows.push_back(row);
  }
  j["rows"] = rows;

  Json aggs = Json::array();
  for (const auto& a : report.aggregates) {
    Json row;
    row["n"] = a.n;
    row["r_n"] = a.r_n;
    row["seeds"] = a.seeds;
    row["mean"] = a.mean;
    row["std_dev"] = a.std_dev;
    row["std_error"] = a.std_error;
    row["rel_error"] = a.rel_error;
    row["combined_se"] = a.combined_se;
    row["mean_induced"] = a.mean_induced;
    row["mean_isolated"] = a.mean_isolated;
    row["isolation_gap"] = a.isolation_gap;
    row["interior_mean"] = optional_number(a.interior_mean);
    aggs.push_back(row);
  }
  j["aggregates"] = aggs;

  if (report.diagnostics) {
    Json d;
    Json rows_d = Json::array();
    for (const auto& c : report.diagnostics->rows) {
      rows_d.push_back({{"n", c.n},
                        {"std_over_mean", c.std_over_mean},
                        {"max_abs_deviation", c.max_abs_deviation},
                        {"deviation_ratio", c.deviation_ratio}});
    }
    d["per_n"] = rows_d;
    d["trend_checked"] = report.diagnostics->trend_checked;
    d["flagged"] = report.diagnostics->flagged;
    j["diagnostics"] = d;
  } else {
    j["diagnostics"] = nullptr;
  }

  Json checks = Json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = checks;
  return j;
}

ExperimentReport report_from_json(const Json& j) {
  ExperimentReport r;
  for (const auto& [k, v] : j.at("config").items()) r.config.emplace_back(k, v.get<std::string>());
  r.regime = parse_regime(j.at("regime").get<std::string>());
  r.pattern = j.at("pattern").get<std::string>();
  r.k = j.at("k").get<int>();
  r.limit = limit_from_json(j.at("limit"));
  for (const auto& row : j.at("rows")) {
    ExperimentRow e;
    e.n = row.at("n").get<std::size_t>();
    e.r_n = row.at("r_n").get<double>();
    e.seed_index = row.at("seed_index").get<std::size_t>();
    e.seed = row.at("seed").get<std::uint64_t>();
    e.induced = row.at("induced").get<std::uint64_t>();
    e.isolated = row.at("isolated").get<std::uint64_t>();
    e.normalized = row.at("normalized").get<double>();
    e.interior_normalized = optional_from(row.at("interior_normalized"));
    r.rows.push_back(e);
  }
  for (const auto& row : j.at("aggregates")) {
    NAggregate a;
    a.n = row.at("n").get<std::size_t>();
    a.r_n = row.at("r_n").get<double>();
    a.seeds = row.at("seeds").get<std::size_t>();
    a.mean = row.at("mean").get<double>();
    a.std_dev = row.at("std_dev").get<double>();
    a.std_error = row.at("std_error").get<double>();
    a.rel_error = row.at("rel_error").get<double>();
    a.combined_se = row.at("combined_se").get<double>();
    a.mean_induced = row.at("mean_induced").get<double>();
    a.mean_isolated = row.at("mean_isolated").get<double>();
    a.isolation_gap = row.at("isolation_gap").get<double>();
    a.interior_mean = optional_from(row.at("interior_mean"));
    r.aggregates.push_back(a);
  }
  if (!j.at("diagnostics").is_null()) {
    ConcentrationSummary d;
    for (const auto& c : j.at("diagnostics").at("per_n")) {
      d.rows.push_back({c.at("n").get<std::size_t>(), c.at("std_over_mean").get<double>(),
                        c.at("max_abs_deviation").get<double>(),
                        c.at("deviation_ratio").get<double>()});
    }
    d.trend_checked = j.at("diagnostics").at("trend_checked").get<bool>();
    d.flagged = j.at("diagnostics").at("flagged").get<bool>();
    r.diagnostics = d;
  }
  for (const auto& c : j.at("checks"))
    r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(),
                        c.at("detail").get<std::string>()});
  return r;
}

Json to_json(const CensusResult& r) {
  Json j;
  j["pattern"] = r.pattern;
  j["n"] = r.n;
  j["induced"] = r.induced_count;
  j["isolated"] = r.isolated_count;
  return j;
}

Json to_json(const FeasibilityResult& r) {
  Json j;
  j["feasible"] = r.feasible;
  j["hit_rate"] = r.hit_rate;
  j["hits"] = r.hits;
  j["trials"] = r.trials;
  return j;
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void emit_report(const ExperimentReport& report, ReportFormat format, const std::string& path) {
  std::ostringstream os;
  if (format == ReportFormat::Csv)
    write_csv(os, report);
  else
    os << to_json(report).dump(2) << '\n';
  write_text(os.str(), path);
}

}  // namespace rgd
