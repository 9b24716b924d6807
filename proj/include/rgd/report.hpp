#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"

#include "rgd/census.hpp"
#include "rgd/harness.hpp"

namespace rgd {

using Json = nlohmann::ordered_json;

enum class ReportFormat { Csv, Json };
ReportFormat parse_report_format(std::string_view s);

inline constexpr std::string_view kCsvHeader =
    "regime,n,r_n,seed,induced,isolated,normalized,limit,limit_se";

/// One header line plus one line per (n, seed) row.
void write_csv(std::ostream& os, const ExperimentReport& report);

Json to_json(const LimitEstimate& e);
LimitEstimate limit_from_json(const Json& j);

/// config echo, limit, rows, per-n aggregates, diagnostics, checks.
Json to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const Json& j);

Json to_json(const CensusResult& r);
Json to_json(const FeasibilityResult& r);

/// Writes to `path`, or to stdout when path is empty or "-". Throws
/// std::runtime_error on I/O failure.
void emit_report(const ExperimentReport& report, ReportFormat format, const std::string& path);

void write_text(const std::string& text, const std::string& path);

}  // namespace rgd
