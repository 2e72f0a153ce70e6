#pragma once

#include <optional>
#include <string>
#include <vector>

#include "demorgan/bdp.hpp"
#include "demorgan/classifier.hpp"
#include "json.hpp"

namespace demorgan::report {

using Json = nlohmann::ordered_json;

struct ReportOptions {
  std::optional<std::string> traces_path;
  const EscalationPath* escalation = nullptr;
  /// ISO-8601 timestamp to embed; leave empty for byte-stable output.
  std::optional<std::string> generated_at;
};

Json tail_json(const TailCertificate& tail);
Json verdict_json(const Verdict& v, const ReportOptions& options = {});
Json simulation_json(const SimulationEstimate& sim, bool dispositive);
/// The standard verdict report for the series with a "bdp" block appended.
Json bdp_json(const BdpVerdict& v, const ReportOptions& options = {});

/// CSV with header n,K,s. Each trace is thinned to at most max_rows_per_level
/// rows by a fixed stride; the last index of each trace is always kept.
std::string trace_csv(const std::vector<SLevelTrace>& traces, std::size_t max_rows_per_level = 20000);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

/// Human-readable summary of a report produced by verdict_json or bdp_json.
std::string summarize(const Json& report);

}  // namespace demorgan::report
