#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opkernel/scenario.hpp"

namespace opkernel {

std::string tool_version();

struct SeriesPoint {
  Real x = 0.0;
  Real y = 0.0;
  bool operator==(const SeriesPoint&) const = default;
};

struct RunReport {
  std::string name;
  std::string kind;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> parameters;
  /// Named constants (c1, c2, a, mu, ...), in name order.
  std::map<std::string, Real> constants;
  std::optional<Real> bound;
  std::optional<Real> lower;
  std::optional<Real> ratio;
  std::vector<SeriesPoint> series;
  bool pass = false;
  std::string error;
  Real seconds = 0.0;
  std::string version;

  bool operator==(const RunReport&) const = default;
};

RunReport run_scenario(const Scenario& scenario);

/// Runs on up to `parallelism` threads; reports come back in input order.
std::vector<RunReport> run_scenarios(const std::vector<Scenario>& scenarios, int parallelism = 1);

enum class ReportFormat { JsonLines, Csv, PlotData };
ReportFormat parse_format(const std::string& name);

/// Timing is left out unless `include_timing` so that output is reproducible.
std::string emit_report(const std::vector<RunReport>& reports, ReportFormat format,
                        bool include_timing = false);

/// Inverse of one json-lines record.
RunReport report_from_json(const std::string& line);

}  // namespace opkernel
