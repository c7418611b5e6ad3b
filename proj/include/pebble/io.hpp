#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "pebble/simulation.hpp"

namespace pebble {

using Json = nlohmann::ordered_json;

/// Reads a comma-separated file with a header row. Every column other than
/// `response` becomes a covariate, in header order. With `intercept`, a
/// constant column named "_intercept" is prepended.
Dataset load_csv(const std::filesystem::path& path, const std::string& response, bool intercept);
Dataset parse_csv(const std::string& text, const std::string& response, bool intercept);

/// Echo of the settings that produced a report.
struct ReportConfig {
  std::string command;
  std::string data;
  std::string response;
  bool intercept = false;
  double level = 0.9;
  int boot = 0;
  std::uint64_t seed = 0;
  double b_n = 0.0;
  Vector d_var;
  unsigned threads = 1;
};

Json config_json(const ReportConfig& cfg);
Json intervals_json(const IntervalSet& set, const std::vector<std::string>& names);
Json fit_json(const FittedModel& fitted, const Dataset& data);
Json coverage_json(const CoverageReport& report);

/// Serializes with stable key order and 17 significant digits per float.
std::string dump_json(const Json& doc);
/// Writes dump_json(doc) plus a newline; throws IoError on failure.
void emit_report(const Json& doc, const std::filesystem::path& path);

}  // namespace pebble
