#pragma once

// Run configuration and the versioned suite report.
//
// JSON layout (schema 1):
//   {"schema": 1, "suite": name, "seed": u64,
//    "config": {"tol": x | null, "window": n, "corpus_size": n},
//    "records": [{"id", "anchor", "status": "pass" | "fail", "cases",
//                 "residuals": {name: x}, "detail"?, "data"?, "elapsed_ms"}],
//    "summary": {"total", "passed", "failed"}}
// Everything except elapsed_ms is a function of the configuration.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "drazinlab/linalg.hpp"
#include "drazinlab/structure.hpp"

namespace drazin {

inline constexpr int kReportSchema = 1;
inline constexpr int kDefaultCorpusSize = 20;
inline constexpr const char* kTolEnvVar = "DRAZIN_LAB_TOL";

enum class ReportFormat { json, text };

ReportFormat parse_format(const std::string& name);

struct RunConfig {
  std::uint64_t seed = 1;
  /// Relative rank cutoff; unset means the linalg default.
  RankTol tol;
  int window = 128;
  int corpus_size = kDefaultCorpusSize;
  std::filesystem::path output;
  ReportFormat format = ReportFormat::json;

  /// Throws InputError on tol <= 0, window < 8 or corpus_size < 1.
  void validate() const;
};

/// Explicit value first, then DRAZIN_LAB_TOL, then unset. A malformed
/// environment value is an InputError.
RankTol resolve_tol(RankTol explicit_tol);

struct CheckRecord {
  std::string id;
  std::string anchor;
  bool passed = false;
  int cases = 0;
  std::map<std::string, double> residuals;
  std::string detail;
  nlohmann::json data;
  double elapsed_ms = 0.0;
};

struct SuiteReport {
  std::string suite;
  RunConfig config;
  std::vector<CheckRecord> records;

  int passed_count() const;
  int failed_count() const;
  bool passed() const { return failed_count() == 0; }

  nlohmann::json to_json(bool with_timing = true) const;
  std::string to_text() const;
  std::string render(ReportFormat format) const;
};

/// Concatenates the records of several suites under one name.
SuiteReport merge_reports(const std::string& name, const std::vector<SuiteReport>& parts);

/// Writes the rendered report atomically; IoError on failure.
void write_report(const SuiteReport& report, const std::filesystem::path& path,
                  ReportFormat format);

/// Drops every elapsed_ms field, recursively.
nlohmann::json strip_timing(nlohmann::json report);

nlohmann::json chain_to_json(const ChainReport& chain);
nlohmann::json perturb_to_json(const PerturbReport& report);

} // namespace drazin
