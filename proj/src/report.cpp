#include "drazinlab/report.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "drazinlab/errors.hpp"
#include "drazinlab/matrix_io.hpp"

namespace drazin {

using nlohmann::json;

ReportFormat parse_format(const std::string& name) {
  if (name == "json") {
    return ReportFormat::json;
  }
  if (name == "text") {
    return ReportFormat::text;
  }
  throw InputError("unknown report format \"" + name + "\" (expected json or text)");
}

void RunConfig::validate() const {
  if (tol && !(*tol > 0.0 && std::isfinite(*tol))) {
    throw InputError("tol must be a positive finite number");
  }
  if (window < 8) {
    throw InputError("window must be at least 8, got " + std::to_string(window));
  }
  if (corpus_size < 1) {
    throw InputError("corpus size must be at least 1, got " + std::to_string(corpus_size));
  }
}

RankTol resolve_tol(RankTol explicit_tol) {
  if (explicit_tol) {
    return explicit_tol;
  }
  const char* env = std::getenv(kTolEnvVar);
  if (env == nullptr || *env == '\0') {
    return std::nullopt;
  }
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(env, &end);
  if (errno != 0 || end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
    throw InputError(std::string(kTolEnvVar) + " is not a positive number: \"" + env + "\"");
  }
  return v;
}

int SuiteReport::passed_count() const {
  int n = 0;
  for (const auto& r : records) {
    n += r.passed ? 1 : 0;
  }
  return n;
}

int SuiteReport::failed_count() const {
  return static_cast<int>(records.size()) - passed_count();
}

json SuiteReport::to_json(bool with_timing) const {
  json recs = json::array();
  for (const auto& r : records) {
    json rec = {{"id", r.id},
                {"anchor", r.anchor},
                {"status", r.passed ? "pass" : "fail"},
                {"cases", r.cases},
                {"residuals", r.residuals}};
    if (!r.detail.empty()) {
      rec["detail"] = r.detail;
    }
    if (!r.data.is_null()) {
      rec["data"] = r.data;
    }
    if (with_timing) {
      rec["elapsed_ms"] = r.elapsed_ms;
    }
    recs.push_back(std::move(rec));
  }
  return {{"schema", kReportSchema},
          {"suite", suite},
          {"seed", config.seed},
          {"config",
           {{"tol", config.tol ? json(*config.tol) : json(nullptr)},
            {"window", config.window},
            {"corpus_size", config.corpus_size}}},
          {"records", recs},
          {"summary",
           {{"total", records.size()}, {"passed", passed_count()}, {"failed", failed_count()}}}};
}

std::string SuiteReport::to_text() const {
  std::ostringstream os;
  os << "suite " << suite << "  seed " << config.seed << "\n";
  char buf[64];
  for (const auto& r : records) {
    os << (r.passed ? "PASS " : "FAIL ") << r.id << "  cases=" << r.cases;
    for (const auto& [name, value] : r.residuals) {
      std::snprintf(buf, sizeof buf, "%.3e", value);
      os << "  " << name << "=" << buf;
    }
    os << "  [" << r.anchor << "]";
    if (!r.detail.empty()) {
      os << "\n     " << r.detail;
    }
    os << "\n";
  }
  os << "total " << records.size() << "  passed " << passed_count() << "  failed "
     << failed_count() << "\n";
  return os.str();
}

std::string SuiteReport::render(ReportFormat format) const {
  return format == ReportFormat::json ? to_json().dump(2) + "\n" : to_text();
}

SuiteReport merge_reports(const std::string& name, const std::vector<SuiteReport>& parts) {
  SuiteReport out;
  out.suite = name;
  if (!parts.empty()) {
    out.config = parts.front().config;
  }
  for (const auto& p : parts) {
    out.records.insert(out.records.end(), p.records.begin(), p.records.end());
  }
  return out;
}

void write_report(const SuiteReport& report, const std::filesystem::path& path,
                  ReportFormat format) {
  write_file_atomic(path, report.render(format));
}

json strip_timing(json report) {
  if (report.is_object()) {
    report.erase("elapsed_ms");
    for (auto& [key, value] : report.items()) {
      value = strip_timing(value);
    }
  } else if (report.is_array()) {
    for (auto& value : report) {
      value = strip_timing(value);
    }
  }
  return report;
}

json chain_to_json(const ChainReport& chain) {
  return {{"n", chain.n},         {"nullity", chain.nullity}, {"rank", chain.rank},
          {"meet", chain.meet},   {"join", chain.join},       {"asc", chain.asc},
          {"dsc", chain.dsc},     {"dis", chain.dis}};
}

json perturb_to_json(const PerturbReport& r) {
  return {{"n", r.n},
          {"expansion_residual", r.expansion_residual},
          {"rank_f", r.rank_f},
          {"rank_f1", r.rank_f1},
          {"index_before", r.index_before},
          {"index_after", r.index_after},
          {"essential_dim_gap", r.essential_dim_gap},
          {"correction_dim", r.correction.dim()},
          {"correction_covers", r.correction_covers}};
}

} // namespace drazin
