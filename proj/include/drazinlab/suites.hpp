#pragma once

// Property suites behind `drazin-lab run` and corpus export behind
// `drazin-lab gen`.

#include <filesystem>
#include <string>
#include <vector>

#include "drazinlab/corpus.hpp"
#include "drazinlab/report.hpp"

namespace drazin {

SuiteReport run_drazin_suite(const RunConfig& config);
SuiteReport run_operator_suite(const RunConfig& config);
SuiteReport run_structure_suite(const RunConfig& config);

/// name is drazin, operator, structure or all; anything else is an InputError.
SuiteReport run_suite(const std::string& name, const RunConfig& config);

const std::vector<std::string>& suite_names();

/// Metadata written next to each exported matrix.
nlohmann::json corpus_metadata(const CorpusMatrix& m, std::uint64_t seed, int position);

/// Writes matrix_NNNN.txt and matrix_NNNN.json for config.corpus_size
/// matrices into config.output (created if missing). Returns the paths
/// written, matrix and metadata interleaved.
std::vector<std::filesystem::path> gen_corpus(const RunConfig& config);

} // namespace drazin
