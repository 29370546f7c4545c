#pragma once

// Plain-text matrix format:
//
//   rows cols
//   re+imi re-imi ...
//
// Entries are row-major, whitespace separated. Numbers use the shortest
// representation that round-trips, so write -> read is bit-identical for
// every finite double (signed zeros included).

#include <filesystem>
#include <string>
#include <string_view>

#include "drazinlab/linalg.hpp"

namespace drazin {

std::string format_complex(Complex z);
Complex parse_complex(std::string_view token);

std::string format_matrix(const CMatrix& m);
CMatrix parse_matrix(std::string_view text);

CMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const CMatrix& m);

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

} // namespace drazin
