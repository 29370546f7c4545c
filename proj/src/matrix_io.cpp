#include "drazinlab/matrix_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "drazinlab/errors.hpp"

namespace drazin {

namespace {

std::string shortest(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) {
    throw InputError("cannot format floating point value");
  }
  return std::string(buf.data(), end);
}

double parse_real(std::string_view s, std::string_view token) {
  if (s.empty()) {
    throw InputError("malformed complex token '" + std::string(token) + "'");
  }
  // from_chars rejects a leading '+'.
  if (s.front() == '+') {
    s.remove_prefix(1);
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InputError("malformed complex token '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) {
    throw InputError("non-finite entry '" + std::string(token) + "'");
  }
  return value;
}

} // namespace

std::string format_complex(Complex z) {
  const double im = z.imag();
  std::string out = shortest(z.real());
  out += std::signbit(im) ? '-' : '+';
  out += shortest(std::fabs(im));
  out += 'i';
  return out;
}

Complex parse_complex(std::string_view token) {
  if (token.empty()) {
    throw InputError("empty complex token");
  }
  if (token.back() != 'i') {
    return {parse_real(token, token), 0.0};
  }
  const std::string_view body = token.substr(0, token.size() - 1);
  // The imaginary part starts at the last sign that is not leading and not
  // part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    const char c = body[i];
    if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos) {
    // Pure imaginary, e.g. "2i" or "-2i".
    return {0.0, parse_real(body, token)};
  }
  const double re = parse_real(body.substr(0, split), token);
  const bool negative = body[split] == '-';
  const double mag = parse_real(body.substr(split + 1), token);
  return {re, negative ? -mag : mag};
}

std::string format_matrix(const CMatrix& m) {
  require_finite(m, "format_matrix");
  std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c > 0) {
        out += ' ';
      }
      out += format_complex(m(r, c));
    }
    out += '\n';
  }
  return out;
}

CMatrix parse_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  long long rows = 0;
  long long cols = 0;
  if (!(in >> rows >> cols)) {
    throw InputError("matrix header must be 'rows cols'");
  }
  if (rows <= 0 || cols <= 0) {
    throw InputError("matrix dimensions must be positive");
  }
  CMatrix m(rows, cols);
  std::string token;
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      if (!(in >> token)) {
        throw InputError("matrix text ended after " + std::to_string(r * cols + c) + " of " +
                         std::to_string(rows * cols) + " entries");
      }
      m(r, c) = parse_complex(token);
    }
  }
  if (in >> token) {
    throw InputError("trailing data after matrix entries: '" + token + "'");
  }
  return m;
}

CMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_matrix(ss.str());
}

void write_matrix_file(const std::filesystem::path& path, const CMatrix& m) {
  write_file_atomic(path, format_matrix(m));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot write " + tmp.string());
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " to " + path.string());
  }
}

} // namespace drazin
