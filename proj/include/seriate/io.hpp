#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "seriate/errors.hpp"
#include "seriate/matrix.hpp"
#include "seriate/permutation.hpp"

namespace seriate {

/// Shortest decimal form that round-trips a double (17 significant digits).
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Comma-separated values, no header, LF line endings, full-precision floats.
inline std::string matrix_to_csv(const DenseMatrix& m) {
  std::string out;
  out.reserve(m.size() * 20);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(row[j]);
    }
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

inline double parse_field(std::string_view field, std::size_t line, std::size_t column) {
  const std::string buf(field);
  const char* begin = buf.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0')) {
    throw ParseError("cannot parse number '" + buf + "' at line " + std::to_string(line) +
                         ", column " + std::to_string(column),
                     line, column);
  }
  if (!std::isfinite(v)) {
    throw ParseError("non-finite value at line " + std::to_string(line) + ", column " +
                         std::to_string(column),
                     line, column);
  }
  return v;
}

}  // namespace detail

/// Parses a rectangular CSV of finite reals. Lines and columns in errors are
/// 1-based; `skip_header` drops the first line.
inline DenseMatrix matrix_from_csv(std::string_view text, bool skip_header = false) {
  auto lines = detail::split_lines(text);
  std::size_t first = 0;
  if (skip_header) {
    if (lines.empty()) throw ParseError("empty input with header expected", 1, 1);
    first = 1;
  }
  if (first >= lines.size()) throw ParseError("no data rows", 1, 1);

  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  for (std::size_t li = first; li < lines.size(); ++li) {
    const std::string_view line = lines[li];
    std::size_t field_idx = 0;
    std::size_t pos = 0;
    for (;;) {
      std::size_t comma = line.find(',', pos);
      const std::string_view field =
          comma == std::string_view::npos ? line.substr(pos) : line.substr(pos, comma - pos);
      values.push_back(detail::parse_field(field, li + 1, field_idx + 1));
      ++field_idx;
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (rows == 0) {
      cols = field_idx;
    } else if (field_idx != cols) {
      throw ParseError("ragged row at line " + std::to_string(li + 1) + ": expected " +
                           std::to_string(cols) + " fields, got " + std::to_string(field_idx),
                       li + 1, field_idx);
    }
    ++rows;
  }
  DenseMatrix m(rows, cols);
  m.entries() = std::move(values);
  return m;
}

/// One 0-based source index per line.
inline std::string permutation_to_csv(const Permutation& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    out += std::to_string(p(i));
    out += '\n';
  }
  return out;
}

inline Permutation permutation_from_csv(std::string_view text) {
  auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError("empty permutation file", 1, 1);
  std::vector<std::size_t> mapping;
  mapping.reserve(lines.size());
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string buf(lines[li]);
    char* end = nullptr;
    const long long v = std::strtoll(buf.c_str(), &end, 10);
    if (end == buf.c_str() || (end && *end != '\0') || v < 0) {
      throw ParseError("cannot parse permutation index '" + buf + "' at line " +
                           std::to_string(li + 1),
                       li + 1, 1);
    }
    mapping.push_back(static_cast<std::size_t>(v));
  }
  return Permutation::from_mapping(std::move(mapping));
}

/// Plain-ASCII PGM (P2), one pixel per entry, 255 levels. Grayscale is
/// round(255 * (v - min) / (max - min)); a constant matrix renders as all 128.
inline std::string matrix_to_pgm(const DenseMatrix& m) {
  if (!m.all_finite()) throw NonFiniteError("matrix_to_pgm: non-finite entry");
  const auto [lo, hi] = m.min_max();
  const bool constant = !(hi > lo);
  const double range = hi - lo;
  std::string out = "P2\n";
  out += std::to_string(m.cols());
  out += ' ';
  out += std::to_string(m.rows());
  out += "\n255\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const long pixel = constant ? 128 : std::lround(255.0 * (row[j] - lo) / range);
      if (j) out += ' ';
      out += std::to_string(pixel);
    }
    out += '\n';
  }
  return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path.string(), 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed: " + path.string());
}

inline DenseMatrix read_matrix_csv(const std::filesystem::path& path, bool skip_header = false) {
  return matrix_from_csv(read_text_file(path), skip_header);
}

inline void write_matrix_csv(const DenseMatrix& m, const std::filesystem::path& path) {
  write_text_file(path, matrix_to_csv(m));
}

inline Permutation read_permutation_csv(const std::filesystem::path& path) {
  return permutation_from_csv(read_text_file(path));
}

inline void write_permutation_csv(const Permutation& p, const std::filesystem::path& path) {
  write_text_file(path, permutation_to_csv(p));
}

inline void write_pgm(const DenseMatrix& m, const std::filesystem::path& path) {
  write_text_file(path, matrix_to_pgm(m));
}

}  // namespace seriate
