#pragma once

// Small CSV helpers shared by the readers/writers in this library. No quoting:
// every schema here is numeric or a bare identifier.

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "skycell/error.hpp"

namespace skycell::csv {

/// Shortest round-trip decimal form.
inline std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string_view trim_eol(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  return line;
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

/// Finite double or ParseError at (line, column).
inline double parse_double(std::string_view text, std::size_t line, std::size_t column,
                           std::string_view name) {
  const auto t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  if (!t.empty() && t.front() == '+') ++first;
  auto res = std::from_chars(first, t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size() || !std::isfinite(v))
    throw ParseError(line, column,
                     "invalid number '" + std::string(t) + "' for " + std::string(name));
  return v;
}

inline long long parse_int(std::string_view text, std::size_t line, std::size_t column,
                           std::string_view name) {
  const auto t = trim(text);
  long long v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw ParseError(line, column,
                     "invalid integer '" + std::string(t) + "' for " + std::string(name));
  return v;
}

} // namespace skycell::csv
