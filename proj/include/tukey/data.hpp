#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "tukey/errors.hpp"
#include "tukey/rng.hpp"

namespace tukey {

/// Row-major numeric table as read from or written to CSV.
struct Table {
  std::vector<double> values;
  std::int32_t rows = 0;
  std::int32_t cols = 0;

  std::span<const double> row(std::int32_t i) const {
    return {values.data() + static_cast<std::size_t>(i) * cols, static_cast<std::size_t>(cols)};
  }
};

namespace detail {

inline bool parse_double(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  if (first == last) return false;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace detail

/// Parses a headerless comma-separated numeric table. A leading header
/// line is skipped when its first row fails to parse as numbers.
/// Parse failures report the 1-based line number.
inline Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  Table t;
  std::string line;
  std::size_t lineno = 0;
  bool first_data_line = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::size_t start = 0;
    bool ok = true;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) comma = line.size();
      double v = 0.0;
      if (!detail::parse_double({line.data() + start, comma - start}, v)) {
        ok = false;
        break;
      }
      row.push_back(v);
      start = comma + 1;
    }
    if (!ok) {
      if (first_data_line) continue;  // header row
      throw input_error(path + ":" + std::to_string(lineno) + ": cannot parse numeric row");
    }
    if (t.cols == 0) {
      t.cols = static_cast<std::int32_t>(row.size());
    } else if (static_cast<std::int32_t>(row.size()) != t.cols) {
      throw input_error(path + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(t.cols) + " columns, got " + std::to_string(row.size()));
    }
    t.values.insert(t.values.end(), row.begin(), row.end());
    ++t.rows;
    first_data_line = false;
  }
  if (t.rows == 0) throw input_error(path + ": no numeric rows");
  return t;
}

/// Shortest round-trip decimal representation, locale independent.
inline std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  std::from_chars(buf, buf + len, back);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char probe[32];
      const int plen = std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
      double pv = 0.0;
      std::from_chars(probe, probe + plen, pv);
      if (pv == v) return std::string(probe, static_cast<std::size_t>(plen));
    }
  }
  return std::string(buf, static_cast<std::size_t>(len));
}

inline void write_csv(const std::string& path, const Table& t) {
  std::ofstream out(path, std::ios::binary);  // LF endings everywhere
  if (!out) throw input_error("cannot open " + path + " for writing");
  for (std::int32_t i = 0; i < t.rows; ++i) {
    for (std::int32_t j = 0; j < t.cols; ++j) {
      if (j) out << ',';
      out << format_double(t.values[static_cast<std::size_t>(i) * t.cols + j]);
    }
    out << '\n';
  }
  if (!out) throw input_error("write failed for " + path);
}

/// Seed for one generated cell, mixed so that every (seed, p, n) cell gets
/// an unrelated stream.
inline std::uint64_t cell_seed(std::uint64_t base, std::int32_t p, std::int32_t n) {
  std::uint64_t x = base ^ (0x100000001b3ull * static_cast<std::uint64_t>(p)) ^
                    (0xcbf29ce484222325ull + static_cast<std::uint64_t>(n));
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdull;
  x ^= x >> 33;
  return x;
}

/// n standard-normal p-vectors, bit-reproducible for a fixed seed.
inline Table gen_normal(std::int32_t n, std::int32_t p, std::uint64_t seed) {
  Table t;
  t.rows = n;
  t.cols = p;
  t.values.resize(static_cast<std::size_t>(n) * p);
  Rng rng(seed);
  for (auto& v : t.values) v = rng.normal();
  return t;
}

}  // namespace tukey
