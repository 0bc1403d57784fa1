#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dagfoci/common.hpp"

namespace dagfoci {

// Column-major numeric table with named columns and optional per-row
// environment tags (observational vs interventional regimes).
struct Dataset {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::vector<std::string> environments;  // empty, or one tag per row

  std::size_t n_rows() const { return columns.empty() ? 0 : columns[0].size(); }
  std::size_t n_cols() const { return columns.size(); }

  std::size_t column_index(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    throw Error("unknown column '" + std::string(name) + "'");
  }

  ColumnView column(std::size_t i) const {
    if (i >= columns.size()) throw Error("column index out of range");
    return ColumnView(columns[i]);
  }

  void validate() const {
    if (names.size() != columns.size())
      throw Error("column name/value count mismatch");
    if (n_cols() < 2) throw Error("dataset needs at least 2 columns");
    if (n_rows() < 2) throw Error("dataset needs at least 2 rows");
    for (const auto& c : columns)
      if (c.size() != n_rows()) throw Error("columns have unequal lengths");
    if (!environments.empty() && environments.size() != n_rows())
      throw Error("environment tags have wrong length");
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i].empty()) throw Error("empty column name");
      for (std::size_t j = i + 1; j < names.size(); ++j)
        if (names[i] == names[j])
          throw Error("duplicate column name '" + names[i] + "'");
    }
    for (std::size_t c = 0; c < n_cols(); ++c)
      for (std::size_t r = 0; r < n_rows(); ++r)
        if (!std::isfinite(columns[c][r]))
          throw Error("non-finite value at (row " + std::to_string(r + 1) +
                      ", col " + names[c] + ")");
  }
};

// Target column plus the candidate predictor columns considered for it.
struct ColumnSelection {
  std::size_t target = 0;
  std::vector<std::size_t> predictors;

  void validate(std::size_t n_cols) const {
    if (target >= n_cols) throw Error("target column index out of range");
    for (std::size_t p : predictors) {
      if (p >= n_cols) throw Error("predictor column index out of range");
      if (p == target) throw Error("target cannot be its own predictor");
    }
    auto sorted = predictors;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error("duplicate predictor column");
  }
};

// All predictors except the target, in column order.
inline ColumnSelection select_all_but(const Dataset& d, std::size_t target) {
  ColumnSelection sel;
  sel.target = target;
  for (std::size_t i = 0; i < d.n_cols(); ++i)
    if (i != target) sel.predictors.push_back(i);
  return sel;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline double parse_cell(std::string_view cell, std::size_t file_row,
                         std::string_view col_name) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
    throw Error("cannot parse '" + std::string(cell) + "' at (row " +
                std::to_string(file_row) + ", col " + std::string(col_name) +
                ")");
  if (!std::isfinite(v))
    throw Error("non-finite value at (row " + std::to_string(file_row) +
                ", col " + std::string(col_name) + ")");
  return v;
}

}  // namespace detail

// Parses CSV text: one header row of unique column names, then numeric rows.
// If env_column names a header entry, that column is read as per-row
// environment tags instead of numbers. Row numbers in error messages count
// file lines (header is row 1).
inline Dataset load_csv_text(std::string_view text,
                             std::string_view env_column = {}) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      std::string_view line = text.substr(start, i - start);
      if (!detail::trim(line).empty()) lines.push_back(line);
      start = i + 1;
    }
  }
  if (lines.empty()) throw Error("empty csv input");

  auto header = detail::split_csv_line(lines[0]);
  std::size_t env_pos = header.size();
  Dataset d;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!env_column.empty() && header[i] == env_column) {
      if (env_pos != header.size())
        throw Error("duplicate column name '" + std::string(env_column) + "'");
      env_pos = i;
    } else {
      d.names.emplace_back(header[i]);
    }
  }
  if (!env_column.empty() && env_pos == header.size())
    throw Error("environment column '" + std::string(env_column) +
                "' not found");
  d.columns.assign(d.names.size(), {});

  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto cells = detail::split_csv_line(lines[r]);
    if (cells.size() != header.size())
      throw Error("row " + std::to_string(r + 1) + " has " +
                  std::to_string(cells.size()) + " fields, expected " +
                  std::to_string(header.size()));
    std::size_t c_out = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == env_pos) {
        d.environments.emplace_back(cells[c]);
      } else {
        d.columns[c_out].push_back(
            detail::parse_cell(cells[c], r + 1, d.names[c_out]));
        ++c_out;
      }
    }
  }
  d.validate();
  return d;
}

inline Dataset load_csv(const std::string& path,
                        std::string_view env_column = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_csv_text(buf.str(), env_column);
}

// 17 significant digits: doubles round-trip exactly through save/load.
inline std::string to_csv(const Dataset& d,
                          std::string_view env_column_name = "env") {
  d.validate();
  std::string out;
  for (std::size_t c = 0; c < d.names.size(); ++c) {
    if (c) out += ',';
    out += d.names[c];
  }
  if (!d.environments.empty()) {
    out += ',';
    out += env_column_name;
  }
  out += '\n';
  char num[40];
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    for (std::size_t c = 0; c < d.n_cols(); ++c) {
      if (c) out += ',';
      std::snprintf(num, sizeof(num), "%.17g", d.columns[c][r]);
      out += num;
    }
    if (!d.environments.empty()) {
      out += ',';
      out += d.environments[r];
    }
    out += '\n';
  }
  return out;
}

inline void save_csv(const Dataset& d, const std::string& path,
                     std::string_view env_column_name = "env") {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << to_csv(d, env_column_name);
  if (!out) throw Error("write failed for '" + path + "'");
}

// Rows whose environment tag equals `tag`, without the tag column.
inline Dataset filter_environment(const Dataset& d, std::string_view tag) {
  if (d.environments.empty())
    throw Error("dataset has no environment tags");
  bool known = false;
  for (const auto& t : d.environments)
    if (t == tag) { known = true; break; }
  if (!known) throw Error("unknown environment '" + std::string(tag) + "'");

  Dataset out;
  out.names = d.names;
  out.columns.assign(d.n_cols(), {});
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    if (d.environments[r] != tag) continue;
    for (std::size_t c = 0; c < d.n_cols(); ++c)
      out.columns[c].push_back(d.columns[c][r]);
  }
  if (out.n_rows() < 2)
    throw Error("environment '" + std::string(tag) +
                "' leaves fewer than 2 rows");
  return out;
}

// Identity pass-through. Downstream statistics are rank-based, so no scaling
// or centering is ever needed; this is the hook point if a non-rank statistic
// is ever added.
inline const Dataset& standardize_ranks_ready(const Dataset& d) { return d; }

}  // namespace dagfoci
