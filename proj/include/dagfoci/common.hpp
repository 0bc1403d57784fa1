#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dagfoci {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A single data column (one value per sample row).
using ColumnView = std::span<const double>;

// A set of columns of equal length; row j of the implied point cloud is
// (cols[0][j], ..., cols[d-1][j]) in the given column order.
using MatrixView = std::span<const ColumnView>;

}  // namespace dagfoci
