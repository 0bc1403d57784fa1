#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "dagfoci/common.hpp"

namespace dagfoci {

// Max ranks and co-ranks of a response vector:
//   r[j] = #{k : y[k] <= y[j]},   l[j] = #{k : y[k] >= y[j]}.
// Both count j itself, so 1 <= r[j], l[j] <= n, and with ties
// r[j] + l[j] = n + (number of values equal to y[j]) + ... >= n + 2 - 1.
struct RankVector {
  std::vector<std::int32_t> r;
  std::vector<std::int32_t> l;
};

inline RankVector compute_ranks(ColumnView y) {
  const std::size_t n = y.size();
  if (n < 2) throw Error("rank computation needs at least 2 values");
  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end());
  RankVector rv;
  rv.r.resize(n);
  rv.l.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto lo = std::lower_bound(sorted.begin(), sorted.end(), y[j]);
    auto hi = std::upper_bound(lo, sorted.end(), y[j]);
    rv.r[j] = static_cast<std::int32_t>(hi - sorted.begin());
    rv.l[j] = static_cast<std::int32_t>(sorted.end() - lo);
  }
  return rv;
}

}  // namespace dagfoci
