#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "dagfoci/codec.hpp"
#include "dagfoci/dataset.hpp"
#include "dagfoci/parallel.hpp"

namespace dagfoci {

struct TrajectoryStep {
  std::size_t step = 0;    // 1-based selection step
  std::size_t column = 0;  // chosen predictor column
  double t_value = 0.0;    // the winning T_n, always > 0
};

struct MarkovBoundaryEstimate {
  std::size_t target = 0;
  std::vector<std::size_t> selected;  // in selection order
  std::vector<TrajectoryStep> trajectory;
};

namespace detail {
constexpr std::uint64_t kFociTargetTag = 1;
constexpr std::uint64_t kFociMemberTag = 2;
}  // namespace detail

// Forward stepwise selection: repeatedly add the candidate with the largest
// T_n(Y, X_i | X_selected) (unconditional on the first step), stopping when
// the best value is no longer positive, candidates run out, max_size is hit,
// or the conditioning set already explains the response ranks exactly.
// Cross-candidate ties go to the smallest column index. Conditioning columns
// enter the metric in selection order.
inline MarkovBoundaryEstimate foci_select(
    const Dataset& d, const ColumnSelection& sel, std::uint64_t seed,
    std::size_t max_size = std::numeric_limits<std::size_t>::max()) {
  sel.validate(d.n_cols());
  if (sel.predictors.empty()) throw Error("empty candidate set");
  ColumnView y = d.column(sel.target);
  auto [mn, mx] = std::minmax_element(y.begin(), y.end());
  if (*mn == *mx) throw Error("constant target column");

  std::vector<std::size_t> remaining = sel.predictors;
  std::sort(remaining.begin(), remaining.end());

  MarkovBoundaryEstimate out;
  out.target = sel.target;

  std::vector<double> t_value;
  std::vector<ColumnView> chosen_cols;
  while (!remaining.empty() && out.selected.size() < max_size) {
    t_value.assign(remaining.size(), 0.0);
    if (chosen_cols.empty()) {
      parallel::parallel_for(remaining.size(), [&](std::size_t i) {
        ColumnView z = d.column(remaining[i]);
        t_value[i] = codec_unconditional(y, MatrixView(&z, 1), seed).t;
      });
    } else {
      ConditionalScan scan(y, MatrixView(chosen_cols), seed);
      if (scan.degenerate()) break;
      parallel::parallel_for(remaining.size(), [&](std::size_t i) {
        t_value[i] = scan.with(d.column(remaining[i])).t;
      });
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < remaining.size(); ++i)
      if (t_value[i] > t_value[best]) best = i;  // ties keep smaller column
    if (!(t_value[best] > 0.0)) break;

    std::size_t col = remaining[best];
    out.selected.push_back(col);
    out.trajectory.push_back({out.selected.size(), col, t_value[best]});
    chosen_cols.push_back(d.column(col));
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

}  // namespace dagfoci
