#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "dagfoci/common.hpp"
#include "dagfoci/rng.hpp"

namespace dagfoci {

// Row-major point buffer gathered from columns; row j of the cloud is
// (cols[0][j], ..., cols[d-1][j]). Dimension order is the column order, which
// fixes the floating-point accumulation order of squared distances.
struct RowMatrix {
  std::vector<double> data;
  std::size_t n = 0;
  std::size_t d = 0;

  const double* row(std::size_t i) const { return data.data() + i * d; }
  double* row(std::size_t i) { return data.data() + i * d; }
};

inline RowMatrix gather_rows(MatrixView cols) {
  RowMatrix m;
  if (cols.empty()) throw Error("point cloud needs at least 1 dimension");
  m.n = cols[0].size();
  m.d = cols.size();
  for (const auto& c : cols)
    if (c.size() != m.n) throw Error("columns have unequal lengths");
  m.data.resize(m.n * m.d);
  for (std::size_t j = 0; j < m.n; ++j)
    for (std::size_t k = 0; k < m.d; ++k) m.data[j * m.d + k] = cols[k][j];
  return m;
}

// Same, with one extra column appended as the last dimension.
inline RowMatrix gather_rows(MatrixView cols, ColumnView extra) {
  RowMatrix m;
  m.n = extra.size();
  m.d = cols.size() + 1;
  for (const auto& c : cols)
    if (c.size() != m.n) throw Error("columns have unequal lengths");
  m.data.resize(m.n * m.d);
  for (std::size_t j = 0; j < m.n; ++j) {
    double* r = m.row(j);
    for (std::size_t k = 0; k + 1 < m.d; ++k) r[k] = cols[k][j];
    r[m.d - 1] = extra[j];
  }
  return m;
}

// nn[j] is the index of the nearest neighbor of row j (self excluded),
// Euclidean metric. Exact minimum-distance ties are broken uniformly by a
// draw keyed on (seed, j) over the ascending-sorted tie set, so every search
// strategy below returns identical results for identical inputs.
struct NeighborIndex {
  std::vector<std::uint32_t> nn;
};

enum class NnMethod { automatic, sorted1d, kdtree, brute };

namespace detail {

constexpr double kAbandoned = std::numeric_limits<double>::infinity();

// Squared distance accumulated dimension by dimension; bails out with an
// infinity sentinel once the partial sum strictly exceeds `best`. Partial
// sums only grow under IEEE rounding (each addend is >= 0), so an abandoned
// point can never belong to the final tie set.
inline double dist2_early(const double* a, const double* b, std::size_t d,
                          double best) {
  double acc = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    double diff = a[k] - b[k];
    acc += diff * diff;
    if (acc > best) return kAbandoned;
  }
  return acc;
}

inline void consider(std::uint32_t i, double d2, double& best,
                     std::vector<std::uint32_t>& ties) {
  if (d2 < best) {
    best = d2;
    ties.clear();
    ties.push_back(i);
  } else if (d2 == best) {
    ties.push_back(i);
  }
}

class KdTree {
 public:
  explicit KdTree(const RowMatrix& pts) : pts_(&pts) {
    order_.resize(pts.n);
    for (std::size_t i = 0; i < pts.n; ++i)
      order_[i] = static_cast<std::uint32_t>(i);
    nodes_.reserve(2 * pts.n / kLeafSize + 2);
    root_ = build(0, static_cast<std::uint32_t>(pts.n));
  }

  // Appends all exact nearest-neighbor ties of `q` (excluding `self`) to
  // `ties` and leaves the minimum squared distance in `best`.
  void query(const double* q, std::uint32_t self, double& best,
             std::vector<std::uint32_t>& ties) const {
    best = std::numeric_limits<double>::infinity();
    ties.clear();
    visit(root_, q, self, best, ties);
  }

 private:
  static constexpr std::uint32_t kLeafSize = 16;

  struct Node {
    double split = 0.0;
    std::int32_t dim = -1;  // -1 marks a leaf
    std::uint32_t a = 0;    // leaf: begin; internal: left child
    std::uint32_t b = 0;    // leaf: end;   internal: right child
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end) {
    const std::size_t d = pts_->d;
    std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    std::size_t box_at = bbox_.size();
    bbox_.resize(box_at + 2 * d);
    double* lo = bbox_.data() + box_at;
    double* hi = lo + d;
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::numeric_limits<double>::infinity();
      hi[k] = -std::numeric_limits<double>::infinity();
    }
    for (std::uint32_t t = begin; t < end; ++t) {
      const double* p = pts_->row(order_[t]);
      for (std::size_t k = 0; k < d; ++k) {
        lo[k] = std::min(lo[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
      }
    }
    int best_dim = -1;
    double best_extent = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      double extent = hi[k] - lo[k];
      if (extent > best_extent) {
        best_extent = extent;
        best_dim = static_cast<int>(k);
      }
    }
    if (end - begin <= kLeafSize || best_dim < 0) {
      nodes_[id].a = begin;
      nodes_[id].b = end;
      return id;
    }
    std::uint32_t mid = begin + (end - begin) / 2;
    const RowMatrix* pts = pts_;
    std::nth_element(order_.begin() + begin, order_.begin() + mid,
                     order_.begin() + end,
                     [pts, best_dim](std::uint32_t x, std::uint32_t y) {
                       return pts->row(x)[best_dim] < pts->row(y)[best_dim];
                     });
    double split = pts_->row(order_[mid])[best_dim];
    std::uint32_t left = build(begin, mid);
    std::uint32_t right = build(mid, end);
    nodes_[id].dim = best_dim;
    nodes_[id].split = split;
    nodes_[id].a = left;
    nodes_[id].b = right;
    return id;
  }

  // Lower bound on the squared distance from q to the node's box, with the
  // same per-dimension accumulation order as dist2_early. Per dimension the
  // clamped difference is <= the difference to any in-box point, and IEEE
  // rounding is monotone, so the bound never exceeds any in-box point's
  // computed distance: pruning on strict inequality cannot drop a tie.
  bool box_farther(std::uint32_t id, const double* q, double best) const {
    const std::size_t d = pts_->d;
    const double* lo = bbox_.data() + static_cast<std::size_t>(id) * 2 * d;
    const double* hi = lo + d;
    double acc = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      double c = q[k] < lo[k] ? lo[k] : (q[k] > hi[k] ? hi[k] : q[k]);
      double diff = q[k] - c;
      acc += diff * diff;
      if (acc > best) return true;
    }
    return false;
  }

  void visit(std::uint32_t id, const double* q, std::uint32_t self,
             double& best, std::vector<std::uint32_t>& ties) const {
    const Node& nd = nodes_[id];
    if (nd.dim < 0) {
      for (std::uint32_t t = nd.a; t < nd.b; ++t) {
        std::uint32_t i = order_[t];
        if (i == self) continue;
        double d2 = dist2_early(q, pts_->row(i), pts_->d, best);
        if (d2 != kAbandoned) consider(i, d2, best, ties);
      }
      return;
    }
    std::uint32_t near = nd.a, far = nd.b;
    if (q[nd.dim] > nd.split) std::swap(near, far);
    if (!box_farther(near, q, best)) visit(near, q, self, best, ties);
    if (!box_farther(far, q, best)) visit(far, q, self, best, ties);
  }

  const RowMatrix* pts_;
  std::uint32_t root_ = 0;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;
  std::vector<double> bbox_;
};

inline void ties_1d(const std::vector<std::pair<double, std::uint32_t>>& sorted,
                    std::size_t pos, double& best,
                    std::vector<std::uint32_t>& ties) {
  const std::size_t n = sorted.size();
  const double v = sorted[pos].first;
  auto sq = [v](double w) {
    double diff = v - w;
    return diff * diff;
  };
  best = std::numeric_limits<double>::infinity();
  if (pos > 0) best = sq(sorted[pos - 1].first);
  if (pos + 1 < n) best = std::min(best, sq(sorted[pos + 1].first));
  ties.clear();
  // Distances grow monotonically walking away from pos, so each walk stops at
  // the first strictly larger value. Equal plateaus and squares that round to
  // the same double (including underflow to zero) are all collected.
  for (std::size_t k = pos; k-- > 0;) {
    if (sq(sorted[k].first) != best) break;
    ties.push_back(sorted[k].second);
  }
  for (std::size_t k = pos + 1; k < n; ++k) {
    if (sq(sorted[k].first) != best) break;
    ties.push_back(sorted[k].second);
  }
}

}  // namespace detail

inline NeighborIndex nearest_neighbors(
    const RowMatrix& pts, std::uint64_t seed,
    NnMethod method = NnMethod::automatic,
    std::vector<std::vector<std::uint32_t>>* ties_out = nullptr) {
  const std::size_t n = pts.n;
  if (n < 2) throw Error("nearest neighbor needs at least 2 points");
  if (method == NnMethod::automatic) {
    if (pts.d == 1)
      method = NnMethod::sorted1d;
    else if (pts.d <= 10)
      method = NnMethod::kdtree;
    else
      method = NnMethod::brute;
  }
  if (method == NnMethod::sorted1d && pts.d != 1)
    throw Error("sorted1d search requires 1-dimensional points");

  NeighborIndex out;
  out.nn.resize(n);
  if (ties_out) ties_out->assign(n, {});
  std::vector<std::uint32_t> ties;
  ties.reserve(8);

  auto finalize = [&](std::size_t j) {
    std::sort(ties.begin(), ties.end());
    out.nn[j] = ties[rng::tie_pick(seed, j, ties.size())];
    if (ties_out) (*ties_out)[j] = ties;
  };

  switch (method) {
    case NnMethod::sorted1d: {
      std::vector<std::pair<double, std::uint32_t>> sorted(n);
      for (std::size_t i = 0; i < n; ++i)
        sorted[i] = {pts.data[i], static_cast<std::uint32_t>(i)};
      std::sort(sorted.begin(), sorted.end());
      std::vector<std::size_t> pos_of(n);
      for (std::size_t p = 0; p < n; ++p) pos_of[sorted[p].second] = p;
      double best;
      for (std::size_t j = 0; j < n; ++j) {
        detail::ties_1d(sorted, pos_of[j], best, ties);
        finalize(j);
      }
      break;
    }
    case NnMethod::kdtree: {
      detail::KdTree tree(pts);
      double best;
      for (std::size_t j = 0; j < n; ++j) {
        tree.query(pts.row(j), static_cast<std::uint32_t>(j), best, ties);
        finalize(j);
      }
      break;
    }
    default: {  // brute
      for (std::size_t j = 0; j < n; ++j) {
        const double* q = pts.row(j);
        double best = std::numeric_limits<double>::infinity();
        ties.clear();
        for (std::size_t i = 0; i < n; ++i) {
          if (i == j) continue;
          double d2 = detail::dist2_early(q, pts.row(i), pts.d, best);
          if (d2 != detail::kAbandoned)
            detail::consider(static_cast<std::uint32_t>(i), d2, best, ties);
        }
        finalize(j);
      }
      break;
    }
  }
  return out;
}

}  // namespace dagfoci
