#pragma once

#include <cstdint>
#include <vector>

#include "dagfoci/common.hpp"
#include "dagfoci/neighbors.hpp"
#include "dagfoci/ranks.hpp"
#include "dagfoci/rng.hpp"

namespace dagfoci {

// Conditional dependence coefficient estimate. All rank sums are integers, so
// t is a single rounded ratio of two exact 64-bit sums; numerator/denominator
// carry the normalized values with t == numerator / denominator.
struct CodecValue {
  double t = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  std::size_t n_used = 0;
  std::size_t conditioning_size = 0;
};

namespace detail {

// Tags separating the tie-break streams of the two neighbor searches, so the
// N(j) search on X and the M(j) search on (X, Z) never share draws.
constexpr std::uint64_t kTieStreamN = 0x4e;
constexpr std::uint64_t kTieStreamM = 0x4d;

constexpr std::size_t kMaxExactRows = 2000000;  // keeps n^3 within int64

inline std::int64_t sum_min_rank(const std::vector<std::int32_t>& r,
                                 const std::vector<std::uint32_t>& nn) {
  std::int64_t s = 0;
  for (std::size_t j = 0; j < nn.size(); ++j)
    s += std::min(r[j], r[nn[j]]);
  return s;
}

inline void check_inputs(ColumnView y, MatrixView z, std::size_t n) {
  if (n < 2) throw Error("need at least 2 rows");
  if (n > kMaxExactRows) throw Error("too many rows for exact accumulation");
  if (z.empty()) throw Error("empty predictor set");
  for (const auto& c : z)
    if (c.size() != n) throw Error("columns have unequal lengths");
}

}  // namespace detail

// T_n(Y, Z) = Q_n / S_n with
//   Q_n = (1/n^2) sum_j [ min(R_j, R_M(j)) - L_j^2 / n ],
//   S_n = (1/n^3) sum_j L_j (n - L_j),
// where M(j) is the nearest neighbor of row j in the Z point cloud, R the max
// ranks and L the co-ranks of Y. Population value is 0 iff Y independent of Z
// and 1 iff Y is a measurable function of Z.
inline CodecValue codec_unconditional(ColumnView y, MatrixView z,
                                      std::uint64_t seed) {
  const std::size_t n = y.size();
  detail::check_inputs(y, z, n);
  RankVector rk = compute_ranks(y);

  std::int64_t s_den = 0;  // sum L (n - L)
  std::int64_t s_l2 = 0;   // sum L^2
  for (std::size_t j = 0; j < n; ++j) {
    std::int64_t l = rk.l[j];
    s_den += l * (static_cast<std::int64_t>(n) - l);
    s_l2 += l * l;
  }
  if (s_den == 0) throw Error("degenerate response: constant column");

  NeighborIndex m =
      nearest_neighbors(gather_rows(z), rng::mix(seed, detail::kTieStreamM));
  std::int64_t s_min = detail::sum_min_rank(rk.r, m.nn);

  std::int64_t num = static_cast<std::int64_t>(n) * s_min - s_l2;
  double n3 = static_cast<double>(n) * static_cast<double>(n) *
              static_cast<double>(n);
  CodecValue v;
  v.numerator = static_cast<double>(num) / n3;
  v.denominator = static_cast<double>(s_den) / n3;
  v.t = static_cast<double>(num) / static_cast<double>(s_den);
  v.n_used = n;
  v.conditioning_size = 0;
  return v;
}

// Q_n(Y, X_S) with the convention Q_n(Y, empty) = 0: the unnormalized
// dependence mass explained by X_S. Equals the numerator field of
// codec_unconditional on the same inputs.
inline double q_n(ColumnView y, MatrixView x, std::uint64_t seed) {
  if (x.empty()) return 0.0;
  return codec_unconditional(y, x, seed).numerator;
}

// T_n(Y, Z | X) = sum_j [ min(R_j, R_M(j)) - min(R_j, R_N(j)) ]
//              / sum_j [ R_j - min(R_j, R_N(j)) ],
// N(j) the nearest neighbor of row j in the X cloud, M(j) in the (X, Z)
// cloud with X dimensions first. numerator/denominator report the two sums
// scaled by 1/n^2.
inline CodecValue codec_conditional(ColumnView y, MatrixView z, MatrixView x,
                                    std::uint64_t seed) {
  const std::size_t n = y.size();
  detail::check_inputs(y, z, n);
  if (x.empty())
    throw Error("empty conditioning set: use the unconditional form");
  for (const auto& c : x)
    if (c.size() != n) throw Error("columns have unequal lengths");

  RankVector rk = compute_ranks(y);
  NeighborIndex nb =
      nearest_neighbors(gather_rows(x), rng::mix(seed, detail::kTieStreamN));

  std::vector<ColumnView> xz(x.begin(), x.end());
  xz.insert(xz.end(), z.begin(), z.end());
  NeighborIndex m = nearest_neighbors(gather_rows(MatrixView(xz)),
                                      rng::mix(seed, detail::kTieStreamM));

  std::int64_t s_n = detail::sum_min_rank(rk.r, nb.nn);
  std::int64_t s_m = detail::sum_min_rank(rk.r, m.nn);
  std::int64_t s_r = 0;
  for (std::size_t j = 0; j < n; ++j) s_r += rk.r[j];

  std::int64_t den = s_r - s_n;
  if (den == 0) throw Error("conditioning explains response ranks exactly");
  std::int64_t num = s_m - s_n;

  double n2 = static_cast<double>(n) * static_cast<double>(n);
  CodecValue v;
  v.numerator = static_cast<double>(num) / n2;
  v.denominator = static_cast<double>(den) / n2;
  v.t = static_cast<double>(num) / static_cast<double>(den);
  v.n_used = n;
  v.conditioning_size = x.size();
  return v;
}

// Fixes Y and the conditioning set X once, then evaluates
// T_n(Y, z | X) for many single-column candidates z: the N(j) search and the
// denominator are shared across candidates, and results are bit-identical to
// codec_conditional(y, {z}, x, seed). Thread-safe for concurrent with() calls.
class ConditionalScan {
 public:
  ConditionalScan(ColumnView y, MatrixView x, std::uint64_t seed)
      : n_(y.size()), seed_(seed) {
    if (x.empty())
      throw Error("empty conditioning set: use the unconditional form");
    detail::check_inputs(y, x, n_);
    rk_ = compute_ranks(y);
    NeighborIndex nb =
        nearest_neighbors(gather_rows(x), rng::mix(seed, detail::kTieStreamN));
    s_n_ = detail::sum_min_rank(rk_.r, nb.nn);
    s_r_ = 0;
    for (std::size_t j = 0; j < n_; ++j) s_r_ += rk_.r[j];
    // (X, z) rows with the z slot left open at the last dimension
    base_.n = n_;
    base_.d = x.size() + 1;
    base_.data.resize(n_ * base_.d);
    for (std::size_t j = 0; j < n_; ++j) {
      double* r = base_.row(j);
      for (std::size_t k = 0; k < x.size(); ++k) r[k] = x[k][j];
    }
  }

  // Denominator is a function of Y and X only; when it is zero no candidate
  // can be scored and stepwise selection must stop.
  bool degenerate() const { return s_r_ == s_n_; }

  CodecValue with(ColumnView z) const {
    if (z.size() != n_) throw Error("columns have unequal lengths");
    if (degenerate())
      throw Error("conditioning explains response ranks exactly");
    RowMatrix pts = base_;
    for (std::size_t j = 0; j < n_; ++j) pts.row(j)[pts.d - 1] = z[j];
    NeighborIndex m =
        nearest_neighbors(pts, rng::mix(seed_, detail::kTieStreamM));
    std::int64_t s_m = detail::sum_min_rank(rk_.r, m.nn);

    std::int64_t den = s_r_ - s_n_;
    std::int64_t num = s_m - s_n_;
    double n2 = static_cast<double>(n_) * static_cast<double>(n_);
    CodecValue v;
    v.numerator = static_cast<double>(num) / n2;
    v.denominator = static_cast<double>(den) / n2;
    v.t = static_cast<double>(num) / static_cast<double>(den);
    v.n_used = n_;
    v.conditioning_size = base_.d - 1;
    return v;
  }

 private:
  std::size_t n_;
  std::uint64_t seed_;
  RankVector rk_;
  std::int64_t s_n_ = 0;
  std::int64_t s_r_ = 0;
  RowMatrix base_;
};

}  // namespace dagfoci
