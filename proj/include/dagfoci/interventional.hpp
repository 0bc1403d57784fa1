#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "dagfoci/dag_foci.hpp"

namespace dagfoci {

// Refinement of observational candidate parental sets with the Markov
// boundary estimated on data where the target was intervened on. The
// intervention severs the target from its parents but not from its children,
// so a candidate set disjoint from the interventional boundary survives as a
// parental set, while its intersection members are reclassified as children
// of the target.
struct InterventionalResult {
  ParentalSets observational;
  MarkovBoundaryEstimate interventional_boundary;
  std::vector<std::vector<std::size_t>> refined_parents;  // surviving sets
  std::vector<std::size_t> children;                      // sorted, unique
};

namespace detail {
constexpr std::uint64_t kIntvObsTag = 1;
constexpr std::uint64_t kIntvBoundaryTag = 2;
}  // namespace detail

inline InterventionalResult refine_with_interventional_boundary(
    const ParentalSets& obs, const MarkovBoundaryEstimate& boundary) {
  InterventionalResult out;
  out.observational = obs;
  out.interventional_boundary = boundary;
  const auto& mb = boundary.selected;
  for (const auto& s : obs.sets) {
    std::vector<std::size_t> inter;
    for (std::size_t v : s)
      if (std::find(mb.begin(), mb.end(), v) != mb.end()) inter.push_back(v);
    if (inter.empty()) {
      out.refined_parents.push_back(s);
    } else {
      out.children.insert(out.children.end(), inter.begin(), inter.end());
    }
  }
  std::sort(out.children.begin(), out.children.end());
  out.children.erase(std::unique(out.children.begin(), out.children.end()),
                     out.children.end());
  return out;
}

// Runs DAG-FOCI on the observational data, estimates the target's boundary on
// the interventional data, and refines. An undetectable observational verdict
// carries through with empty refinements.
inline InterventionalResult dag_foci_interventional(
    const Dataset& obs, const Dataset& intv, std::size_t target,
    std::size_t n_perms, double alpha, std::uint64_t seed,
    std::size_t max_boundary = std::numeric_limits<std::size_t>::max()) {
  if (obs.names != intv.names)
    throw Error("datasets have different column schemas");
  ParentalSets p = dag_foci(obs, target, n_perms, alpha,
                            rng::mix(seed, detail::kIntvObsTag), max_boundary);
  MarkovBoundaryEstimate mb =
      foci_select(intv, select_all_but(intv, target),
                  rng::mix(seed, detail::kIntvBoundaryTag), max_boundary);
  return refine_with_interventional_boundary(p, mb);
}

}  // namespace dagfoci
