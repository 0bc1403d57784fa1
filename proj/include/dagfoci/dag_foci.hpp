#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <string_view>
#include <utility>
#include <vector>

#include "dagfoci/foci.hpp"
#include "dagfoci/indep_test.hpp"

namespace dagfoci {

// First stage of DAG-FOCI: estimate the Markov boundary of the target, then
// the boundary of every member. Member searches include the target itself as
// a candidate; member_boundaries[k] belongs to target_boundary.selected[k].
struct StageOneResult {
  MarkovBoundaryEstimate target_boundary;
  std::vector<MarkovBoundaryEstimate> member_boundaries;
};

// Undirected graph on the estimated boundary of the target: vertices are the
// boundary members, an edge joins i and j iff each lies in the other's
// estimated boundary. Components partition the vertices.
struct ClusterGraph {
  std::vector<std::size_t> vertices;                       // ascending
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j, sorted
  std::vector<std::vector<std::size_t>> components;        // each ascending
};

struct PairIndependence {
  std::size_t i = 0;  // column indices, i < j
  std::size_t j = 0;
  PermutationTestResult test;
};

// Output of the second stage: the candidate parental sets. The empty set is
// always a member; a component with two or more vertices is admitted iff no
// vertex pair rejects independence.
struct CandidateCollection {
  std::vector<std::vector<std::size_t>> sets;
  std::vector<PairIndependence> tests;
};

enum class Verdict { unique, singletons, undetectable };

inline constexpr std::string_view kUndetectableMessage =
    "DAG-FOCI is not able to detect the parents";

struct ParentalSets {
  Verdict verdict = Verdict::singletons;
  // unique: exactly the one multi-vertex set. singletons: every candidate
  // set (including the empty set). undetectable: empty.
  std::vector<std::vector<std::size_t>> sets;
  StageOneResult stage_one;
  ClusterGraph graph;
  CandidateCollection candidates;
};

namespace detail {
constexpr std::uint64_t kStageTwoTag = 3;
}

inline StageOneResult stage_one(
    const Dataset& d, std::size_t target, std::uint64_t seed,
    std::size_t max_boundary = std::numeric_limits<std::size_t>::max()) {
  StageOneResult r;
  r.target_boundary = foci_select(d, select_all_but(d, target),
                                  rng::mix(seed, detail::kFociTargetTag),
                                  max_boundary);
  const auto& members = r.target_boundary.selected;
  r.member_boundaries.resize(members.size());
  parallel::parallel_for(members.size(), [&](std::size_t k) {
    // select_all_but includes the target among the member's candidates
    r.member_boundaries[k] =
        foci_select(d, select_all_but(d, members[k]),
                    rng::mix(seed, detail::kFociMemberTag, members[k]),
                    max_boundary);
  });
  return r;
}

inline ClusterGraph build_cluster_graph(const StageOneResult& s1) {
  const auto& members = s1.target_boundary.selected;
  if (s1.member_boundaries.size() != members.size())
    throw Error("inconsistent layers: one boundary required per member");
  for (std::size_t k = 0; k < members.size(); ++k)
    if (s1.member_boundaries[k].target != members[k])
      throw Error("inconsistent layers: boundary target mismatch");

  ClusterGraph g;
  g.vertices = members;
  std::sort(g.vertices.begin(), g.vertices.end());

  auto contains = [&](std::size_t k, std::size_t col) {
    const auto& sel = s1.member_boundaries[k].selected;
    return std::find(sel.begin(), sel.end(), col) != sel.end();
  };
  // union-find over vertex positions in g.vertices
  std::vector<std::size_t> parent(g.vertices.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };

  auto order_of = [&](std::size_t col) {
    for (std::size_t k = 0; k < members.size(); ++k)
      if (members[k] == col) return k;
    throw Error("inconsistent layers: unknown member");
  };

  for (std::size_t a = 0; a < g.vertices.size(); ++a) {
    for (std::size_t b = a + 1; b < g.vertices.size(); ++b) {
      std::size_t i = g.vertices[a], j = g.vertices[b];
      if (contains(order_of(i), j) && contains(order_of(j), i)) {
        g.edges.emplace_back(i, j);
        parent[find(a)] = find(b);
      }
    }
  }
  std::vector<std::vector<std::size_t>> comp(g.vertices.size());
  for (std::size_t a = 0; a < g.vertices.size(); ++a)
    comp[find(a)].push_back(g.vertices[a]);
  for (auto& c : comp)
    if (!c.empty()) g.components.push_back(std::move(c));
  std::sort(g.components.begin(), g.components.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  return g;
}

// Second stage over an injectable pair tester: tester(i, j) must return a
// PermutationTestResult for columns i < j. Every pair of every multi-vertex
// component is tested (no short-circuit) so the full evidence is recorded.
template <class Tester>
CandidateCollection stage_two_with(const ClusterGraph& g, Tester&& tester) {
  CandidateCollection c;
  c.sets.push_back({});  // the empty set is always a candidate

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& component : g.components)
    for (std::size_t a = 0; a < component.size(); ++a)
      for (std::size_t b = a + 1; b < component.size(); ++b)
        pairs.emplace_back(component[a], component[b]);

  std::vector<PairIndependence> tests(pairs.size());
  parallel::parallel_for(pairs.size(), [&](std::size_t k) {
    tests[k].i = pairs[k].first;
    tests[k].j = pairs[k].second;
    tests[k].test = tester(pairs[k].first, pairs[k].second);
  });

  std::size_t k = 0;
  for (const auto& component : g.components) {
    std::size_t n_pairs = component.size() * (component.size() - 1) / 2;
    bool admit = true;
    for (std::size_t p = 0; p < n_pairs; ++p)
      if (tests[k + p].test.reject) admit = false;
    k += n_pairs;
    if (admit) c.sets.push_back(component);
  }
  c.tests = std::move(tests);
  return c;
}

inline CandidateCollection stage_two(const ClusterGraph& g, const Dataset& d,
                                     std::size_t n_perms, double alpha,
                                     std::uint64_t seed) {
  return stage_two_with(g, [&](std::size_t i, std::size_t j) {
    return permutation_independence_test(
        d.column(i), d.column(j), n_perms, alpha,
        rng::mix(seed, detail::kStageTwoTag, i, j));
  });
}

// Third stage, total over every collection:
//  - exactly one set with >= 2 members: that set is the parental set;
//  - no set with >= 2 members: every candidate (including the empty set)
//    remains possible;
//  - otherwise the parents are undetectable.
inline ParentalSets stage_three(const CandidateCollection& c) {
  ParentalSets out;
  out.candidates = c;
  std::vector<std::vector<std::size_t>> multi;
  for (const auto& s : c.sets)
    if (s.size() >= 2) multi.push_back(s);
  if (multi.size() == 1) {
    out.verdict = Verdict::unique;
    out.sets = {multi[0]};
  } else if (multi.empty()) {
    out.verdict = Verdict::singletons;
    out.sets = c.sets;
  } else {
    out.verdict = Verdict::undetectable;
    out.sets = {};
  }
  return out;
}

inline ParentalSets dag_foci(
    const Dataset& d, std::size_t target, std::size_t n_perms, double alpha,
    std::uint64_t seed,
    std::size_t max_boundary = std::numeric_limits<std::size_t>::max()) {
  StageOneResult s1 = stage_one(d, target, seed, max_boundary);
  ClusterGraph g = build_cluster_graph(s1);
  CandidateCollection c = stage_two(g, d, n_perms, alpha, seed);
  ParentalSets out = stage_three(c);
  out.stage_one = std::move(s1);
  out.graph = std::move(g);
  return out;
}

}  // namespace dagfoci
