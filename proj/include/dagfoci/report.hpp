#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dagfoci/codec.hpp"
#include "dagfoci/eval_bench.hpp"
#include "dagfoci/interventional.hpp"

// Machine-readable reports emitted by the command line tool. Every document
// carries schema_version, the command name, and the full run configuration
// (seed included) so results can be reproduced from the report alone.
namespace dagfoci::report {

using json = nlohmann::json;

constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::uint64_t seed = 0;
  double alpha = 0.05;
  std::size_t n_perms = 100;
  unsigned jobs = 0;  // 0 = hardware
  std::size_t max_boundary = 0;  // 0 = unbounded
};

inline json config_json(const RunConfig& c) {
  return json{{"seed", c.seed},
              {"alpha", c.alpha},
              {"n_perms", c.n_perms},
              {"jobs", c.jobs},
              {"max_boundary", c.max_boundary}};
}

inline json document(const std::string& command, const RunConfig& c) {
  return json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"config", config_json(c)}};
}

inline json names_json(const std::vector<std::size_t>& cols,
                       const std::vector<std::string>& names) {
  json a = json::array();
  for (std::size_t c : cols) a.push_back(names[c]);
  return a;
}

inline json codec_json(const CodecValue& v) {
  return json{{"t", v.t},
              {"numerator", v.numerator},
              {"denominator", v.denominator},
              {"n_used", v.n_used},
              {"conditioning_size", v.conditioning_size}};
}

inline json boundary_json(const MarkovBoundaryEstimate& b,
                          const std::vector<std::string>& names) {
  json steps = json::array();
  for (const auto& s : b.trajectory)
    steps.push_back(json{{"step", s.step},
                         {"column", names[s.column]},
                         {"t", s.t_value}});
  return json{{"target", names[b.target]},
              {"selected", names_json(b.selected, names)},
              {"trajectory", steps}};
}

inline json test_json(const PairIndependence& p,
                      const std::vector<std::string>& names) {
  return json{{"i", names[p.i]},
              {"j", names[p.j]},
              {"statistic", p.test.statistic},
              {"p_value", p.test.p_value},
              {"n_permutations", p.test.n_permutations},
              {"alpha", p.test.alpha},
              {"reject", p.test.reject}};
}

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::unique: return "unique";
    case Verdict::singletons: return "singletons";
    case Verdict::undetectable: return "undetectable";
  }
  return "?";
}

inline json parental_json(const ParentalSets& p,
                          const std::vector<std::string>& names) {
  json sets = json::array();
  for (const auto& s : p.sets) sets.push_back(names_json(s, names));
  json candidates = json::array();
  for (const auto& s : p.candidates.sets)
    candidates.push_back(names_json(s, names));
  json tests = json::array();
  for (const auto& t : p.candidates.tests) tests.push_back(test_json(t, names));
  json members = json::array();
  for (const auto& b : p.stage_one.member_boundaries)
    members.push_back(boundary_json(b, names));
  json edges = json::array();
  for (const auto& [i, j] : p.graph.edges)
    edges.push_back(json::array({names[i], names[j]}));
  json components = json::array();
  for (const auto& c : p.graph.components)
    components.push_back(names_json(c, names));

  json out{{"verdict", verdict_name(p.verdict)},
           {"sets", sets},
           {"candidate_sets", candidates},
           {"pair_tests", tests},
           {"target_boundary",
            boundary_json(p.stage_one.target_boundary, names)},
           {"member_boundaries", members},
           {"cluster_graph",
            json{{"vertices", names_json(p.graph.vertices, names)},
                 {"edges", edges},
                 {"components", components}}}};
  if (p.verdict == Verdict::undetectable)
    out["message"] = std::string(kUndetectableMessage);
  return out;
}

inline json interventional_json(const InterventionalResult& r,
                                const std::vector<std::string>& names) {
  json refined = json::array();
  for (const auto& s : r.refined_parents) refined.push_back(names_json(s, names));
  return json{
      {"observational", parental_json(r.observational, names)},
      {"interventional_boundary",
       boundary_json(r.interventional_boundary, names)},
      {"refined_parents", refined},
      {"children", names_json(r.children, names)}};
}

inline json score_json(const RunScore& s) {
  return json{{"jaccard", s.jaccard_index},
              {"false_positives", s.false_positives},
              {"missing", s.missing},
              {"non_unique", s.non_unique},
              {"exact", s.exact}};
}

inline json benchmark_json(const BenchmarkResult& b,
                           const std::vector<std::string>& names) {
  json by_n = json::array();
  for (const auto& s : b.by_n) {
    json runs = json::array();
    for (const auto& pr : s.per_run) {
      json r{{"run", pr.run},
             {"data_seed", pr.data_seed},
             {"algo_seed", pr.algo_seed}};
      if (pr.failed) {
        r["failed"] = true;
        r["error"] = pr.error;
      } else {
        r["verdict"] = verdict_name(pr.result.verdict);
        json sets = json::array();
        for (const auto& st : pr.result.sets)
          sets.push_back(names_json(st, names));
        r["sets"] = sets;
        r["score"] = score_json(pr.score);
      }
      runs.push_back(std::move(r));
    }
    by_n.push_back(json{{"n", s.n},
                        {"runs", s.runs},
                        {"aggregate",
                         json{{"exact_count", s.exact_count},
                              {"non_unique_count", s.non_unique_count},
                              {"false_positive_runs", s.false_positive_runs},
                              {"failed_count", s.failed_count},
                              {"mean_false", s.mean_false},
                              {"mean_missing", s.mean_missing},
                              {"mean_jaccard", s.mean_jaccard}}},
                        {"per_run", runs}});
  }
  return json{{"spec", b.spec_name},
              {"target", b.target},
              {"true_parents", b.truth.empty() && names.empty()
                                   ? json::array()
                                   : names_json(b.truth, names)},
              {"by_n", by_n}};
}

inline json sweep_json(const std::vector<GapPoint>& points) {
  json a = json::array();
  for (const auto& p : points)
    a.push_back(json{{"alpha", p.alpha},
                     {"t_grandparent", p.t_grandparent},
                     {"t_parent_max", p.t_parent_max}});
  return a;
}

}  // namespace dagfoci::report
