#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dagfoci/rng.hpp"
#include "dagfoci/sem_sim.hpp"

using namespace dagfoci;
using sem::DagSpec;
using sem::Expr;
using sem::Op;

namespace {

// All simple skeleton cycles through brute-force path enumeration; feasible
// for the small random graphs used below.
bool cycle_meets_boundary_twice(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
    const std::vector<std::size_t>& boundary) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  auto in_boundary = [&](std::size_t v) {
    return std::binary_search(boundary.begin(), boundary.end(), v);
  };
  // enumerate simple cycles rooted at their smallest vertex
  bool found = false;
  std::vector<std::size_t> path;
  std::vector<bool> on_path(n, false);
  std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t v,
                                                          std::size_t root) {
    if (found) return;
    path.push_back(v);
    on_path[v] = true;
    for (std::size_t w : adj[v]) {
      if (w == root && path.size() >= 3) {
        std::size_t hits = 0;
        for (std::size_t u : path) hits += in_boundary(u);
        if (hits >= 2) found = true;
      } else if (!on_path[w] && w > root) {
        dfs(w, root);
      }
    }
    path.pop_back();
    on_path[v] = false;
  };
  for (std::size_t root = 0; root < n && !found; ++root) dfs(root, root);
  return found;
}

DagSpec random_dag(rng::Stream& s, std::size_t n, double edge_prob) {
  DagSpec spec;
  spec.name = "random";
  for (std::size_t v = 0; v < n; ++v)
    sem::detail::add_node(spec, "N" + std::to_string(v), "eps");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (s.uniform01() < edge_prob) spec.edges.emplace_back(a, b);
  spec.validate();
  return spec;
}

}  // namespace

TEST_CASE("expression grammar round-trips", "[sem]") {
  for (const char* text : {
           "eps",
           "X3",
           "2.5",
           "-0.75",
           "(+ X1 X2)",
           "(+ X2 X4 (sq X3) eps)",
           "(- X12 X8)",
           "(* X6 (- X12 X8))",
           "(arctan (+ (sq X9) eps))",
           "(sqrtabs X12)",
           "(sign (sin (abs X1)))",
           "(* 0.5 (+ eps X1 1.5))",
       }) {
    Expr e = sem::parse_expr(text);
    CHECK(sem::print_expr(e) == text);
    CHECK(sem::parse_expr(sem::print_expr(e)) == e);
  }
}

TEST_CASE("expression parser rejects malformed input", "[sem]") {
  CHECK_THROWS_WITH(sem::parse_expr("(cos X1)"), "unknown operator 'cos'");
  CHECK_THROWS_WITH(sem::parse_expr("(+ X1)"), "wrong arity for '+'");
  CHECK_THROWS_WITH(sem::parse_expr("(- X1)"), "wrong arity for '-'");
  CHECK_THROWS_WITH(sem::parse_expr("(- X1 X2 X3)"), "wrong arity for '-'");
  CHECK_THROWS_WITH(sem::parse_expr("(sin X1 X2)"), "wrong arity for 'sin'");
  CHECK_THROWS_WITH(sem::parse_expr("(+ X1 X2"), "missing ')' in expression");
  CHECK_THROWS_WITH(sem::parse_expr(")"), "unexpected ')' in expression");
  CHECK_THROWS_WITH(sem::parse_expr(""), "unexpected end of expression");
  CHECK_THROWS_WITH(sem::parse_expr("(+ X1 X2) junk"),
                    "trailing input after expression: 'junk'");
  CHECK_THROWS(sem::parse_expr("(+ a$b c)"));
}

TEST_CASE("every operator evaluates to its library meaning", "[sem]") {
  DagSpec spec;
  spec.name = "ops";
  sem::detail::add_node(spec, "A", "eps");
  sem::detail::add_node(spec, "Tatan", "(arctan A)", 0.0);
  sem::detail::add_node(spec, "Tsin", "(sin A)", 0.0);
  sem::detail::add_node(spec, "Tsign", "(sign A)", 0.0);
  sem::detail::add_node(spec, "Tabs", "(abs A)", 0.0);
  sem::detail::add_node(spec, "Tsq", "(sq A)", 0.0);
  sem::detail::add_node(spec, "Tsqrt", "(sqrtabs A)", 0.0);
  sem::detail::add_node(spec, "Tadd", "(+ A A 1.5)", 0.0);
  sem::detail::add_node(spec, "Tsub", "(- A 2)", 0.0);
  sem::detail::add_node(spec, "Tmul", "(* A A 3)", 0.0);
  for (std::size_t v = 1; v < spec.nodes.size(); ++v)
    spec.edges.emplace_back(0, v);
  spec.validate();

  Dataset d = sem::sample(spec, 64, 99);
  const auto& a = d.columns[0];
  for (std::size_t r = 0; r < a.size(); ++r) {
    CHECK(d.columns[1][r] == std::atan(a[r]));
    CHECK(d.columns[2][r] == std::sin(a[r]));
    CHECK(d.columns[3][r] == (a[r] > 0 ? 1.0 : a[r] < 0 ? -1.0 : 0.0));
    CHECK(d.columns[4][r] == std::fabs(a[r]));
    CHECK(d.columns[5][r] == a[r] * a[r]);
    CHECK(d.columns[6][r] == std::sqrt(std::fabs(a[r])));
    CHECK(d.columns[7][r] == a[r] + a[r] + 1.5);
    CHECK(d.columns[8][r] == a[r] - 2.0);
    CHECK(d.columns[9][r] == a[r] * a[r] * 3.0);
  }
}

TEST_CASE("sampled columns satisfy their equations exactly", "[sem]") {
  DagSpec spec = sem::builtin_example1();
  std::size_t n = 200;
  std::uint64_t seed = 31;
  Dataset d = sem::sample(spec, n, seed);

  // X6 = X2 + X4 + X3^2 + eps with the node's own noise stream
  rng::Stream noise(rng::mix(seed, rng::hash_string("X6")));
  const auto& x2 = d.columns[d.column_index("X2")];
  const auto& x3 = d.columns[d.column_index("X3")];
  const auto& x4 = d.columns[d.column_index("X4")];
  const auto& x6 = d.columns[d.column_index("X6")];
  for (std::size_t r = 0; r < n; ++r) {
    double eps = noise.normal();
    CHECK(x6[r] == x2[r] + x4[r] + x3[r] * x3[r] + eps);
  }
}

TEST_CASE("sampling is seed-deterministic and seed-sensitive", "[sem]") {
  DagSpec spec = sem::builtin_example2();
  Dataset a = sem::sample(spec, 100, 7);
  Dataset b = sem::sample(spec, 100, 7);
  Dataset c = sem::sample(spec, 100, 8);
  CHECK(a.columns == b.columns);
  CHECK(a.columns != c.columns);
}

TEST_CASE("edge declaration order does not change the draw", "[sem]") {
  DagSpec spec = sem::builtin_example1();
  DagSpec shuffled = spec;
  std::reverse(shuffled.edges.begin(), shuffled.edges.end());
  Dataset a = sem::sample(spec, 150, 12);
  Dataset b = sem::sample(shuffled, 150, 12);
  CHECK(a.columns == b.columns);
}

TEST_CASE("noise streams are keyed by node name", "[sem]") {
  DagSpec spec;
  spec.name = "pair";
  sem::detail::add_node(spec, "A", "eps");
  sem::detail::add_node(spec, "B", "eps");
  spec.validate();
  Dataset d = sem::sample(spec, 100, 5);
  CHECK(d.columns[0] != d.columns[1]);

  // renaming a node keeps every other column bitwise identical
  DagSpec renamed = spec;
  renamed.nodes[1].name = "C";
  Dataset e = sem::sample(renamed, 100, 5);
  CHECK(d.columns[0] == e.columns[0]);
  CHECK(d.columns[1] != e.columns[1]);
}

TEST_CASE("do-intervention rewires exactly one node", "[sem]") {
  DagSpec spec = sem::builtin_example1();
  std::size_t x9 = spec.node_index("X9");
  DagSpec cut = sem::do_intervene(spec, "X9", {2.0, 3.0});

  CHECK(cut.parents_of(x9).empty());
  CHECK(cut.children_of(x9) == spec.children_of(x9));
  CHECK(cut.nodes[x9].noise_scale == 3.0);
  for (std::size_t v = 0; v < spec.nodes.size(); ++v) {
    if (v == x9) continue;
    CHECK(cut.nodes[v] == spec.nodes[v]);
    CHECK(cut.parents_of(v) == spec.parents_of(v));
  }
  cut.validate();

  Dataset d = sem::sample(cut, 4000, 77);
  const auto& col = d.columns[x9];
  double mean = 0.0;
  for (double v : col) mean += v;
  mean /= static_cast<double>(col.size());
  double var = 0.0;
  for (double v : col) var += (v - mean) * (v - mean);
  var /= static_cast<double>(col.size() - 1);
  CHECK(std::fabs(mean - 2.0) < 0.2);
  CHECK(std::fabs(std::sqrt(var) - 3.0) < 0.2);

  // with no shift the equation is a bare noise draw
  DagSpec plain = sem::do_intervene(spec, "X9");
  CHECK(plain.nodes[x9].eq == Expr::eps());
  CHECK(plain.nodes[x9].noise_scale == 1.0);
}

TEST_CASE("ground truth of the tree benchmark", "[sem]") {
  DagSpec spec = sem::builtin_example1();
  sem::GroundTruth g = sem::ground_truth(spec);
  std::size_t x6 = spec.node_index("X6");
  std::size_t x11 = spec.node_index("X11");

  CHECK(g.parents[x6] == std::vector<std::size_t>{1, 2, 3});
  CHECK(g.children[x6] == std::vector<std::size_t>{8, 10});
  CHECK(g.spouses[x6] == std::vector<std::size_t>{7, 9, 11});
  CHECK(g.markov_boundary[x6] ==
        std::vector<std::size_t>{1, 2, 3, 7, 8, 9, 10, 11});

  CHECK(g.parents[x11] == std::vector<std::size_t>{5, 7, 11});
  CHECK(g.children[x11] == std::vector<std::size_t>{13});
  CHECK(g.spouses[x11].empty());
  CHECK(g.markov_boundary[x11] == std::vector<std::size_t>{5, 7, 11, 13});

  // the skeleton is a tree: every neighborhood is cycle-free
  for (std::size_t v = 0; v < spec.nodes.size(); ++v)
    CHECK(g.tree_neighborhood[v]);
}

TEST_CASE("ground truth of the cyclic benchmark", "[sem]") {
  DagSpec spec = sem::builtin_example2();
  sem::GroundTruth g = sem::ground_truth(spec);
  std::size_t x5 = spec.node_index("X5");
  CHECK(g.parents[x5] == std::vector<std::size_t>{1, 2});
  CHECK(g.markov_boundary[x5] == std::vector<std::size_t>{1, 2, 3, 5, 6});
  CHECK(!g.tree_neighborhood[x5]);
}

TEST_CASE("tree-neighborhood flag agrees with cycle enumeration", "[sem]") {
  rng::Stream s(0xc1c1e5);
  for (int rep = 0; rep < 60; ++rep) {
    std::size_t n = 3 + s.below(5);
    DagSpec spec = random_dag(s, n, 0.35);
    sem::GroundTruth g = sem::ground_truth(spec);
    for (std::size_t v = 0; v < n; ++v) {
      bool cyc = cycle_meets_boundary_twice(n, spec.edges,
                                            g.markov_boundary[v]);
      CHECK(g.tree_neighborhood[v] == !cyc);
    }
  }
}

TEST_CASE("violation model collapses to its grandparent at zero noise",
          "[sem]") {
  DagSpec spec = sem::builtin_codec_violation(0.0);
  Dataset d = sem::sample(spec, 500, 321);
  const auto& y = d.columns[d.column_index("Y")];
  const auto& x3 = d.columns[d.column_index("X3")];
  for (std::size_t r = 0; r < y.size(); ++r)
    CHECK(y[r] == x3[r]);  // sign(x) * |x| == x, and Y carries no noise
}

TEST_CASE("spec text round-trips", "[sem]") {
  for (const DagSpec& spec :
       {sem::builtin_example1(), sem::builtin_example2(),
        sem::builtin_codec_violation(0.25)}) {
    std::string text = sem::print_dag_spec(spec);
    DagSpec back = sem::parse_dag_spec(text);
    CHECK(back == spec);
  }
}

TEST_CASE("spec text accepts comments and reports bad lines", "[sem]") {
  DagSpec s = sem::parse_dag_spec(
      "# a comment\n"
      "spec demo\n"
      "\n"
      "node A noise=0.5 eq=eps\n"
      "node B noise=1 eq=(arctan A)\n"
      "edge A B\n");
  CHECK(s.name == "demo");
  REQUIRE(s.nodes.size() == 2);
  CHECK(s.nodes[0].noise_scale == 0.5);
  CHECK(s.edges == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}});

  CHECK_THROWS_WITH(sem::parse_dag_spec("spec a\nspec b\n"),
                    "line 2: duplicate spec line");
  CHECK_THROWS_WITH(sem::parse_dag_spec("wat x\n"),
                    "line 1: unknown record 'wat'");
  CHECK_THROWS_WITH(sem::parse_dag_spec("node A noise=zz eq=eps\n"),
                    "line 1: bad noise value 'zz'");
  CHECK_THROWS_WITH(sem::parse_dag_spec("node A noise=1\n"),
                    "line 1: node 'A' has no eq=");
  CHECK_THROWS(sem::parse_dag_spec("node A eq=eps\nedge A B\n"));
}

TEST_CASE("structural validation catches bad graphs", "[sem]") {
  DagSpec dup;
  sem::detail::add_node(dup, "A", "eps");
  sem::detail::add_node(dup, "A", "eps");
  CHECK_THROWS_WITH(dup.validate(), "duplicate node name 'A'");

  DagSpec self;
  sem::detail::add_node(self, "A", "eps");
  self.edges.emplace_back(0, 0);
  CHECK_THROWS_WITH(self.validate(), "self edge on 'A'");

  DagSpec cyc;
  sem::detail::add_node(cyc, "A", "eps");
  sem::detail::add_node(cyc, "B", "eps");
  cyc.edges.emplace_back(0, 1);
  cyc.edges.emplace_back(1, 0);
  CHECK_THROWS_WITH(cyc.validate(), "graph has a cycle");

  DagSpec orphan;
  sem::detail::add_node(orphan, "A", "eps");
  sem::detail::add_node(orphan, "B", "(sq A)");
  CHECK_THROWS_WITH(orphan.validate(),
                    "equation of 'B' references non-parent 'A'");

  DagSpec dup_edge = sem::builtin_example2();
  dup_edge.edges.push_back(dup_edge.edges.front());
  CHECK_THROWS(dup_edge.validate());

  CHECK_THROWS_WITH(sem::builtin("nope"), "unknown builtin spec 'nope'");
  CHECK_THROWS_WITH(sem::sample(sem::builtin_example1(), 1, 3),
                    "need at least 2 rows");
}
