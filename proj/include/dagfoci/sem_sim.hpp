#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dagfoci/common.hpp"
#include "dagfoci/dataset.hpp"
#include "dagfoci/rng.hpp"

namespace dagfoci::sem {

// Structural equations are closed prefix-notation expressions over the
// node's parent names, the literal `eps` (the node's own noise draw), and
// numeric constants:
//   expr := number | name | eps | (op expr...)
//   op   := + | - | * | arctan | sin | sign | abs | sq | sqrtabs
// + and * take two or more arguments, - exactly two, the rest exactly one.
enum class Op { add, sub, mul, arctan, sin, sign, abs, sq, sqrtabs };

struct Expr {
  enum class Kind { number, var, eps, call };
  Kind kind = Kind::eps;
  double value = 0.0;           // number
  std::string name;             // var
  Op op = Op::add;              // call
  std::vector<Expr> args;       // call
  std::size_t var_index = 0;    // var, resolved before evaluation

  static Expr number(double v) {
    Expr e;
    e.kind = Kind::number;
    e.value = v;
    return e;
  }
  static Expr var(std::string n) {
    Expr e;
    e.kind = Kind::var;
    e.name = std::move(n);
    return e;
  }
  static Expr eps() { return Expr{}; }
  static Expr call(Op op, std::vector<Expr> args) {
    Expr e;
    e.kind = Kind::call;
    e.op = op;
    e.args = std::move(args);
    return e;
  }

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Kind::number: return a.value == b.value;
      case Kind::var: return a.name == b.name;
      case Kind::eps: return true;
      case Kind::call: return a.op == b.op && a.args == b.args;
    }
    return false;
  }
};

namespace detail {

inline const char* op_name(Op op) {
  switch (op) {
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "*";
    case Op::arctan: return "arctan";
    case Op::sin: return "sin";
    case Op::sign: return "sign";
    case Op::abs: return "abs";
    case Op::sq: return "sq";
    case Op::sqrtabs: return "sqrtabs";
  }
  return "?";
}

inline bool lookup_op(std::string_view s, Op& op) {
  if (s == "+") op = Op::add;
  else if (s == "-") op = Op::sub;
  else if (s == "*") op = Op::mul;
  else if (s == "arctan") op = Op::arctan;
  else if (s == "sin") op = Op::sin;
  else if (s == "sign") op = Op::sign;
  else if (s == "abs") op = Op::abs;
  else if (s == "sq") op = Op::sq;
  else if (s == "sqrtabs") op = Op::sqrtabs;
  else return false;
  return true;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct ExprParser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t'))
      ++pos;
  }

  std::string_view token() {
    skip_ws();
    if (pos >= text.size()) throw Error("unexpected end of expression");
    if (text[pos] == '(' || text[pos] == ')') return text.substr(pos++, 1);
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != ' ' && text[pos] != '\t' &&
           text[pos] != '(' && text[pos] != ')')
      ++pos;
    return text.substr(start, pos - start);
  }

  Expr parse() {
    std::string_view tok = token();
    if (tok == ")") throw Error("unexpected ')' in expression");
    if (tok == "(") {
      std::string_view head = token();
      Op op;
      if (head == "(" || head == ")" || !lookup_op(head, op))
        throw Error("unknown operator '" + std::string(head) + "'");
      std::vector<Expr> args;
      for (;;) {
        skip_ws();
        if (pos >= text.size()) throw Error("missing ')' in expression");
        if (text[pos] == ')') {
          ++pos;
          break;
        }
        args.push_back(parse());
      }
      std::size_t arity = args.size();
      bool ok = (op == Op::add || op == Op::mul)   ? arity >= 2
                : (op == Op::sub)                  ? arity == 2
                                                   : arity == 1;
      if (!ok)
        throw Error(std::string("wrong arity for '") + op_name(op) + "'");
      return Expr::call(op, std::move(args));
    }
    if (tok == "eps") return Expr::eps();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec == std::errc() && ptr == tok.data() + tok.size())
      return Expr::number(v);
    for (char c : tok)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
        throw Error("bad token '" + std::string(tok) + "' in expression");
    return Expr::var(std::string(tok));
  }
};

}  // namespace detail

inline Expr parse_expr(std::string_view text) {
  detail::ExprParser p{text};
  Expr e = p.parse();
  p.skip_ws();
  if (p.pos != text.size())
    throw Error("trailing input after expression: '" +
                std::string(text.substr(p.pos)) + "'");
  return e;
}

inline std::string print_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::number: return detail::format_double(e.value);
    case Expr::Kind::var: return e.name;
    case Expr::Kind::eps: return "eps";
    case Expr::Kind::call: {
      std::string out = "(";
      out += detail::op_name(e.op);
      for (const auto& a : e.args) {
        out += ' ';
        out += print_expr(a);
      }
      out += ')';
      return out;
    }
  }
  return "";
}

inline void vars_referenced(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == Expr::Kind::var) {
    if (std::find(out.begin(), out.end(), e.name) == out.end())
      out.push_back(e.name);
  } else if (e.kind == Expr::Kind::call) {
    for (const auto& a : e.args) vars_referenced(a, out);
  }
}

struct NodeSpec {
  std::string name;
  Expr eq;                   // defaults to pure noise
  double noise_scale = 1.0;  // eps ~ noise_scale * N(0, 1)

  friend bool operator==(const NodeSpec& a, const NodeSpec& b) {
    return a.name == b.name && a.eq == b.eq && a.noise_scale == b.noise_scale;
  }
};

// A structural causal model: nodes with equations, plus the parent->child
// edge list. Node order is the column order of sampled datasets.
struct DagSpec {
  std::string name;
  std::vector<NodeSpec> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  friend bool operator==(const DagSpec& a, const DagSpec& b) {
    return a.name == b.name && a.nodes == b.nodes && a.edges == b.edges;
  }

  std::size_t node_index(std::string_view n) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].name == n) return i;
    throw Error("unknown node '" + std::string(n) + "'");
  }

  std::vector<std::size_t> parents_of(std::size_t v) const {
    std::vector<std::size_t> out;
    for (const auto& [p, c] : edges)
      if (c == v) out.push_back(p);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<std::size_t> children_of(std::size_t v) const {
    std::vector<std::size_t> out;
    for (const auto& [p, c] : edges)
      if (p == v) out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
  }

  // Topological order; throws on a cycle.
  std::vector<std::size_t> topological_order() const {
    std::vector<std::size_t> indeg(nodes.size(), 0);
    for (const auto& [p, c] : edges) ++indeg[c];
    std::vector<std::size_t> queue, order;
    for (std::size_t v = 0; v < nodes.size(); ++v)
      if (indeg[v] == 0) queue.push_back(v);
    while (!queue.empty()) {
      std::size_t v = queue.back();
      queue.pop_back();
      order.push_back(v);
      for (const auto& [p, c] : edges)
        if (p == v && --indeg[c] == 0) queue.push_back(c);
    }
    if (order.size() != nodes.size()) throw Error("graph has a cycle");
    return order;
  }

  void validate() const {
    if (nodes.empty()) throw Error("spec has no nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].name.empty()) throw Error("empty node name");
      if (!(nodes[i].noise_scale >= 0.0) ||
          !std::isfinite(nodes[i].noise_scale))
        throw Error("noise scale must be finite and non-negative");
      for (std::size_t j = i + 1; j < nodes.size(); ++j)
        if (nodes[i].name == nodes[j].name)
          throw Error("duplicate node name '" + nodes[i].name + "'");
    }
    for (std::size_t k = 0; k < edges.size(); ++k) {
      auto [p, c] = edges[k];
      if (p >= nodes.size() || c >= nodes.size())
        throw Error("edge endpoint out of range");
      if (p == c) throw Error("self edge on '" + nodes[p].name + "'");
      for (std::size_t l = k + 1; l < edges.size(); ++l)
        if (edges[l] == edges[k])
          throw Error("duplicate edge " + nodes[p].name + " -> " +
                      nodes[c].name);
    }
    topological_order();
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      std::vector<std::string> used;
      vars_referenced(nodes[v].eq, used);
      auto pa = parents_of(v);
      for (const auto& u : used) {
        std::size_t ui = node_index(u);
        if (std::find(pa.begin(), pa.end(), ui) == pa.end())
          throw Error("equation of '" + nodes[v].name +
                      "' references non-parent '" + u + "'");
      }
    }
  }
};

namespace detail {

inline void resolve_vars(Expr& e, const DagSpec& spec) {
  if (e.kind == Expr::Kind::var) {
    e.var_index = spec.node_index(e.name);
  } else if (e.kind == Expr::Kind::call) {
    for (auto& a : e.args) resolve_vars(a, spec);
  }
}

inline double eval(const Expr& e,
                   const std::vector<std::vector<double>>& values,
                   std::size_t row, double eps) {
  switch (e.kind) {
    case Expr::Kind::number: return e.value;
    case Expr::Kind::var: return values[e.var_index][row];
    case Expr::Kind::eps: return eps;
    case Expr::Kind::call: break;
  }
  switch (e.op) {
    case Op::add: {
      double s = 0.0;
      for (const auto& a : e.args) s += eval(a, values, row, eps);
      return s;
    }
    case Op::sub:
      return eval(e.args[0], values, row, eps) -
             eval(e.args[1], values, row, eps);
    case Op::mul: {
      double s = 1.0;
      for (const auto& a : e.args) s *= eval(a, values, row, eps);
      return s;
    }
    case Op::arctan: return std::atan(eval(e.args[0], values, row, eps));
    case Op::sin: return std::sin(eval(e.args[0], values, row, eps));
    case Op::sign: {
      double v = eval(e.args[0], values, row, eps);
      return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    }
    case Op::abs: return std::fabs(eval(e.args[0], values, row, eps));
    case Op::sq: {
      double v = eval(e.args[0], values, row, eps);
      return v * v;
    }
    case Op::sqrtabs: return std::sqrt(std::fabs(eval(e.args[0], values, row, eps)));
  }
  return 0.0;
}

}  // namespace detail

// Draws n joint samples. Each node's noise stream is keyed by (seed, node
// name), never by visit order, so any topological order of the same spec
// yields identical columns. Columns appear in spec node order.
inline Dataset sample(const DagSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  if (n < 2) throw Error("need at least 2 rows");
  std::vector<std::vector<double>> values(spec.nodes.size());
  std::vector<std::size_t> order = spec.topological_order();

  for (std::size_t v : order) {
    const NodeSpec& node = spec.nodes[v];
    rng::Stream noise(rng::mix(seed, rng::hash_string(node.name)));
    Expr eq = node.eq;
    detail::resolve_vars(eq, spec);
    auto& col = values[v];
    col.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
      double eps = node.noise_scale * noise.normal();
      col[r] = detail::eval(eq, values, r, eps);
      if (!std::isfinite(col[r]))
        throw Error("non-finite value generated at node '" + node.name + "'");
    }
  }
  Dataset d;
  for (const auto& node : spec.nodes) d.names.push_back(node.name);
  d.columns = std::move(values);
  d.validate();
  return d;
}

// Exogenous replacement law used by do-interventions.
struct NoiseLaw {
  double shift = 0.0;
  double scale = 1.0;
};

// Graph surgery for do(node): incoming edges are removed and the equation is
// replaced by an exogenous draw shift + scale * N(0, 1). Outgoing edges and
// all other nodes are untouched. Sample the result with a fresh seed: node
// noise streams are keyed by name, so reusing the observational seed would
// reuse its draws.
inline DagSpec do_intervene(const DagSpec& spec, std::string_view node,
                            NoiseLaw law = {}) {
  DagSpec out = spec;
  std::size_t v = out.node_index(node);
  out.edges.erase(std::remove_if(out.edges.begin(), out.edges.end(),
                                 [v](const auto& e) { return e.second == v; }),
                  out.edges.end());
  out.nodes[v].noise_scale = law.scale;
  out.nodes[v].eq = law.shift == 0.0
                        ? Expr::eps()
                        : Expr::call(Op::add, {Expr::number(law.shift),
                                               Expr::eps()});
  return out;
}

// Graph-derived truth for one spec. markov_boundary[v] is
// parents + children + spouses (co-parents of children), all sorted.
// tree_neighborhood[v] is false iff two boundary members share a cycle of the
// skeleton, detected via biconnected components: any block with >= 3 vertices
// is 2-connected, so two boundary members inside one such block always lie on
// a common simple cycle, and every cycle lives inside one block.
struct GroundTruth {
  std::vector<std::vector<std::size_t>> parents;
  std::vector<std::vector<std::size_t>> children;
  std::vector<std::vector<std::size_t>> spouses;
  std::vector<std::vector<std::size_t>> markov_boundary;
  std::vector<bool> tree_neighborhood;
};

namespace detail {

// Vertex sets of the biconnected components of the undirected skeleton.
inline std::vector<std::vector<std::size_t>> biconnected_blocks(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    auto [a, b] = edges[k];
    adj[a].emplace_back(b, k);
    adj[b].emplace_back(a, k);
  }
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<std::size_t> edge_stack;
  std::vector<std::vector<std::size_t>> blocks;  // edge index lists
  int time = 0;

  std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t u,
                                                          std::size_t pe) {
    disc[u] = low[u] = time++;
    for (auto [w, ei] : adj[u]) {
      if (ei == pe) continue;
      if (disc[w] < 0) {
        edge_stack.push_back(ei);
        dfs(w, ei);
        low[u] = std::min(low[u], low[w]);
        if (low[w] >= disc[u]) {
          std::vector<std::size_t> block;
          for (;;) {
            std::size_t e = edge_stack.back();
            edge_stack.pop_back();
            block.push_back(e);
            if (e == ei) break;
          }
          blocks.push_back(std::move(block));
        }
      } else if (disc[w] < disc[u]) {
        edge_stack.push_back(ei);
        low[u] = std::min(low[u], disc[w]);
      }
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (disc[v] < 0) dfs(v, static_cast<std::size_t>(-1));

  std::vector<std::vector<std::size_t>> out;
  for (const auto& block : blocks) {
    std::vector<std::size_t> verts;
    for (std::size_t ei : block) {
      verts.push_back(edges[ei].first);
      verts.push_back(edges[ei].second);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    out.push_back(std::move(verts));
  }
  return out;
}

}  // namespace detail

inline GroundTruth ground_truth(const DagSpec& spec) {
  spec.validate();
  const std::size_t n = spec.nodes.size();
  GroundTruth g;
  g.parents.resize(n);
  g.children.resize(n);
  g.spouses.resize(n);
  g.markov_boundary.resize(n);
  g.tree_neighborhood.assign(n, true);

  for (std::size_t v = 0; v < n; ++v) {
    g.parents[v] = spec.parents_of(v);
    g.children[v] = spec.children_of(v);
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::size_t> sp;
    for (std::size_t c : g.children[v])
      for (std::size_t p : g.parents[c])
        if (p != v) sp.push_back(p);
    std::sort(sp.begin(), sp.end());
    sp.erase(std::unique(sp.begin(), sp.end()), sp.end());
    // spouses exclude nodes already adjacent to v
    std::vector<std::size_t> adj = g.parents[v];
    adj.insert(adj.end(), g.children[v].begin(), g.children[v].end());
    std::sort(adj.begin(), adj.end());
    std::vector<std::size_t> strict;
    std::set_difference(sp.begin(), sp.end(), adj.begin(), adj.end(),
                        std::back_inserter(strict));
    g.spouses[v] = std::move(strict);

    std::vector<std::size_t> mb = g.parents[v];
    mb.insert(mb.end(), g.children[v].begin(), g.children[v].end());
    mb.insert(mb.end(), g.spouses[v].begin(), g.spouses[v].end());
    std::sort(mb.begin(), mb.end());
    mb.erase(std::unique(mb.begin(), mb.end()), mb.end());
    g.markov_boundary[v] = std::move(mb);
  }

  auto blocks = detail::biconnected_blocks(n, spec.edges);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& block : blocks) {
      if (block.size() < 3) continue;
      std::size_t hits = 0;
      for (std::size_t b : block)
        if (std::binary_search(g.markov_boundary[v].begin(),
                               g.markov_boundary[v].end(), b))
          ++hits;
      if (hits >= 2) {
        g.tree_neighborhood[v] = false;
        break;
      }
    }
  }
  return g;
}

// --- serialization ------------------------------------------------------
//
// Line-oriented format, one record per line, '#' starts a comment:
//   spec NAME
//   node NAME noise=SCALE eq=EXPR     (eq consumes the rest of the line)
//   edge PARENT CHILD
// Node lines appear in column order; print/parse round-trips losslessly.

inline std::string print_dag_spec(const DagSpec& spec) {
  std::string out = "spec " + spec.name + "\n";
  for (const auto& node : spec.nodes) {
    out += "node " + node.name +
           " noise=" + detail::format_double(node.noise_scale) +
           " eq=" + print_expr(node.eq) + "\n";
  }
  for (const auto& [p, c] : spec.edges)
    out += "edge " + spec.nodes[p].name + " " + spec.nodes[c].name + "\n";
  return out;
}

inline DagSpec parse_dag_spec(std::string_view text) {
  DagSpec spec;
  bool saw_name = false;
  std::vector<std::pair<std::string, std::string>> edge_names;
  std::size_t line_no = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i != text.size() && text[i] != '\n') continue;
    std::string_view line = dagfoci::detail::trim(text.substr(start, i - start));
    start = i + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto err = [&](const std::string& msg) {
      return Error("line " + std::to_string(line_no) + ": " + msg);
    };
    std::size_t sp = line.find(' ');
    std::string_view kind = line.substr(0, sp);
    std::string_view rest =
        sp == std::string_view::npos ? std::string_view{} : line.substr(sp + 1);
    if (kind == "spec") {
      if (saw_name) throw err("duplicate spec line");
      spec.name = std::string(dagfoci::detail::trim(rest));
      saw_name = true;
    } else if (kind == "node") {
      std::size_t sp2 = rest.find(' ');
      if (sp2 == std::string_view::npos) throw err("node needs attributes");
      NodeSpec node;
      node.name = std::string(dagfoci::detail::trim(rest.substr(0, sp2)));
      std::string_view attrs = rest.substr(sp2 + 1);
      bool saw_eq = false;
      while (!attrs.empty()) {
        attrs = dagfoci::detail::trim(attrs);
        if (attrs.rfind("eq=", 0) == 0) {
          node.eq = parse_expr(attrs.substr(3));
          saw_eq = true;
          break;  // eq consumes the rest of the line
        }
        if (attrs.rfind("noise=", 0) == 0) {
          std::size_t end = attrs.find(' ');
          std::string_view val = attrs.substr(6, end == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : end - 6);
          auto [p, ec] =
              std::from_chars(val.data(), val.data() + val.size(),
                              node.noise_scale);
          if (ec != std::errc() || p != val.data() + val.size())
            throw err("bad noise value '" + std::string(val) + "'");
          attrs = end == std::string_view::npos ? std::string_view{}
                                                : attrs.substr(end + 1);
        } else {
          throw err("unknown attribute in '" + std::string(attrs) + "'");
        }
      }
      if (!saw_eq) throw err("node '" + node.name + "' has no eq=");
      spec.nodes.push_back(std::move(node));
    } else if (kind == "edge") {
      std::size_t sp2 = rest.find(' ');
      if (sp2 == std::string_view::npos) throw err("edge needs two nodes");
      edge_names.emplace_back(
          std::string(dagfoci::detail::trim(rest.substr(0, sp2))),
          std::string(dagfoci::detail::trim(rest.substr(sp2 + 1))));
    } else {
      throw err("unknown record '" + std::string(kind) + "'");
    }
  }
  for (const auto& [p, c] : edge_names)
    spec.edges.emplace_back(spec.node_index(p), spec.node_index(c));
  spec.validate();
  return spec;
}

// --- builtin models -----------------------------------------------------

namespace detail {

inline void add_node(DagSpec& spec, std::string name, std::string eq,
                     double noise = 1.0) {
  NodeSpec node;
  node.name = std::move(name);
  node.eq = parse_expr(eq);
  node.noise_scale = noise;
  spec.nodes.push_back(std::move(node));
}

inline void add_edge(DagSpec& spec, std::string_view p, std::string_view c) {
  spec.edges.emplace_back(spec.node_index(p), spec.node_index(c));
}

}  // namespace detail

// 16-node benchmark network. The skeleton is a tree, so every node has a
// tree neighborhood.
inline DagSpec builtin_example1() {
  DagSpec s;
  s.name = "example1";
  detail::add_node(s, "X1", "eps");
  detail::add_node(s, "X2", "eps");
  detail::add_node(s, "X3", "eps");
  detail::add_node(s, "X4", "eps");
  detail::add_node(s, "X5", "(+ (- X1 (arctan X2)) eps)");
  detail::add_node(s, "X6", "(+ X2 X4 (sq X3) eps)");
  detail::add_node(s, "X7", "(+ (sin X3) eps)");
  detail::add_node(s, "X8", "eps");
  detail::add_node(s, "X9", "(+ (sin (+ X6 eps)) (abs X10))");
  detail::add_node(s, "X10", "eps");
  detail::add_node(s, "X11", "(+ (* X6 (- X12 X8)) eps)");
  detail::add_node(s, "X12", "eps");
  detail::add_node(s, "X13", "(arctan (+ (sq X9) eps))");
  detail::add_node(s, "X14", "(+ (sin X11) eps)");
  detail::add_node(s, "X15", "(+ (sqrtabs X12) eps)");
  detail::add_node(s, "X16", "(+ (sin X12) eps)");
  detail::add_edge(s, "X1", "X5");
  detail::add_edge(s, "X2", "X5");
  detail::add_edge(s, "X2", "X6");
  detail::add_edge(s, "X3", "X6");
  detail::add_edge(s, "X3", "X7");
  detail::add_edge(s, "X4", "X6");
  detail::add_edge(s, "X6", "X9");
  detail::add_edge(s, "X6", "X11");
  detail::add_edge(s, "X8", "X11");
  detail::add_edge(s, "X9", "X13");
  detail::add_edge(s, "X10", "X9");
  detail::add_edge(s, "X11", "X14");
  detail::add_edge(s, "X12", "X11");
  detail::add_edge(s, "X12", "X15");
  detail::add_edge(s, "X12", "X16");
  s.validate();
  return s;
}

// 7-node network whose X5 neighborhood fails the tree condition (X2, X3 share
// the cycle X2-X5-X3-X1-X2 of the skeleton).
inline DagSpec builtin_example2() {
  DagSpec s;
  s.name = "example2";
  detail::add_node(s, "X1", "eps");
  detail::add_node(s, "X2", "(arctan (+ X1 eps))");
  detail::add_node(s, "X3", "(arctan (+ X1 eps))");
  detail::add_node(s, "X4", "(arctan (+ X1 eps))");
  detail::add_node(s, "X5", "(arctan (+ X2 X3 eps))");
  detail::add_node(s, "X6", "(arctan (+ X4 X5 eps))");
  detail::add_node(s, "X7", "(arctan (+ X4 X5 eps))");
  detail::add_edge(s, "X1", "X2");
  detail::add_edge(s, "X1", "X3");
  detail::add_edge(s, "X1", "X4");
  detail::add_edge(s, "X2", "X5");
  detail::add_edge(s, "X3", "X5");
  detail::add_edge(s, "X4", "X6");
  detail::add_edge(s, "X5", "X6");
  detail::add_edge(s, "X4", "X7");
  detail::add_edge(s, "X5", "X7");
  s.validate();
  return s;
}

// Four-node model Y = X1 * X2 with X1 = sign(X3) + a e1, X2 = |X3| + a e2:
// at a = 0 the response is a noiseless function of its two parents yet the
// unconditional coefficient ranks the grandparent X3 above both.
inline DagSpec builtin_codec_violation(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw Error("violation alpha must be finite and non-negative");
  DagSpec s;
  s.name = "codec_violation";
  detail::add_node(s, "X1", "(+ (sign X3) eps)", alpha);
  detail::add_node(s, "X2", "(+ (abs X3) eps)", alpha);
  detail::add_node(s, "X3", "eps");
  detail::add_node(s, "Y", "(* X1 X2)", 0.0);
  detail::add_edge(s, "X3", "X1");
  detail::add_edge(s, "X3", "X2");
  detail::add_edge(s, "X1", "Y");
  detail::add_edge(s, "X2", "Y");
  s.validate();
  return s;
}

inline DagSpec builtin(std::string_view name, double violation_alpha = 0.0) {
  if (name == "example1") return builtin_example1();
  if (name == "example2") return builtin_example2();
  if (name == "codec_violation") return builtin_codec_violation(violation_alpha);
  throw Error("unknown builtin spec '" + std::string(name) + "'");
}

}  // namespace dagfoci::sem
