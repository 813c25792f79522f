#pragma once

// Host trees, witness trees, imposed count vectors, and the two exact
// objectives. A host tree carries terminal flags (terminals must be leaves)
// and optional per-node final flags plus per-edge nonnegative rational costs.
// A witness tree is a spanning tree on the terminal set whose value is
// measured through the host's paths.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "witness/rational.hpp"

namespace witness {

using NodeId = long long;
using WitnessEdge = std::pair<NodeId, NodeId>;

inline WitnessEdge make_witness_edge(NodeId a, NodeId b) {
  if (a == b) throw input_error("witness edge with equal endpoints");
  return a < b ? WitnessEdge{a, b} : WitnessEdge{b, a};
}

// Spanning tree on the host's terminal set (or, for stripped hosts, on the
// final-node set). Edges are kept sorted and normalized so that equal trees
// have equal representations and lexicographic comparison is meaningful.
struct WitnessTree {
  std::vector<WitnessEdge> edges;

  WitnessTree() = default;
  explicit WitnessTree(std::vector<WitnessEdge> raw) {
    for (auto& e : raw) e = make_witness_edge(e.first, e.second);
    std::sort(raw.begin(), raw.end());
    for (std::size_t i = 1; i < raw.size(); ++i)
      if (raw[i] == raw[i - 1]) throw input_error("duplicate witness edge");
    edges = std::move(raw);
  }

  bool operator==(const WitnessTree& o) const { return edges == o.edges; }
  bool operator!=(const WitnessTree& o) const { return edges != o.edges; }
  bool operator<(const WitnessTree& o) const { return edges < o.edges; }
};

// Which nodes a witness path is charged to, and how endpoints are treated.
//   node:            strictly interior nodes of each path; no final indicator.
//   component_node:  every node of each path including endpoints, plus one
//                    extra count on each final-flagged node.
enum class NodeMode { node, component_node };

class Tree;

// Mutable builder; `build()` validates and freezes.
class TreeBuilder {
 public:
  TreeBuilder& node(NodeId id, bool terminal, bool final_flag = false) {
    nodes_.push_back({id, terminal, final_flag});
    return *this;
  }
  TreeBuilder& edge(NodeId u, NodeId v, Rational cost = Rational(1)) {
    edges_.push_back({u, v, std::move(cost)});
    return *this;
  }
  Tree build() const;

  struct NodeSpec {
    NodeId id;
    bool terminal;
    bool final_flag;
  };
  struct EdgeSpec {
    NodeId u, v;
    Rational cost;
  };
  std::vector<NodeSpec> nodes_;
  std::vector<EdgeSpec> edges_;
};

class Tree {
 public:
  // Dense-index accessors. External ids are arbitrary 64-bit integers;
  // everything internal runs on dense indices 0..n-1 in builder order.
  int size() const { return static_cast<int>(id_.size()); }
  int edge_count() const { return static_cast<int>(edge_.size()); }
  NodeId id(int v) const { return id_[v]; }
  int index(NodeId external) const {
    auto it = idx_.find(external);
    if (it == idx_.end()) throw input_error("unknown node id " + std::to_string(external));
    return it->second;
  }
  bool has_id(NodeId external) const { return idx_.count(external) != 0; }
  bool terminal(int v) const { return terminal_[v] != 0; }
  bool final_flag(int v) const { return final_[v] != 0; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  const std::vector<std::pair<int, int>>& neighbors(int v) const { return adj_[v]; }
  std::array<int, 2> edge(int e) const { return edge_[e]; }
  const Rational& cost(int e) const { return cost_[e]; }
  const Rational& total_cost() const { return total_cost_; }
  const std::vector<int>& terminals() const { return terminals_; }
  int terminal_count() const { return static_cast<int>(terminals_.size()); }
  int steiner_count() const { return size() - terminal_count(); }

  // Node sequence of the unique path between two nodes, endpoints included.
  std::vector<int> path(int a, int b) const {
    std::vector<int> up_a, up_b;
    int x = a, y = b;
    while (depth_[x] > depth_[y]) {
      up_a.push_back(x);
      x = parent_[x];
    }
    while (depth_[y] > depth_[x]) {
      up_b.push_back(y);
      y = parent_[y];
    }
    while (x != y) {
      up_a.push_back(x);
      up_b.push_back(y);
      x = parent_[x];
      y = parent_[y];
    }
    up_a.push_back(x);
    up_a.insert(up_a.end(), up_b.rbegin(), up_b.rend());
    return up_a;
  }

  // Edge-index sequence of the unique path between two nodes.
  std::vector<int> path_edges(int a, int b) const {
    std::vector<int> lo, hi;
    int x = a, y = b;
    while (depth_[x] > depth_[y]) {
      lo.push_back(parent_edge_[x]);
      x = parent_[x];
    }
    while (depth_[y] > depth_[x]) {
      hi.push_back(parent_edge_[y]);
      y = parent_[y];
    }
    while (x != y) {
      lo.push_back(parent_edge_[x]);
      hi.push_back(parent_edge_[y]);
      x = parent_[x];
      y = parent_[y];
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
  }

  friend class TreeBuilder;

 private:
  std::vector<NodeId> id_;
  std::map<NodeId, int> idx_;
  std::vector<char> terminal_, final_;
  std::vector<std::vector<std::pair<int, int>>> adj_;  // (neighbor, edge index)
  std::vector<std::array<int, 2>> edge_;
  std::vector<Rational> cost_;
  Rational total_cost_;
  std::vector<int> terminals_;
  std::vector<int> parent_, parent_edge_, depth_;
};

inline Tree TreeBuilder::build() const {
  Tree t;
  if (nodes_.empty()) throw input_error("tree with no nodes");
  for (const auto& n : nodes_) {
    if (t.idx_.count(n.id)) throw input_error("duplicate node id " + std::to_string(n.id));
    t.idx_[n.id] = static_cast<int>(t.id_.size());
    t.id_.push_back(n.id);
    t.terminal_.push_back(n.terminal ? 1 : 0);
    t.final_.push_back(n.final_flag ? 1 : 0);
  }
  int n = t.size();
  t.adj_.assign(n, {});
  t.total_cost_ = Rational(0);
  for (const auto& e : edges_) {
    if (e.cost.sign() < 0) throw input_error("negative edge cost");
    int u = t.index(e.u), v = t.index(e.v);
    if (u == v) throw input_error("self-loop edge");
    int ei = static_cast<int>(t.edge_.size());
    t.edge_.push_back({u, v});
    t.cost_.push_back(e.cost);
    t.total_cost_ += e.cost;
    t.adj_[u].push_back({v, ei});
    t.adj_[v].push_back({u, ei});
  }
  if (t.edge_count() != n - 1) throw input_error("edge count is not node count minus one");
  // Root at dense 0 and check connectivity while building parent tables.
  t.parent_.assign(n, -1);
  t.parent_edge_.assign(n, -1);
  t.depth_.assign(n, -1);
  std::vector<int> queue{0};
  t.depth_[0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    for (auto [w, ei] : t.adj_[v]) {
      if (t.depth_[w] < 0) {
        t.depth_[w] = t.depth_[v] + 1;
        t.parent_[w] = v;
        t.parent_edge_[w] = ei;
        queue.push_back(w);
      }
    }
  }
  if (static_cast<int>(queue.size()) != n) throw input_error("tree is not connected");
  for (int v = 0; v < n; ++v) {
    if (t.terminal_[v] && t.degree(v) != 1 && n > 1)
      throw input_error("terminal node " + std::to_string(t.id_[v]) + " has degree != 1");
    if (t.terminal_[v]) t.terminals_.push_back(v);
  }
  return t;
}

// The node set a witness tree must span: terminals for the plain variants,
// final-flagged nodes for stripped component hosts.
inline std::vector<int> witness_endpoints(const Tree& t, bool on_final_nodes) {
  std::vector<int> out;
  for (int v = 0; v < t.size(); ++v) {
    bool in = on_final_nodes ? t.final_flag(v) : t.terminal(v);
    if (in) out.push_back(v);
  }
  return out;
}

// Checks that W is a spanning tree on the given endpoint set of the host.
inline void validate_witness(const Tree& t, const WitnessTree& w, bool on_final_nodes = false) {
  std::vector<int> eps = witness_endpoints(t, on_final_nodes);
  if (eps.empty()) throw input_error("witness endpoint set is empty");
  std::vector<char> allowed(t.size(), 0);
  for (int v : eps) allowed[v] = 1;
  if (w.edges.size() + 1 != eps.size())
    throw input_error("witness tree has " + std::to_string(w.edges.size()) + " edges, expected " +
                      std::to_string(eps.size() == 0 ? 0 : eps.size() - 1));
  std::vector<int> uf(t.size());
  for (int v = 0; v < t.size(); ++v) uf[v] = v;
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (const auto& [a, b] : w.edges) {
    int u = t.index(a), v = t.index(b);
    if (!allowed[u] || !allowed[v]) throw input_error("witness edge endpoint is not a valid leaf");
    int ru = find(u), rv = find(v);
    if (ru == rv) throw input_error("witness edges contain a cycle");
    uf[ru] = rv;
  }
}

// Per-node counts imposed by the witness tree, one entry per host node.
// Mode `node` counts strictly interior path nodes; mode `component_node`
// counts every path node and then adds the final-node indicator.
inline std::vector<int> impose_node_counts(const Tree& t, const WitnessTree& w, NodeMode mode) {
  std::vector<int> count(t.size(), 0);
  for (const auto& [a, b] : w.edges) {
    std::vector<int> p = t.path(t.index(a), t.index(b));
    if (mode == NodeMode::node) {
      for (std::size_t i = 1; i + 1 < p.size(); ++i) count[p[i]]++;
    } else {
      for (int v : p) count[v]++;
    }
  }
  if (mode == NodeMode::component_node) {
    for (int v = 0; v < t.size(); ++v)
      if (t.final_flag(v)) count[v]++;
  }
  return count;
}

// Per-edge counts imposed by the witness tree: how many witness paths run
// through each host edge (every edge of the path counts, including the
// leaf-incident first and last edges).
inline std::vector<int> impose_edge_counts(const Tree& t, const WitnessTree& w) {
  std::vector<int> count(t.edge_count(), 0);
  for (const auto& [a, b] : w.edges) {
    for (int e : t.path_edges(t.index(a), t.index(b))) count[e]++;
  }
  return count;
}

// Node objective: average of H_{w(v)} over the host's non-terminal nodes.
inline Rational eval_nwt(const Tree& t, const WitnessTree& w, NodeMode mode = NodeMode::node) {
  validate_witness(t, w, /*on_final_nodes=*/false);
  std::vector<int> count = impose_node_counts(t, w, mode);
  Rational sum(0);
  long steiner = 0;
  for (int v = 0; v < t.size(); ++v) {
    if (t.terminal(v)) continue;
    steiner++;
    sum += harmonic(static_cast<std::size_t>(count[v]));
  }
  if (steiner == 0) throw input_error("node objective over a host with no interior nodes");
  return sum / Rational(steiner);
}

// As eval_nwt but for stripped hosts whose witness spans the final nodes.
inline Rational eval_component_objective(const Tree& t, const WitnessTree& w) {
  validate_witness(t, w, /*on_final_nodes=*/true);
  std::vector<int> count = impose_node_counts(t, w, NodeMode::component_node);
  Rational sum(0);
  long nodes = 0;
  for (int v = 0; v < t.size(); ++v) {
    if (t.terminal(v)) continue;
    nodes++;
    sum += harmonic(static_cast<std::size_t>(count[v]));
  }
  if (nodes == 0) throw input_error("component objective over an empty host");
  return sum / Rational(nodes);
}

// Edge objective: cost-weighted average of H over the imposed edge counts.
inline Rational eval_ewt(const Tree& t, const WitnessTree& w) {
  validate_witness(t, w, /*on_final_nodes=*/false);
  if (t.total_cost().is_zero()) throw input_error("edge objective with zero total cost");
  std::vector<int> count = impose_edge_counts(t, w);
  Rational sum(0);
  for (int e = 0; e < t.edge_count(); ++e)
    sum += t.cost(e) * harmonic(static_cast<std::size_t>(count[e]));
  return sum / t.total_cost();
}

// Removes the terminals, marking as final every remaining node that had a
// terminal neighbor. Also reports, per final node, how many terminals it
// carried. Fails if some leaf of the host is not a terminal or nothing
// remains after stripping.
struct StrippedHost {
  Tree tree;                                      // final flags set
  std::map<NodeId, std::vector<NodeId>> carried;  // final node -> its terminals
};

inline StrippedHost strip_terminals(const Tree& t) {
  for (int v = 0; v < t.size(); ++v)
    if (t.degree(v) <= 1 && !t.terminal(v) && t.size() > 1)
      throw input_error("host leaf " + std::to_string(t.id(v)) + " is not a terminal");
  TreeBuilder b;
  StrippedHost out;
  int kept = 0;
  for (int v = 0; v < t.size(); ++v) {
    if (t.terminal(v)) continue;
    bool fin = false;
    for (auto [w, ei] : t.neighbors(v)) {
      (void)ei;
      if (t.terminal(w)) {
        fin = true;
        out.carried[t.id(v)].push_back(t.id(w));
      }
    }
    b.node(t.id(v), /*terminal=*/false, /*final_flag=*/fin);
    kept++;
  }
  if (kept == 0) throw input_error("host has no interior nodes to keep");
  for (int e = 0; e < t.edge_count(); ++e) {
    auto [u, v] = t.edge(e);
    if (t.terminal(u) || t.terminal(v)) continue;
    b.edge(t.id(u), t.id(v), t.cost(e));
  }
  out.tree = b.build();
  for (auto& [fid, terms] : out.carried) std::sort(terms.begin(), terms.end());
  return out;
}

// True when every interior node has at most two terminal neighbors.
inline bool terminal_bound_ok(const Tree& t, int bound = 2) {
  for (int v = 0; v < t.size(); ++v) {
    if (t.terminal(v)) continue;
    int c = 0;
    for (auto [w, ei] : t.neighbors(v)) {
      (void)ei;
      if (t.terminal(w)) c++;
    }
    if (c > bound) return false;
  }
  return true;
}

}  // namespace witness
