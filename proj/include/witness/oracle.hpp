#pragma once

// Desk-scale ground truth: exact minimization of either objective by
// exhaustive enumeration, over rooted markings (every laminar candidate the
// default root can express) and over all labeled trees on the terminal set,
// plus the structural decomposition check for witnesses of claw-path hosts.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "witness/instances.hpp"
#include "witness/laminar.hpp"
#include "witness/tree.hpp"

namespace witness {

struct OracleResult {
  Rational value;
  WitnessTree witness;
  unsigned long long enumerated = 0;
};

constexpr unsigned long long kDefaultOracleBudget = 10000000ULL;

// Minimum objective over every marking of the host rooted at `root_id`,
// with deterministic lexicographic tie-break on the witness edge list.
inline OracleResult optimal_laminar_at_root(const Tree& t, NodeId root_id,
                                            ObjectiveVariant variant,
                                            unsigned long long budget = kDefaultOracleBudget) {
  if (t.size() == 2) {
    WitnessTree w({make_witness_edge(t.id(0), t.id(1))});
    return {objective_value(t, w, variant), w, 1};
  }
  int root = t.index(root_id);
  if (t.degree(root) < 2) throw input_error("marking root must be an internal node");
  std::vector<int> par = parents_at(t, root);

  // One slot per internal node, sorted by id; the slot lists the children
  // the node may choose from.
  std::vector<int> internals;
  for (int v = 0; v < t.size(); ++v)
    if (t.degree(v) >= 2) internals.push_back(v);
  std::sort(internals.begin(), internals.end(), [&](int a, int b) { return t.id(a) < t.id(b); });
  std::vector<std::vector<NodeId>> kids(internals.size());
  unsigned long long total = 1;
  for (std::size_t s = 0; s < internals.size(); ++s) {
    int v = internals[s];
    for (auto [c, e] : t.neighbors(v)) {
      (void)e;
      if (c != par[v]) kids[s].push_back(t.id(c));
    }
    std::sort(kids[s].begin(), kids[s].end());
    unsigned long long f = kids[s].size();
    if (total > budget / f)
      throw input_error("marking enumeration budget exceeded");
    total *= f;
  }

  std::vector<std::size_t> odo(internals.size(), 0);
  OracleResult best;
  bool have = false;
  for (unsigned long long n = 0; n < total; ++n) {
    Marking m;
    m.root = root_id;
    for (std::size_t s = 0; s < internals.size(); ++s)
      m.choice[t.id(internals[s])] = kids[s][odo[s]];
    WitnessTree w = witness_from_marking(t, m);
    Rational v = objective_value(t, w, variant);
    if (!have || v < best.value || (v == best.value && w < best.witness)) {
      best.value = v;
      best.witness = w;
      have = true;
    }
    for (std::size_t s = odo.size(); s-- > 0;) {
      if (++odo[s] < kids[s].size()) break;
      odo[s] = 0;
    }
  }
  best.enumerated = total;
  return best;
}

inline OracleResult optimal_laminar(const Tree& t, ObjectiveVariant variant,
                                    unsigned long long budget = kDefaultOracleBudget) {
  return optimal_laminar_at_root(t, default_marking_root(t), variant, budget);
}

// Global minimum over all |R|^{|R|-2} spanning trees of the terminal set,
// enumerated through the bijective sequence encoding of labeled trees.
inline OracleResult optimal_exhaustive(const Tree& t, ObjectiveVariant variant,
                                       unsigned long long budget = kDefaultOracleBudget) {
  std::vector<NodeId> terms;
  for (int v : t.terminals()) terms.push_back(t.id(v));
  std::sort(terms.begin(), terms.end());
  const int k = static_cast<int>(terms.size());
  if (k < 2) throw input_error("need at least two terminals to enumerate witness trees");
  if (k == 2) {
    WitnessTree w({make_witness_edge(terms[0], terms[1])});
    return {objective_value(t, w, variant), w, 1};
  }
  if (k > 8) throw input_error("terminal set too large for full tree enumeration");
  unsigned long long total = 1;
  for (int i = 0; i < k - 2; ++i) total *= static_cast<unsigned long long>(k);
  if (total > budget) throw input_error("tree enumeration budget exceeded");

  // Per terminal pair, the objective ingredients of its host path: interior
  // non-terminal nodes for the node objective, edge indices for the edge
  // objective. Candidate evaluation then only increments counters.
  std::vector<int> steiner;  // dense ids of non-terminals
  std::vector<int> steiner_slot(t.size(), -1);
  for (int v = 0; v < t.size(); ++v)
    if (!t.terminal(v)) {
      steiner_slot[v] = static_cast<int>(steiner.size());
      steiner.push_back(v);
    }
  if (variant == ObjectiveVariant::node && steiner.empty())
    throw input_error("node objective needs at least one non-terminal node");
  Rational denom = variant == ObjectiveVariant::node
                       ? Rational(static_cast<long long>(steiner.size()))
                       : t.total_cost();

  std::vector<std::vector<std::vector<int>>> pair_items(
      k, std::vector<std::vector<int>>(k));
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      std::vector<int> items;
      if (variant == ObjectiveVariant::node) {
        std::vector<int> p = t.path(t.index(terms[i]), t.index(terms[j]));
        for (std::size_t x = 1; x + 1 < p.size(); ++x)
          if (!t.terminal(p[x])) items.push_back(steiner_slot[p[x]]);
      } else {
        items = t.path_edges(t.index(terms[i]), t.index(terms[j]));
      }
      pair_items[i][j] = std::move(items);
    }
  }
  int slots = variant == ObjectiveVariant::node ? static_cast<int>(steiner.size())
                                                : t.edge_count();
  std::vector<Rational> weight(slots, Rational(1));
  if (variant == ObjectiveVariant::edge)
    for (int e = 0; e < slots; ++e) weight[e] = t.cost(e);

  OracleResult best;
  bool have = false;
  std::vector<int> seq(k - 2, 0);
  std::vector<int> deg(k), pick(k);
  std::vector<char> used(k);
  std::vector<int> counts(slots);
  for (unsigned long long n = 0; n < total; ++n) {
    // Decode the sequence into k-1 edges over terminal indices.
    std::fill(deg.begin(), deg.end(), 1);
    for (int s : seq) deg[s]++;
    std::fill(used.begin(), used.end(), 0);
    std::vector<std::pair<int, int>> tree_edges;
    std::vector<int> d = deg;
    for (int s : seq) {
      int leaf = -1;
      for (int i = 0; i < k; ++i)
        if (!used[i] && d[i] == 1) {
          leaf = i;
          break;
        }
      used[leaf] = 1;
      d[leaf]--;
      d[s]--;
      tree_edges.push_back({std::min(leaf, s), std::max(leaf, s)});
    }
    int a = -1, b = -1;
    for (int i = 0; i < k; ++i)
      if (!used[i] && d[i] == 1) (a < 0 ? a : b) = i;
    tree_edges.push_back({a, b});

    std::fill(counts.begin(), counts.end(), 0);
    for (auto [i, j] : tree_edges)
      for (int it : pair_items[i][j]) counts[it]++;
    Rational sum(0);
    for (int s = 0; s < slots; ++s)
      if (counts[s] > 0) sum += weight[s] * harmonic(static_cast<std::size_t>(counts[s]));
    Rational v = sum / denom;

    if (!have || v < best.value ||
        (v == best.value && [&] {
          std::vector<WitnessEdge> es;
          for (auto [i, j] : tree_edges) es.push_back(make_witness_edge(terms[i], terms[j]));
          return WitnessTree(std::move(es)) < best.witness;
        }())) {
      std::vector<WitnessEdge> es;
      for (auto [i, j] : tree_edges) es.push_back(make_witness_edge(terms[i], terms[j]));
      best.value = v;
      best.witness = WitnessTree(std::move(es));
      have = true;
    }

    for (int s = k - 3; s >= 0; --s) {
      if (++seq[s] < k) break;
      seq[s] = 0;
    }
  }
  best.enumerated = total;
  return best;
}

// Section decomposition report for a witness of a claw-path host (a path of
// non-terminal nodes, each carrying exactly one terminal leg). Positions are
// 0-based along the path. The two end terminals always stand as centers;
// every other center is a terminal of witness degree at least two.
struct ClawSectionReport {
  std::vector<Section> sections;  // increasing center position
  bool ends_trivial = false;      // first and last sections have no arms
  bool balanced = false;          // every section has |x_l - x_r| <= 1
  bool width_ok = false;          // every section has x_l + x_r + 1 <= 5
  bool all_ok() const { return ends_trivial && balanced && width_ok; }
};

inline ClawSectionReport structural_check_claw(const Tree& t, const WitnessTree& w) {
  validate_witness(t, w);
  if (!is_laminar(t, w)) throw input_error("witness tree is not laminar");

  // Recover the path order of the host's interior nodes and their terminals.
  std::vector<int> interior;
  for (int v = 0; v < t.size(); ++v)
    if (!t.terminal(v)) interior.push_back(v);
  if (interior.size() < 2) throw input_error("host is not a claw path: too few interior nodes");
  std::vector<int> leg(t.size(), -1);
  std::vector<int> ends;
  for (int v : interior) {
    int interior_deg = 0, legs = 0;
    for (auto [u, e] : t.neighbors(v)) {
      (void)e;
      if (t.terminal(u)) {
        legs++;
        leg[v] = u;
      } else {
        interior_deg++;
      }
    }
    if (legs != 1)
      throw input_error("host is not a claw path: interior node without exactly one terminal");
    if (interior_deg > 2) throw input_error("host is not a claw path: interior branching");
    if (interior_deg <= 1) ends.push_back(v);
  }
  if (ends.size() != 2) throw input_error("host is not a claw path");
  int start = t.id(ends[0]) <= t.id(ends[1]) ? ends[0] : ends[1];
  std::vector<int> order{start};
  int prev = -1, cur = start;
  while (true) {
    int nxt = -1;
    for (auto [u, e] : t.neighbors(cur)) {
      (void)e;
      if (!t.terminal(u) && u != prev) nxt = u;
    }
    if (nxt < 0) break;
    prev = cur;
    cur = nxt;
    order.push_back(cur);
  }
  const int n = static_cast<int>(order.size());
  std::vector<int> pos(t.size(), -1);
  for (int i = 0; i < n; ++i) pos[leg[order[i]]] = i;

  // Witness adjacency by position.
  std::vector<std::vector<int>> adj(n);
  for (const auto& [x, y] : w.edges) {
    int px = pos[t.index(x)], py = pos[t.index(y)];
    if (px < 0 || py < 0) throw check_error("witness endpoint off the claw path");
    adj[px].push_back(py);
    adj[py].push_back(px);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  std::vector<char> is_center(n, 0);
  is_center[0] = is_center[n - 1] = 1;
  for (int p = 0; p < n; ++p)
    if (adj[p].size() >= 2) is_center[p] = 1;
  std::vector<int> centers;
  for (int p = 0; p < n; ++p)
    if (is_center[p]) centers.push_back(p);

  // Consecutive centers must be joined directly by a witness edge.
  for (std::size_t c = 1; c < centers.size(); ++c) {
    int a = centers[c - 1], b = centers[c];
    if (!std::binary_search(adj[a].begin(), adj[a].end(), b))
      throw input_error("witness does not decompose: centers are not chained");
  }
  // Every non-center hangs off exactly one center.
  std::vector<int> owner(n, -1);
  for (int p = 0; p < n; ++p) {
    if (is_center[p]) {
      owner[p] = p;
      continue;
    }
    if (adj[p].size() != 1 || !is_center[adj[p][0]])
      throw input_error("witness does not decompose: stray terminal");
    owner[p] = adj[p][0];
  }
  // Each star must cover a contiguous run of positions.
  ClawSectionReport rep;
  for (int c : centers) {
    int lo = c, hi = c, count = 0;
    for (int p = 0; p < n; ++p)
      if (owner[p] == c) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
        count++;
      }
    if (count != hi - lo + 1)
      throw input_error("witness does not decompose: section is not contiguous");
    rep.sections.push_back({c, c - lo, hi - c});
  }
  rep.ends_trivial = rep.sections.front().center == 0 && rep.sections.front().x_l == 0 &&
                     rep.sections.front().x_r == 0 && rep.sections.back().center == n - 1 &&
                     rep.sections.back().x_l == 0 && rep.sections.back().x_r == 0;
  rep.balanced = true;
  rep.width_ok = true;
  for (const Section& s : rep.sections) {
    if (std::abs(s.x_l - s.x_r) > 1) rep.balanced = false;
    if (s.x_l + s.x_r + 1 > 5) rep.width_ok = false;
  }
  return rep;
}

}  // namespace witness
