#pragma once

// Instance families and canonical witness trees.
//
// Two structured families drive the hard cases:
//   nwt-lb : blocks of three terminal-pair hubs on a spine, node-weighted.
//   claw-lb: a path of Steiner nodes, one terminal each, with leg cost 1 and
//            path cost alpha per edge, edge-weighted.
// Plus seeded random corpora for property suites.

#include <cstdint>
#include <vector>

#include "witness/json_io.hpp"
#include "witness/prng.hpp"
#include "witness/rational.hpp"
#include "witness/tree.hpp"

namespace witness {

// ---------------------------------------------------------------------------
// Node-weighted lower-bound family.
//
// Block i (1-based) occupies ids [10i, 10i+9]:
//   spine node      s_i      = 10i
//   hub nodes       t_{ij}   = 10i+j          (j = 1,2,3), adjacent to s_i
//   first terminals r_{ij}^1 = 10i+3+j        (adjacent to t_{ij})
//   second terminals r_{ij}^2 = 10i+6+j       (adjacent to t_{ij})
// Spine edges join s_i to s_{i+1}. 4q Steiner nodes, 6q terminals.

inline Instance gen_nwt_lb(int q) {
  if (q < 1) throw input_error("nwt-lb family needs q >= 1");
  TreeBuilder b;
  for (int i = 1; i <= q; ++i) {
    NodeId base = 10ll * i;
    b.node(base, false);
    for (int j = 1; j <= 3; ++j) {
      b.node(base + j, false);
      b.node(base + 3 + j, true);
      b.node(base + 6 + j, true);
      b.edge(base, base + j);
      b.edge(base + j, base + 3 + j);
      b.edge(base + j, base + 6 + j);
    }
    if (i > 1) b.edge(base - 10, base);
  }
  Instance inst;
  inst.kind = "nwt";
  inst.tree = b.build();
  inst.meta = json{{"family", "nwt-lb"}, {"q", q}};
  return inst;
}

// Extremal witness for gen_nwt_lb: per block, each terminal pair is joined,
// the three first-terminals form a star centered on the middle hub's first
// terminal (id 10i+5), and those centers form the inter-block chain.
inline WitnessTree canonical_nwt_witness(int q) {
  if (q < 1) throw input_error("nwt-lb family needs q >= 1");
  std::vector<WitnessEdge> edges;
  for (int i = 1; i <= q; ++i) {
    NodeId base = 10ll * i;
    for (int j = 1; j <= 3; ++j) edges.push_back({base + 3 + j, base + 6 + j});
    edges.push_back({base + 4, base + 5});
    edges.push_back({base + 6, base + 5});
    if (i < q) edges.push_back({base + 5, base + 15});
  }
  return WitnessTree(std::move(edges));
}

// ---------------------------------------------------------------------------
// Claw lower-bound family.
//
// Path s_0 .. s_{q+1} (ids 2i), one terminal r_i per Steiner node (ids 2i+1).
// Leg edges cost 1, path edges cost alpha; total cost (q+2)(1+alpha) - alpha.

inline NodeId claw_steiner_id(int i) { return 2ll * i; }
inline NodeId claw_terminal_id(int i) { return 2ll * i + 1; }

inline Instance gen_claw_lb(int q, const Rational& alpha) {
  if (q < 1) throw input_error("claw-lb family needs q >= 1");
  if (alpha.sign() < 0) throw input_error("claw-lb family needs alpha >= 0");
  TreeBuilder b;
  for (int i = 0; i <= q + 1; ++i) {
    b.node(claw_steiner_id(i), false);
    b.node(claw_terminal_id(i), true);
    b.edge(claw_steiner_id(i), claw_terminal_id(i), Rational(1));
    if (i > 0) b.edge(claw_steiner_id(i - 1), claw_steiner_id(i), alpha);
  }
  Instance inst;
  inst.kind = "ewt";
  inst.tree = b.build();
  inst.meta = json{{"family", "claw-lb"}, {"q", q}, {"alpha", alpha.str()}};
  return inst;
}

// ---------------------------------------------------------------------------
// Section calculus on the claw family. A section is a star centered at
// terminal index `center` covering x_l terminals to its left and x_r to its
// right; consecutive sections are chained center to center.

struct Section {
  int center = 0;
  int x_l = 0;
  int x_r = 0;
};

// Closed-form cost contribution of one interior section.
inline Rational section_value(const Rational& alpha, int x_l, int x_r) {
  if (x_l < 0 || x_r < 0) throw input_error("section arms must be nonnegative");
  Rational h_sum(0);
  for (int j = 2; j <= x_l + 1; ++j) h_sum += harmonic(j);
  for (int j = 1; j <= x_r + 1; ++j) h_sum += harmonic(j);
  return alpha * h_sum + Rational(x_l + x_r) + harmonic(x_l + x_r + 2);
}

// Section value divided by the section's share of the instance cost,
// (x_l + x_r + 1) legs worth of (1 + alpha).
inline Rational section_value_normalized(const Rational& alpha, int x_l, int x_r) {
  Rational share = Rational(x_l + x_r + 1) * (Rational(1) + alpha);
  if (share.is_zero()) throw input_error("degenerate section normalization");
  return section_value(alpha, x_l, x_r) / share;
}

// Witness edges for a section partition of terminal indices 0..q+1, without
// any constraint on the end sections. Windows must abut and cover exactly.
inline std::vector<WitnessEdge> section_witness_edges(int q, const std::vector<Section>& sections) {
  if (sections.empty()) throw input_error("empty section list");
  int expect = 0;
  for (const auto& s : sections) {
    if (s.x_l < 0 || s.x_r < 0) throw input_error("section arms must be nonnegative");
    int lo = s.center - s.x_l, hi = s.center + s.x_r;
    if (lo != expect) throw input_error("section windows must abut and cover 0..q+1");
    if (hi > q + 1) throw input_error("section window exceeds the terminal range");
    expect = hi + 1;
  }
  if (expect != q + 2) throw input_error("section windows must cover the full terminal range");
  std::vector<WitnessEdge> edges;
  for (const auto& s : sections) {
    for (int j = s.center - s.x_l; j <= s.center + s.x_r; ++j) {
      if (j == s.center) continue;
      edges.push_back({claw_terminal_id(s.center), claw_terminal_id(j)});
    }
  }
  for (std::size_t i = 1; i < sections.size(); ++i)
    edges.push_back({claw_terminal_id(sections[i - 1].center), claw_terminal_id(sections[i].center)});
  return edges;
}

// Full builder: additionally requires the forced trivial end sections at
// indices 0 and q+1.
inline WitnessTree build_section_witness(int q, const std::vector<Section>& sections) {
  if (sections.size() < 2) throw input_error("section witness needs the two end sections");
  const Section& first = sections.front();
  const Section& last = sections.back();
  if (first.center != 0 || first.x_l != 0 || first.x_r != 0)
    throw input_error("left end section must be the trivial star at index 0");
  if (last.center != q + 1 || last.x_l != 0 || last.x_r != 0)
    throw input_error("right end section must be the trivial star at index q+1");
  return WitnessTree(section_witness_edges(q, sections));
}

// The all-(1,1) interior tiling; q must be divisible by 3.
inline std::vector<Section> uniform_section_tiling(int q) {
  if (q < 3 || q % 3 != 0) throw input_error("uniform tiling needs q divisible by 3");
  std::vector<Section> s{{0, 0, 0}};
  for (int c = 2; c <= q - 1; c += 3) s.push_back({c, 1, 1});
  s.push_back({q + 1, 0, 0});
  return s;
}

// ---------------------------------------------------------------------------
// Random corpora. Both generators grow a random attachment tree; the ca kind
// then hangs 1-2 terminals per Steiner node (leaf Steiner nodes always get
// one so every host leaf is a terminal), the ewt kind declares the tree's
// leaves terminal and draws small rational costs, occasionally zero.

inline Instance gen_random_ca(int n_steiner, std::uint64_t seed) {
  if (n_steiner < 1) throw input_error("random ca instance needs >= 1 Steiner node");
  Rng rng(seed);
  std::vector<int> parent(n_steiner, -1);
  std::vector<int> degree(n_steiner, 0);
  for (int i = 1; i < n_steiner; ++i) {
    parent[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(i)));
    degree[i]++;
    degree[parent[i]]++;
  }
  TreeBuilder b;
  for (int i = 0; i < n_steiner; ++i) b.node(i, false);
  for (int i = 1; i < n_steiner; ++i) b.edge(parent[i], i);
  NodeId next_terminal = n_steiner;
  for (int i = 0; i < n_steiner; ++i) {
    int count;
    if (degree[i] <= 1) {
      count = 1 + (rng.below(3) == 0 ? 1 : 0);
    } else {
      std::uint64_t roll = rng.below(4);
      count = roll < 2 ? 0 : (roll == 2 ? 1 : 2);
    }
    for (int c = 0; c < count; ++c) {
      b.node(next_terminal, true);
      b.edge(i, next_terminal);
      next_terminal++;
    }
  }
  Instance inst;
  inst.kind = "nwt";
  inst.tree = b.build();
  inst.meta = json{{"family", "random-ca"}, {"n", n_steiner}, {"seed", seed}};
  return inst;
}

inline Instance gen_random_ewt(int n_nodes, std::uint64_t seed, long cost_num_max = 6,
                               long cost_den_max = 4) {
  if (n_nodes < 2) throw input_error("random ewt instance needs >= 2 nodes");
  if (cost_num_max < 1 || cost_den_max < 1) throw input_error("cost range must be positive");
  Rng rng(seed);
  std::vector<int> parent(n_nodes, -1);
  std::vector<int> degree(n_nodes, 0);
  for (int i = 1; i < n_nodes; ++i) {
    parent[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(i)));
    degree[i]++;
    degree[parent[i]]++;
  }
  TreeBuilder b;
  for (int i = 0; i < n_nodes; ++i) b.node(i, degree[i] <= 1);
  bool any_positive = false;
  for (int i = 1; i < n_nodes; ++i) {
    Rational c(0);
    if (rng.below(6) != 0) {
      long num = 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(cost_num_max)));
      long den = 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(cost_den_max)));
      c = Rational(num, den);
      any_positive = true;
    }
    // Defer: first edge gets cost 1 afterwards if everything drew zero.
    b.edge(parent[i], i, std::move(c));
  }
  if (!any_positive) b.edges_[0].cost = Rational(1);
  Instance inst;
  inst.kind = "ewt";
  inst.tree = b.build();
  inst.meta = json{{"family", "random-ewt"}, {"n", n_nodes}, {"seed", seed}};
  return inst;
}

}  // namespace witness
