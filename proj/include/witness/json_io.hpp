#pragma once

// JSON wire format for instances and witness trees, plus a canonical
// serialization used for content hashing. All numeric payloads are exact:
// costs travel as "num/den" strings (bare integers accepted on input).

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "witness/rational.hpp"
#include "witness/tree.hpp"

namespace witness {

using json = nlohmann::ordered_json;

// A host tree plus its objective kind and optional generator metadata.
//   kind "nwt": node-weighted objectives (costs ignored, default 1).
//   kind "ewt": edge-weighted objective (costs meaningful).
struct Instance {
  std::string kind;
  Tree tree;
  json meta;  // null when absent

  bool is_node_kind() const { return kind == "nwt"; }
};

inline Rational cost_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw input_error("cost must be an integer or a \"num/den\" string");
}

inline Instance instance_from_json(const json& j) {
  if (!j.is_object()) throw input_error("instance must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw input_error("instance missing string field \"kind\"");
  Instance inst;
  inst.kind = j["kind"].get<std::string>();
  if (inst.kind != "nwt" && inst.kind != "ewt")
    throw input_error("instance kind must be \"nwt\" or \"ewt\"");
  if (!j.contains("nodes") || !j["nodes"].is_array() || !j.contains("edges") ||
      !j["edges"].is_array())
    throw input_error("instance missing \"nodes\" or \"edges\" array");
  TreeBuilder b;
  for (const auto& n : j["nodes"]) {
    if (!n.is_object() || !n.contains("id") || !n["id"].is_number_integer() ||
        !n.contains("terminal") || !n["terminal"].is_boolean())
      throw input_error("node entries need integer \"id\" and boolean \"terminal\"");
    bool fin = n.value("final", false);
    b.node(n["id"].get<NodeId>(), n["terminal"].get<bool>(), fin);
  }
  for (const auto& e : j["edges"]) {
    if (!e.is_object() || !e.contains("u") || !e.contains("v") ||
        !e["u"].is_number_integer() || !e["v"].is_number_integer())
      throw input_error("edge entries need integer \"u\" and \"v\"");
    Rational c = e.contains("cost") ? cost_from_json(e["cost"]) : Rational(1);
    b.edge(e["u"].get<NodeId>(), e["v"].get<NodeId>(), std::move(c));
  }
  inst.tree = b.build();
  if (j.contains("meta")) inst.meta = j["meta"];
  return inst;
}

// Canonical emission: nodes sorted by id, edges sorted by normalized endpoint
// pair, costs emitted only when they differ from 1, final flags only when
// set. Two structurally equal instances therefore serialize identically.
inline json instance_to_json(const Instance& inst) {
  const Tree& t = inst.tree;
  json j;
  j["kind"] = inst.kind;
  std::vector<int> order(t.size());
  for (int v = 0; v < t.size(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return t.id(a) < t.id(b); });
  j["nodes"] = json::array();
  for (int v : order) {
    json n;
    n["id"] = t.id(v);
    n["terminal"] = t.terminal(v);
    if (t.final_flag(v)) n["final"] = true;
    j["nodes"].push_back(std::move(n));
  }
  std::vector<int> eorder(t.edge_count());
  for (int e = 0; e < t.edge_count(); ++e) eorder[e] = e;
  auto ekey = [&](int e) {
    auto [u, v] = t.edge(e);
    NodeId a = t.id(u), b = t.id(v);
    return a < b ? std::pair{a, b} : std::pair{b, a};
  };
  std::sort(eorder.begin(), eorder.end(), [&](int x, int y) { return ekey(x) < ekey(y); });
  j["edges"] = json::array();
  for (int e : eorder) {
    auto [a, b] = ekey(e);
    json row;
    row["u"] = a;
    row["v"] = b;
    if (t.cost(e) != Rational(1)) row["cost"] = t.cost(e).str();
    j["edges"].push_back(std::move(row));
  }
  if (!inst.meta.is_null()) j["meta"] = inst.meta;
  return j;
}

inline WitnessTree witness_from_json(const json& j) {
  if (!j.is_object() || !j.contains("edges") || !j["edges"].is_array())
    throw input_error("witness must be an object with an \"edges\" array");
  std::vector<WitnessEdge> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw input_error("witness edges must be [u, v] integer pairs");
    edges.push_back({e[0].get<NodeId>(), e[1].get<NodeId>()});
  }
  return WitnessTree(std::move(edges));
}

inline json witness_to_json(const WitnessTree& w) {
  json j;
  j["edges"] = json::array();
  for (const auto& [a, b] : w.edges) j["edges"].push_back(json::array({a, b}));
  return j;
}

// FNV-1a over the canonical serialization; rendered as 16 hex digits.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[x & 0xf];
    x >>= 4;
  }
  return out;
}

inline std::string instance_hash(const Instance& inst) {
  return hex64(fnv1a64(instance_to_json(inst).dump()));
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw input_error(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return j;
}

inline void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace witness
