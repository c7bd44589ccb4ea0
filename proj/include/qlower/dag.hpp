#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "qlower/circuit.hpp"

namespace qlower {

/// Dependency graph over op indices: B depends on A iff they share a qubit and
/// A is the latest earlier op on that qubit (direct edges only).
struct DepGraph {
  std::vector<std::vector<std::uint32_t>> succ;
  std::vector<std::vector<std::uint32_t>> pred;

  std::size_t size() const { return succ.size(); }
};

inline DepGraph dag_of(const Circuit& c) {
  DepGraph g;
  g.succ.resize(c.ops.size());
  g.pred.resize(c.ops.size());
  std::vector<int> last(c.num_qubits, -1);
  for (std::uint32_t i = 0; i < c.ops.size(); ++i) {
    const Operation& op = c.ops[i];
    auto link = [&](QubitId q) {
      int p = last[q];
      if (p >= 0) {
        auto& s = g.succ[p];
        if (std::find(s.begin(), s.end(), i) == s.end()) {
          s.push_back(i);
          g.pred[i].push_back(static_cast<std::uint32_t>(p));
        }
      }
      last[q] = static_cast<int>(i);
    };
    if (op.is_global())
      for (QubitId q = 0; q < c.num_qubits; ++q) link(q);
    else
      for (QubitId q : op.qubits) link(q);
  }
  return g;
}

/// True when `order` is a permutation of op indices that respects every edge.
inline bool is_topological_order(const DepGraph& g, const std::vector<std::uint32_t>& order) {
  if (order.size() != g.size()) return false;
  std::vector<std::uint32_t> pos(g.size());
  std::vector<bool> seen(g.size(), false);
  for (std::uint32_t i = 0; i < order.size(); ++i) {
    if (order[i] >= g.size() || seen[order[i]]) return false;
    seen[order[i]] = true;
    pos[order[i]] = i;
  }
  for (std::uint32_t a = 0; a < g.size(); ++a)
    for (std::uint32_t b : g.succ[a])
      if (pos[a] >= pos[b]) return false;
  return true;
}

inline Circuit reorder(const Circuit& c, const std::vector<std::uint32_t>& order) {
  Circuit out(c.num_qubits);
  for (std::uint32_t i : order) out.ops.push_back(c.ops[i]);
  return out;
}

struct GateTally {
  std::map<GateKind, std::uint64_t> by_kind;
  std::uint64_t total{0};
  std::uint64_t two_qubit{0};
  double gr_pulse_area{0};  // sum of |theta| over GR gates

  std::uint64_t count(GateKind k) const {
    auto it = by_kind.find(k);
    return it == by_kind.end() ? 0 : it->second;
  }
};

inline GateTally gate_counts(const Circuit& c) {
  GateTally t;
  for (const Operation& op : c.ops) {
    ++t.by_kind[op.gate.kind];
    ++t.total;
    if (op.is_two_qubit()) ++t.two_qubit;
    if (op.gate.kind == GateKind::Gr) t.gr_pulse_area += std::abs(op.gate.params[0]);
  }
  return t;
}

}  // namespace qlower
