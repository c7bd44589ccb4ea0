#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "qlower/circuit.hpp"
#include "qlower/dag.hpp"
#include "qlower/unitary.hpp"

namespace qlower {

struct CouplingGraph {
  std::uint32_t num_vertices{0};
  std::set<std::pair<QubitId, QubitId>> edges;  // stored with a < b

  CouplingGraph() = default;
  CouplingGraph(std::uint32_t n, std::vector<std::pair<QubitId, QubitId>> es) : num_vertices(n) {
    for (auto [a, b] : es) add_edge(a, b);
  }

  void add_edge(QubitId a, QubitId b) {
    if (a == b || a >= num_vertices || b >= num_vertices)
      throw std::invalid_argument("bad coupling edge");
    edges.emplace(std::min(a, b), std::max(a, b));
  }

  bool has_edge(QubitId a, QubitId b) const {
    return edges.count({std::min(a, b), std::max(a, b)}) != 0;
  }

  static CouplingGraph line(std::uint32_t n) {
    CouplingGraph g;
    g.num_vertices = n;
    for (QubitId i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
  }

  static CouplingGraph star(std::uint32_t n) {
    CouplingGraph g;
    g.num_vertices = n;
    for (QubitId i = 1; i < n; ++i) g.add_edge(0, i);
    return g;
  }

  bool connected() const {
    if (num_vertices == 0) return false;
    std::vector<bool> seen(num_vertices, false);
    std::vector<QubitId> stack = {0};
    seen[0] = true;
    while (!stack.empty()) {
      QubitId v = stack.back();
      stack.pop_back();
      for (auto [a, b] : edges) {
        QubitId other = (a == v) ? b : (b == v ? a : v);
        if (other != v && !seen[other]) {
          seen[other] = true;
          stack.push_back(other);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
  }
};

/// Routed form of a circuit plus the wire bookkeeping: logical qubit q starts
/// on wire initial_permutation[q] and its state ends on final_permutation[q].
struct RoutedCircuit {
  Circuit circuit;
  std::vector<QubitId> initial_permutation;
  std::vector<QubitId> final_permutation;
  std::uint64_t swap_count{0};
};

/// Oracle check: unitary_of(routed) * P(initial) ~ P(final) * unitary_of(orig)
/// up to global phase. With an identity initial placement this is exactly
/// equiv_perm against the final permutation.
inline bool routed_equiv(const RoutedCircuit& r, const Circuit& original, double tol) {
  Mat lhs = unitary_of(r.circuit) * permutation_matrix(r.initial_permutation);
  Mat rhs = permutation_matrix(r.final_permutation) * unitary_of(original);
  return equiv_phase(lhs, rhs, tol);
}

/// Contiguous op range whose two-qubit interaction graph is a star.
struct StarSegment {
  std::size_t begin{0};  // op-index range [begin, end)
  std::size_t end{0};
  QubitId hub{0};
  std::vector<QubitId> leaves;  // in first-interaction order
};

/// Maximal contiguous segments of two-qubit ops sharing one hub qubit with at
/// least two distinct leaves. Single-qubit ops never break a segment; every
/// two-qubit op lands in at most one segment.
inline std::vector<StarSegment> find_star_subcircuits(const Circuit& c) {
  std::vector<StarSegment> out;
  std::vector<QubitId> cands;
  std::vector<std::pair<QubitId, QubitId>> pairs;  // 2q ops of the open segment
  std::size_t seg_begin = 0, seg_last = 0;

  auto close = [&]() {
    if (pairs.empty()) return;
    QubitId hub = 0;
    bool have_hub = false;
    if (cands.size() == 1) {
      hub = cands[0];
      have_hub = true;
    }
    if (have_hub) {
      std::vector<QubitId> leaves;
      for (auto [a, b] : pairs) {
        QubitId leaf = (a == hub) ? b : a;
        if (std::find(leaves.begin(), leaves.end(), leaf) == leaves.end()) leaves.push_back(leaf);
      }
      if (leaves.size() >= 2) out.push_back({seg_begin, seg_last + 1, hub, std::move(leaves)});
    }
    cands.clear();
    pairs.clear();
  };

  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    const Operation& op = c.ops[i];
    if (op.is_global()) {  // a global gate touches everything: close any segment
      close();
      continue;
    }
    if (!op.is_two_qubit()) continue;
    QubitId a = op.qubits[0], b = op.qubits[1];
    if (pairs.empty()) {
      cands = {a, b};
      seg_begin = i;
    } else {
      std::vector<QubitId> next;
      for (QubitId h : cands)
        if (h == a || h == b) next.push_back(h);
      if (next.empty()) {
        close();
        cands = {a, b};
        seg_begin = i;
      } else {
        cands = std::move(next);
      }
    }
    pairs.emplace_back(a, b);
    seg_last = i;
  }
  close();
  return out;
}

namespace route_detail {

inline std::vector<QubitId> inverse_perm(const std::vector<QubitId>& p) {
  std::vector<QubitId> inv(p.size());
  for (QubitId q = 0; q < p.size(); ++q) inv[p[q]] = q;
  return inv;
}

inline Operation mapped(const Operation& op, const std::vector<QubitId>& cur) {
  Operation m = op;
  for (QubitId& q : m.qubits) q = cur[q];
  return m;
}

}  // namespace route_detail

/// Routes one star segment onto a line: the hub starts second from the edge,
/// the first leaf on the edge, and every further leaf costs one CX-adjacent
/// SWAP as the hub walks down the line. Ops outside the segment are mapped
/// through the current placement. Total SWAP count is (star size) - 2.
inline RoutedCircuit route_star_to_line(const Circuit& c, const StarSegment& seg,
                                        const CouplingGraph& line) {
  using route_detail::mapped;
  const std::uint32_t n_star = static_cast<std::uint32_t>(seg.leaves.size()) + 1;
  if (line.num_vertices < c.num_qubits || line.num_vertices < n_star)
    throw std::invalid_argument("line too short for the star");

  // Initial placement: first leaf at 0, hub at 1, remaining leaves down the
  // line, every other qubit on the leftover vertices in index order.
  std::vector<QubitId> cur(c.num_qubits, UINT32_MAX);
  cur[seg.leaves[0]] = 0;
  cur[seg.hub] = 1;
  for (std::size_t k = 1; k < seg.leaves.size(); ++k)
    cur[seg.leaves[k]] = static_cast<QubitId>(k + 1);
  QubitId next_free = n_star;
  for (QubitId q = 0; q < c.num_qubits; ++q)
    if (cur[q] == UINT32_MAX) cur[q] = next_free++;

  RoutedCircuit out;
  out.circuit = Circuit(c.num_qubits);
  out.initial_permutation = cur;

  auto emit_2q = [&](const Operation& op) {
    Operation m = mapped(op, cur);
    if (!line.has_edge(m.qubits[0], m.qubits[1]))
      throw std::logic_error("routed op does not sit on a line edge");
    out.circuit.push(m);
  };

  std::set<QubitId> seen_leaves;
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    const Operation& op = c.ops[i];
    if (i < seg.begin || i >= seg.end || !op.is_two_qubit()) {
      if (op.is_two_qubit())
        throw std::invalid_argument("circuit has two-qubit ops outside the star segment");
      out.circuit.push(mapped(op, cur));
      continue;
    }
    QubitId a = op.qubits[0], b = op.qubits[1];
    QubitId leaf = (a == seg.hub) ? b : a;
    bool first_visit = seen_leaves.insert(leaf).second;
    if (!first_visit) {
      emit_2q(op);  // leaf must still be adjacent to the hub
      continue;
    }
    if (leaf == seg.leaves[0]) {
      emit_2q(op);
      continue;
    }
    // New leaf: interact, then swap the hub one step down the line.
    QubitId hub_pos = cur[seg.hub], leaf_pos = cur[leaf];
    if (leaf_pos != hub_pos + 1)
      throw std::invalid_argument("star segment interacts leaves out of line order");
    emit_2q(op);
    out.circuit.push(swap_gate(), {hub_pos, leaf_pos});
    ++out.swap_count;
    std::swap(cur[seg.hub], cur[leaf]);
  }
  out.final_permutation = cur;
  return out;
}

/// Rewrites each adjacent CX(a,b), SWAP(a,b) pair into two CX gates.
inline Circuit merge_cx_swap(const Circuit& c) {
  Circuit out = c;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < out.ops.size(); ++i) {
      const Operation& op = out.ops[i];
      if (op.gate.kind != GateKind::Cx) continue;
      QubitId a = op.qubits[0], b = op.qubits[1];
      std::size_t j = i + 1;
      while (j < out.ops.size() && !(out.ops[j].touches(a) || out.ops[j].touches(b))) ++j;
      if (j >= out.ops.size() || out.ops[j].gate.kind != GateKind::Swap) continue;
      QubitId sa = out.ops[j].qubits[0], sb = out.ops[j].qubits[1];
      if (!((sa == a && sb == b) || (sa == b && sb == a))) continue;
      // CX(a,b) . SWAP(a,b)  ==  CX(b,a) then CX(a,b)  (orientation pinned by
      // the 4x4 oracle in the tests).
      out.ops[i] = Operation(cx_gate(), {b, a});
      out.ops[j] = Operation(cx_gate(), {a, b});
      changed = true;
    }
  }
  return out;
}

/// Cancels adjacent equal CX pairs, then folds each adjacent opposite pair
/// CX(a,b), CX(b,a) into a single CX(b,a) plus a virtual SWAP implemented by
/// relabeling every later op. The accumulated relabeling is reported as the
/// final permutation.
inline RoutedCircuit mirror_swaps(const Circuit& c) {
  RoutedCircuit out;
  out.circuit = Circuit(c.num_qubits);
  std::vector<QubitId> wire(c.num_qubits);  // logical label -> current wire
  for (QubitId q = 0; q < c.num_qubits; ++q) wire[q] = q;
  out.initial_permutation = wire;

  std::vector<int> last_on(c.num_qubits, -1);  // index into out.ops
  auto note = [&](const Operation& op, int idx) {
    for (QubitId q : op.qubits) last_on[q] = idx;
    if (op.is_global())
      for (QubitId q = 0; q < c.num_qubits; ++q) last_on[q] = idx;
  };

  for (const Operation& raw : c.ops) {
    Operation op = route_detail::mapped(raw, wire);
    if (op.gate.kind == GateKind::Cx && !out.circuit.ops.empty()) {
      int prev = static_cast<int>(out.circuit.ops.size()) - 1;
      const Operation& back = out.circuit.ops.back();
      bool adjacent = back.gate.kind == GateKind::Cx && last_on[op.qubits[0]] == prev &&
                      last_on[op.qubits[1]] == prev;
      if (adjacent && back.qubits == op.qubits) {
        // Equal orientation cancels outright.
        out.circuit.ops.pop_back();
        for (QubitId q = 0; q < c.num_qubits; ++q)
          if (last_on[q] == prev) last_on[q] = -1;
        for (int idx = prev - 1; idx >= 0; --idx) {
          const Operation& o = out.circuit.ops[idx];
          if (o.is_global()) {
            for (QubitId q = 0; q < c.num_qubits; ++q)
              if (last_on[q] == -1) last_on[q] = idx;
          } else {
            for (QubitId q : o.qubits)
              if (last_on[q] == -1) last_on[q] = idx;
          }
        }
        continue;
      }
      if (adjacent && back.qubits[0] == op.qubits[1] && back.qubits[1] == op.qubits[0]) {
        QubitId a = back.qubits[0], b = back.qubits[1];
        out.circuit.ops.back() = Operation(cx_gate(), {b, a});
        for (QubitId q = 0; q < c.num_qubits; ++q) {
          if (wire[q] == a)
            wire[q] = b;
          else if (wire[q] == b)
            wire[q] = a;
        }
        continue;
      }
    }
    out.circuit.push(op);
    note(op, static_cast<int>(out.circuit.ops.size()) - 1);
  }
  out.final_permutation = wire;
  return out;
}

/// No-lookahead baseline: before each non-local two-qubit op, swap the first
/// operand stepwise along the line until it neighbors the second.
inline RoutedCircuit greedy_baseline_route(const Circuit& c, const CouplingGraph& line) {
  if (line.num_vertices < c.num_qubits) throw std::invalid_argument("line too short");
  RoutedCircuit out;
  out.circuit = Circuit(c.num_qubits);
  std::vector<QubitId> cur(c.num_qubits);
  for (QubitId q = 0; q < c.num_qubits; ++q) cur[q] = q;
  out.initial_permutation = cur;
  std::vector<QubitId> occupant(line.num_vertices, UINT32_MAX);
  for (QubitId q = 0; q < c.num_qubits; ++q) occupant[q] = q;

  for (const Operation& op : c.ops) {
    if (!op.is_two_qubit()) {
      out.circuit.push(route_detail::mapped(op, cur));
      continue;
    }
    QubitId fixed = cur[op.qubits[1]];
    QubitId& walker = cur[op.qubits[0]];
    while (walker > fixed + 1 || fixed > walker + 1) {
      QubitId pos = walker;
      QubitId step = (pos < fixed) ? pos + 1 : pos - 1;
      out.circuit.push(swap_gate(), {pos, step});
      ++out.swap_count;
      QubitId moved = occupant[step];
      occupant[step] = op.qubits[0];
      occupant[pos] = moved;
      if (moved != UINT32_MAX) cur[moved] = pos;
      walker = step;
    }
    out.circuit.push(route_detail::mapped(op, cur));
  }
  out.final_permutation = cur;
  return out;
}

}  // namespace qlower
