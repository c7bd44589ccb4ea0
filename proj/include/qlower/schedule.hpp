#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qlower/circuit.hpp"
#include "qlower/target_ecr.hpp"

namespace qlower {

/// Gate durations in dt plus the device timing constraints. Starts must land
/// on multiples of the alignment value.
struct TimingModel {
  std::uint64_t dt_1q = 160;
  std::uint64_t dt_rz = 0;
  std::uint64_t dt_2q = 704;           // CX / CZ / SWAP
  std::uint64_t dt_ecr_halfpi = 704;   // AceCR at |theta| = pi/2, affine in |theta|
  std::uint64_t dt_gr_per_pi = 1280;   // GR scales with pulse area
  std::uint64_t dt_measure = 4000;
  std::uint64_t granularity = 16;
  std::uint64_t alignment = 16;

  static TimingModel from_ecr(const EcrTiming& t) {
    TimingModel m;
    m.dt_1q = t.dt_per_1q;
    m.dt_rz = t.dt_per_rz;
    m.dt_2q = t.dt_per_ecr_halfpi;
    m.dt_ecr_halfpi = t.dt_per_ecr_halfpi;
    m.granularity = t.granularity;
    m.alignment = t.granularity;
    return m;
  }

  std::uint64_t align_up(double raw) const {
    auto g = static_cast<double>(granularity);
    return static_cast<std::uint64_t>(std::ceil(raw / g) * g);
  }

  std::uint64_t duration(const Gate& g) const {
    switch (g.kind) {
    case GateKind::Rz:
    case GateKind::Z: return dt_rz;  // diagonal, virtual
    case GateKind::Delay: return static_cast<std::uint64_t>(g.params[0]);
    case GateKind::Cx:
    case GateKind::Cz:
    case GateKind::Swap: return dt_2q;
    case GateKind::AceCr:
      return align_up(static_cast<double>(dt_ecr_halfpi) * std::abs(g.theta()) / (PI / 2));
    case GateKind::Gr:
      return align_up(static_cast<double>(dt_gr_per_pi) * std::abs(g.params[0]) / PI);
    default: return dt_1q;
    }
  }
};

enum class SchedulePolicy { Asap, Alap };

struct ScheduledOp {
  std::uint64_t start{0};
  std::uint64_t duration{0};
  std::uint64_t end() const { return start + duration; }
};

/// Start/duration per op, parallel to Circuit::ops.
struct Schedule {
  std::vector<ScheduledOp> ops;
  std::uint64_t makespan{0};
};

/// ASAP places each op at the earliest aligned start after its predecessors;
/// ALAP at the latest aligned start that preserves the ASAP makespan.
inline Schedule schedule(const Circuit& c, const TimingModel& timing,
                         SchedulePolicy policy = SchedulePolicy::Asap) {
  const std::uint64_t m = std::max<std::uint64_t>(1, timing.alignment);
  Schedule s;
  s.ops.resize(c.ops.size());

  auto touched = [&](const Operation& op) {
    std::vector<QubitId> qs;
    if (op.is_global())
      for (QubitId q = 0; q < c.num_qubits; ++q) qs.push_back(q);
    else
      qs = op.qubits;
    return qs;
  };

  std::vector<std::uint64_t> ready(c.num_qubits, 0);
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    const Operation& op = c.ops[i];
    std::uint64_t dur = timing.duration(op.gate);
    std::uint64_t earliest = 0;
    for (QubitId q : touched(op)) earliest = std::max(earliest, ready[q]);
    std::uint64_t start = (earliest + m - 1) / m * m;
    s.ops[i] = {start, dur};
    for (QubitId q : touched(op)) ready[q] = start + dur;
  }
  for (const ScheduledOp& so : s.ops) s.makespan = std::max(s.makespan, so.end());

  if (policy == SchedulePolicy::Alap) {
    std::vector<std::uint64_t> deadline(c.num_qubits, s.makespan);
    for (std::size_t k = c.ops.size(); k-- > 0;) {
      const Operation& op = c.ops[k];
      std::uint64_t dur = s.ops[k].duration;
      std::uint64_t latest = s.makespan;
      for (QubitId q : touched(op)) latest = std::min(latest, deadline[q]);
      std::uint64_t start = (latest - dur) / m * m;
      s.ops[k].start = start;
      for (QubitId q : touched(op)) deadline[q] = start;
    }
  }
  return s;
}

/// Idle period on one qubit; no scheduled op intersects (start, end).
struct IdleWindow {
  QubitId qubit{0};
  std::uint64_t start{0};
  std::uint64_t end{0};
  std::uint64_t length() const { return end - start; }
};

/// Maximal per-qubit gaps between consecutive non-delay ops, plus the leading
/// and trailing stretches on used qubits. Delay ops count as idle time.
/// Windows shorter than one 1q pulse are omitted; unused qubits report none.
inline std::vector<IdleWindow> find_idle_windows(const Circuit& c, const Schedule& s,
                                                 const TimingModel& timing) {
  std::vector<IdleWindow> out;
  for (QubitId q = 0; q < c.num_qubits; ++q) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> busy;  // (start, end)
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
      if (c.ops[i].gate.kind == GateKind::Delay) continue;
      if (!c.ops[i].touches(q)) continue;
      busy.emplace_back(s.ops[i].start, s.ops[i].end());
    }
    if (busy.empty()) continue;
    std::sort(busy.begin(), busy.end());
    auto push_window = [&](std::uint64_t a, std::uint64_t b) {
      if (b > a && b - a >= timing.dt_1q) out.push_back({q, a, b});
    };
    push_window(0, busy.front().first);
    for (std::size_t i = 0; i + 1 < busy.size(); ++i) push_window(busy[i].second, busy[i + 1].first);
    push_window(busy.back().second, s.makespan);
  }
  return out;
}

/// Per-qubit idle spans for noise models: gaps between consecutive non-delay
/// ops and the trailing stretch, skipping the span before a qubit's first gate
/// (it still holds |0>).
inline std::vector<IdleWindow> idle_spans_for_noise(const Circuit& c, const Schedule& s) {
  std::vector<IdleWindow> out;
  for (QubitId q = 0; q < c.num_qubits; ++q) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> busy;
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
      if (c.ops[i].gate.kind == GateKind::Delay) continue;
      if (!c.ops[i].touches(q)) continue;
      busy.emplace_back(s.ops[i].start, s.ops[i].end());
    }
    if (busy.empty()) continue;
    std::sort(busy.begin(), busy.end());
    for (std::size_t i = 0; i + 1 < busy.size(); ++i)
      if (busy[i + 1].first > busy[i].second) out.push_back({q, busy[i].second, busy[i + 1].first});
    if (s.makespan > busy.back().second) out.push_back({q, busy.back().second, s.makespan});
  }
  return out;
}

}  // namespace qlower
