#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qlower/circuit.hpp"
#include "qlower/schedule.hpp"
#include "qlower/unitary.hpp"

namespace qlower {

enum class DdKind { Cpmg, Xy4, Xy8 };

inline const char* dd_name(DdKind k) {
  switch (k) {
  case DdKind::Cpmg: return "cpmg";
  case DdKind::Xy4: return "xy4";
  case DdKind::Xy8: return "xy8";
  }
  return "?";
}

/// One repetition's pulse list. Each sequence composes to the identity up to
/// global phase.
inline std::vector<GateKind> dd_pulses(DdKind k) {
  switch (k) {
  case DdKind::Cpmg: return {GateKind::X, GateKind::X};
  case DdKind::Xy4: return {GateKind::X, GateKind::Y, GateKind::X, GateKind::Y};
  case DdKind::Xy8:
    return {GateKind::X, GateKind::Y, GateKind::X, GateKind::Y,
            GateKind::Y, GateKind::X, GateKind::Y, GateKind::X};
  }
  return {};
}

struct DdSequence {
  DdKind kind{DdKind::Xy4};
  int repetitions{1};
};

namespace dd_detail {

struct Event {
  std::uint64_t start;
  int klass;  // 0 = original op, 1 = synthesized pulse/delay
  std::uint64_t tie;
  Operation op;
};

/// Even-spacing placement: pulse i of k sits at fraction (2i+1)/(2k) of the
/// window, each start snapped to the nearest feasible alignment multiple.
/// Returns nothing if the pulses cannot all fit.
inline std::optional<std::vector<std::uint64_t>> place_pulses(const IdleWindow& w, int k,
                                                              std::uint64_t d, std::uint64_t m) {
  const std::uint64_t span = w.length();
  if (static_cast<std::uint64_t>(k) * d > span) return std::nullopt;
  std::vector<std::uint64_t> starts;
  std::uint64_t cursor = w.start;
  for (int i = 0; i < k; ++i) {
    double center = static_cast<double>(w.start) +
                    static_cast<double>(span) * (2.0 * i + 1.0) / (2.0 * k);
    double ideal = center - static_cast<double>(d) / 2.0;
    auto snapped = static_cast<std::uint64_t>(
        std::llround(ideal / static_cast<double>(m))) * m;
    std::uint64_t s = std::max(snapped, cursor);
    if (s + d > w.end) return std::nullopt;
    starts.push_back(s);
    cursor = s + d;
  }
  return starts;
}

}  // namespace dd_detail

/// Fills idle windows with evenly spaced DD pulses and explicit delays for the
/// residual gaps. Repetitions are reduced per window to the largest count that
/// fits; windows that cannot hold one whole repetition are left alone (a
/// partial sequence would not compose to the identity). Windows before a
/// qubit's first gate are skipped.
inline Circuit insert_dd(const Circuit& c, const TimingModel& timing, const DdSequence& seq,
                         SchedulePolicy policy = SchedulePolicy::Asap) {
  using dd_detail::Event;
  if (seq.repetitions < 1) throw std::invalid_argument("insert_dd: repetitions must be >= 1");
  const Schedule s = schedule(c, timing, policy);
  const std::vector<GateKind> pulses = dd_pulses(seq.kind);
  const std::uint64_t d = timing.dt_1q;
  const std::uint64_t m = std::max<std::uint64_t>(1, timing.alignment);

  std::vector<std::uint64_t> first_op_start(c.num_qubits, UINT64_MAX);
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    if (c.ops[i].gate.kind == GateKind::Delay) continue;
    const Operation& op = c.ops[i];
    for (QubitId q = 0; q < c.num_qubits; ++q)
      if (op.touches(q)) first_op_start[q] = std::min(first_op_start[q], s.ops[i].start);
  }

  struct Filled {
    IdleWindow window;
    std::vector<std::uint64_t> starts;
    std::vector<GateKind> kinds;
  };
  std::vector<Filled> filled;
  for (const IdleWindow& w : find_idle_windows(c, s, timing)) {
    if (w.start < first_op_start[w.qubit]) continue;  // qubit still in |0>
    for (int reps = seq.repetitions; reps >= 1; --reps) {
      int k = reps * static_cast<int>(pulses.size());
      auto starts = dd_detail::place_pulses(w, k, d, m);
      if (!starts) continue;
      std::vector<GateKind> kinds;
      for (int r = 0; r < reps; ++r)
        for (GateKind g : pulses) kinds.push_back(g);
      filled.push_back({w, std::move(*starts), std::move(kinds)});
      break;
    }
  }

  std::vector<Event> events;
  std::uint64_t tie = 0;
  auto covered = [&](std::size_t op_index) {
    // original delay ops inside a filled window are replaced
    if (c.ops[op_index].gate.kind != GateKind::Delay) return false;
    QubitId q = c.ops[op_index].qubits[0];
    for (const Filled& f : filled)
      if (f.window.qubit == q && s.ops[op_index].start >= f.window.start &&
          s.ops[op_index].end() <= f.window.end)
        return true;
    return false;
  };
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    if (covered(i)) continue;
    events.push_back({s.ops[i].start, 0, tie++, c.ops[i]});
  }
  for (const Filled& f : filled) {
    std::uint64_t cursor = f.window.start;
    for (std::size_t i = 0; i < f.starts.size(); ++i) {
      if (f.starts[i] > cursor)
        events.push_back({cursor, 1, tie++, Operation(delay_gate(f.starts[i] - cursor), {f.window.qubit})});
      events.push_back({f.starts[i], 1, tie++, Operation(Gate(f.kinds[i]), {f.window.qubit})});
      cursor = f.starts[i] + d;
    }
    if (f.window.end > cursor)
      events.push_back({cursor, 1, tie++, Operation(delay_gate(f.window.end - cursor), {f.window.qubit})});
  }

  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.klass != b.klass) return a.klass < b.klass;
    return a.tie < b.tie;
  });

  Circuit out(c.num_qubits);
  for (Event& e : events) out.ops.push_back(std::move(e.op));
  return out;
}

enum class IdleAxis { Z, X };

/// Expands a circuit into one with explicit stray rotations Rz(eps*t) (or
/// Rx for X-axis noise) across every idle span, the coherent idle-error model.
/// Delay ops are consumed as idle time.
inline Circuit expand_coherent_idle(const Circuit& c, const TimingModel& timing, double eps,
                                    IdleAxis axis = IdleAxis::Z,
                                    SchedulePolicy policy = SchedulePolicy::Asap) {
  const Schedule s = schedule(c, timing, policy);

  struct Item {
    std::uint64_t start;
    std::uint64_t tie;
    std::size_t index;
  };
  std::vector<Item> order;
  for (std::size_t i = 0; i < c.ops.size(); ++i)
    if (c.ops[i].gate.kind != GateKind::Delay) order.push_back({s.ops[i].start, i, i});
  std::sort(order.begin(), order.end(), [](const Item& a, const Item& b) {
    if (a.start != b.start) return a.start < b.start;
    return a.tie < b.tie;
  });

  Circuit out(c.num_qubits);
  std::vector<std::uint64_t> last_end(c.num_qubits, 0);
  std::vector<bool> seen(c.num_qubits, false);
  auto stray = [&](QubitId q, std::uint64_t span) {
    if (span == 0 || eps == 0.0) return;
    double angle = eps * static_cast<double>(span);
    if (axis == IdleAxis::Z)
      out.rz(canonical_angle(angle), q);
    else
      out.rx(canonical_angle(angle), q);
  };
  for (const Item& it : order) {
    const Operation& op = c.ops[it.index];
    for (QubitId q = 0; q < c.num_qubits; ++q) {
      if (!op.touches(q)) continue;
      if (seen[q] && s.ops[it.index].start > last_end[q])
        stray(q, s.ops[it.index].start - last_end[q]);
      seen[q] = true;
      last_end[q] = s.ops[it.index].end();
    }
    out.ops.push_back(op);
  }
  for (QubitId q = 0; q < c.num_qubits; ++q)
    if (seen[q] && s.makespan > last_end[q]) stray(q, s.makespan - last_end[q]);
  return out;
}

/// 1 - state fidelity for the DD-protected and bare circuits under the
/// coherent idle model. Both circuits are compared to their own noiseless
/// output state.
inline std::pair<double, double> dd_benefit_sim(const Circuit& with_dd, const Circuit& without,
                                                const TimingModel& timing, double eps,
                                                IdleAxis axis = IdleAxis::Z) {
  if (with_dd.num_qubits > 6 || without.num_qubits > 6)
    throw std::invalid_argument("dd_benefit_sim supports at most 6 qubits");
  auto error_of = [&](const Circuit& c) {
    Vec ideal = statevector_of(c);
    Vec noisy = statevector_of(expand_coherent_idle(c, timing, eps, axis));
    double overlap = std::norm(ideal.dot(noisy));
    return 1.0 - overlap;
  };
  return {error_of(with_dd), error_of(without)};
}

}  // namespace qlower
