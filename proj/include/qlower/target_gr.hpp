#pragma once

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qlower/circuit.hpp"
#include "qlower/unitary.hpp"

namespace qlower {

/// Z^{z+a} X^x Z^{-a} exponents (half-turn units). x*pi is the minimal global
/// pulse area needed to realize the gate.
struct PhXZParams {
  double x{0};
  double z{0};
  double a{0};
};

/// Canonical PhXZ exponents of a 1q unitary: x in [0,1]; diagonal gates
/// come back as (0, z, 0), anti-diagonal ones as (1, z, 0).
inline PhXZParams phxz_of(const Mat2& u) {
  if (!is_unitary(u, 1e-10)) throw std::invalid_argument("phxz_of: input is not unitary");
  constexpr double EDGE = 1e-9;
  const double theta = 2 * std::atan2(std::abs(u(1, 0)), std::abs(u(0, 0)));
  PhXZParams p;
  p.x = theta / PI;
  if (p.x < EDGE) {
    p.x = 0;
    p.z = canonical_exponent(std::arg(u(1, 1) / u(0, 0)) / PI);
    return p;
  }
  if (p.x > 1 - EDGE) {
    p.x = 1;
    p.z = canonical_exponent(std::arg(u(1, 0) / u(0, 1)) / PI);
    return p;
  }
  const double phi = std::arg(u(1, 0) / u(0, 0));
  const double lam = std::arg(-u(0, 1) / u(0, 0));
  p.a = canonical_exponent((PI / 2 - lam) / PI);
  p.z = canonical_exponent((phi + lam) / PI);
  return p;
}

/// One parallel-executable single-qubit gate inside a collection. The slot
/// bounds record between which walls (CZ or delay barriers) the gate may sit.
struct GrMember {
  QubitId qubit{0};
  Mat2 target{Mat2::Identity()};
  PhXZParams params;
  std::size_t lo_slot{0};
  std::size_t hi_slot{SIZE_MAX};
};

struct GrCollection {
  std::vector<GrMember> members;

  bool has(QubitId q) const {
    for (const GrMember& m : members)
      if (m.qubit == q) return true;
    return false;
  }
  double max_x() const {
    double v = 0;
    for (const GrMember& m : members) v = std::max(v, m.params.x);
    return v;
  }
  /// Minimal global pulse area of this collection, in radians.
  double area() const { return max_x() * PI; }
};

inline double net_gr_area(const std::vector<GrCollection>& cs) {
  double a = 0;
  for (const GrCollection& c : cs)
    if (!c.members.empty()) a += c.area();
  return a;
}

/// Interleaved output structure: collections sit at fixed positions between
/// the CZ / delay walls.
struct SiftEvent {
  int collection{-1};  // >= 0 refers to a collection slot
  Operation op;
};

struct Sifted {
  std::vector<GrCollection> collections;
  std::vector<SiftEvent> order;
  std::vector<double> trailing;  // per-qubit leftover diagonal (Rz angle)
};

/// Greedy topological pass collecting maximal parallel sets of 1q gates.
/// Same-qubit gates between walls compose into one member; diagonal (x = 0)
/// composites merge forward into the qubit's next non-diagonal gate, or into
/// the trailing frame at circuit end.
inline Sifted sift(const Circuit& c) {
  Sifted out;
  std::vector<Mat2> buffer(c.num_qubits, Mat2::Identity());
  std::vector<bool> buffered(c.num_qubits, false);
  std::vector<Mat2> pending(c.num_qubits, Mat2::Identity());  // diagonal carry-forward
  std::vector<std::size_t> avail(c.num_qubits, 0);

  auto flush = [&](QubitId q) {
    if (!buffered[q]) return;
    Mat2 eff = buffer[q] * pending[q];
    buffer[q] = Mat2::Identity();
    buffered[q] = false;
    PhXZParams p = phxz_of(eff);
    if (p.x == 0) {
      pending[q] = eff;  // stays diagonal, merges into the next x != 0 gate
      return;
    }
    pending[q] = Mat2::Identity();
    std::size_t j = avail[q];
    while (j < out.collections.size() && out.collections[j].has(q)) ++j;
    if (j >= out.collections.size()) {
      out.collections.emplace_back();
      out.order.push_back({static_cast<int>(out.collections.size()) - 1, Operation{}});
      j = out.collections.size() - 1;
    }
    out.collections[j].members.push_back({q, eff, p, avail[q], SIZE_MAX});
  };

  // Both operands flush before either avail bound moves; a wall on (a, b)
  // must not let b's flush land after a's bound update (or vice versa).
  auto wall = [&](const std::vector<QubitId>& qs) {
    for (QubitId q : qs) flush(q);
    for (QubitId q : qs) {
      for (std::size_t j = avail[q]; j < out.collections.size(); ++j)
        for (GrMember& m : out.collections[j].members)
          if (m.qubit == q && m.hi_slot == SIZE_MAX) m.hi_slot = out.collections.size();
      avail[q] = out.collections.size();
    }
  };

  for (const Operation& op : c.ops) {
    switch (op.gate.kind) {
    case GateKind::Cz:
    case GateKind::Delay: {
      wall(op.qubits);
      out.order.push_back({-1, op});
      break;
    }
    case GateKind::Cx:
    case GateKind::Swap:
    case GateKind::AceCr:
    case GateKind::Gr:
      throw std::invalid_argument("sift expects a circuit over CZ and 1q gates");
    default:
      buffer[op.qubits[0]] = gate_matrix_1q(op.gate) * buffer[op.qubits[0]];
      buffered[op.qubits[0]] = true;
    }
  }
  out.trailing.assign(c.num_qubits, 0.0);
  for (QubitId q = 0; q < c.num_qubits; ++q) {
    flush(q);
    Mat2 d = pending[q];
    double angle = std::arg(d(1, 1) / d(0, 0));
    if (!is_identity_angle(angle)) out.trailing[q] = angle;
  }
  return out;
}

namespace gr_detail {

inline double norm_0_2pi(double theta) {
  double t = std::fmod(theta, 2 * PI);
  if (t < 0) t += 2 * PI;
  if (t > 2 * PI - 1e-9) t = 0;
  return t;
}

/// Per-member synthesis against the shared GR structure: solves
///   u_eff ~ K * W * Rz(delta)   (K diagonal, the outgoing carry)
/// where W is either the echoed pair R_phi(-T/2) Rz(beta) R_phi(T/2) with beta
/// matched to the member's pulse area, or the bare rotation R_phi(pi*x) in the
/// single-GR form.
struct MemberPlan {
  double delta{0};  // lead Rz, emitted
  double beta{0};   // mid Rz between the pair, emitted (echo form only)
  double kappa{0};  // diagonal carry, deferred or emitted as a tail Rz
};

inline MemberPlan solve_member(const Mat2& u_eff, double big_theta, double phi, bool single_gr) {
  MemberPlan plan;
  const double x = 2 * std::atan2(std::abs(u_eff(1, 0)), std::abs(u_eff(0, 0))) / PI;
  Mat2 w;
  if (single_gr) {
    w = mats::r_equatorial(PI * x, phi);
  } else {
    // |W00(beta)|^2 = 1 - sin^2(T/2) sin^2(beta/2) must equal cos^2(pi x / 2),
    // so sin(beta/2) = sin(pi x / 2) / sin(T/2). Solvable exactly when the
    // member's pulse area does not exceed the collection's (x pi <= T).
    const double denom = std::sin(big_theta / 2);
    double ratio = denom > 0 ? std::sin(PI * x / 2) / denom : 0.0;
    plan.beta = 2 * std::asin(std::clamp(ratio, 0.0, 1.0));
    w = mats::r_equatorial(-big_theta / 2, phi) * mats::rz(plan.beta) *
        mats::r_equatorial(big_theta / 2, phi);
  }
  if (std::abs(w(0, 0)) > 1e-9 && std::abs(w(0, 1)) > 1e-9) {
    plan.delta = std::arg((u_eff(0, 1) / u_eff(0, 0)) * (w(0, 0) / w(0, 1)));
  }
  Mat2 k = u_eff * (w * mats::rz(plan.delta)).adjoint();
  if (std::abs(k(0, 1)) > 1e-7 || std::abs(k(1, 0)) > 1e-7)
    throw std::logic_error("gr member synthesis failed to diagonalize the carry");
  plan.kappa = std::arg(k(1, 1) / k(0, 0));
  if (is_identity_angle(plan.delta)) plan.delta = 0;
  if (is_identity_angle(plan.kappa)) plan.kappa = 0;
  return plan;
}

inline bool all_equal_x(const std::vector<Mat2>& targets) {
  if (targets.empty()) return false;
  double first = 2 * std::atan2(std::abs(targets[0](1, 0)), std::abs(targets[0](0, 0))) / PI;
  for (const Mat2& t : targets) {
    double x = 2 * std::atan2(std::abs(t(1, 0)), std::abs(t(0, 0))) / PI;
    if (std::abs(x - first) > 1e-9) return false;
  }
  return first > 1e-9;
}

struct EmittedSlot {
  std::vector<Operation> ops;
  std::vector<std::pair<QubitId, double>> carries;
  int rz_emitted{0};
  int carries_nonzero{0};
};

/// Emits one collection at a fixed phase. Targets are the carry-folded member
/// unitaries, parallel to `qubits`.
inline EmittedSlot emit_slot(const std::vector<QubitId>& qubits, const std::vector<Mat2>& targets,
                             double phi, bool single_gr) {
  EmittedSlot slot;
  double big = 0;
  for (const Mat2& t : targets)
    big = std::max(big, 2 * std::atan2(std::abs(t(1, 0)), std::abs(t(0, 0))));

  std::vector<MemberPlan> plans;
  for (std::size_t i = 0; i < qubits.size(); ++i)
    plans.push_back(solve_member(targets[i], big, phi, single_gr));

  for (std::size_t i = 0; i < qubits.size(); ++i) {
    double d = norm_0_2pi(plans[i].delta);
    if (d != 0) {
      slot.ops.emplace_back(rz_gate(d), std::vector<QubitId>{qubits[i]});
      ++slot.rz_emitted;
    }
  }
  if (single_gr) {
    slot.ops.emplace_back(gr_gate(big, phi), std::vector<QubitId>{});
  } else {
    slot.ops.emplace_back(gr_gate(big / 2, phi), std::vector<QubitId>{});
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      double b = norm_0_2pi(plans[i].beta);
      if (b != 0) {
        slot.ops.emplace_back(rz_gate(b), std::vector<QubitId>{qubits[i]});
        ++slot.rz_emitted;
      }
    }
    slot.ops.emplace_back(gr_gate(-big / 2, phi), std::vector<QubitId>{});
  }
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    slot.carries.emplace_back(qubits[i], plans[i].kappa);
    if (plans[i].kappa != 0) ++slot.carries_nonzero;
  }
  return slot;
}

inline std::vector<double> phase_candidates(const std::vector<Mat2>& targets) {
  std::vector<double> cands = {0.0};
  for (const Mat2& t : targets) {
    PhXZParams p = phxz_of(t);
    for (double cand : {canonical_phase(p.a * PI), canonical_phase((p.z + p.a) * PI)}) {
      bool seen = false;
      for (double c : cands)
        if (std::abs(c - cand) < 1e-9) seen = true;
      if (!seen) cands.push_back(cand);
    }
  }
  std::sort(cands.begin(), cands.end());
  return cands;
}

/// Minimizes emitted Rz count, then leftover carries, then phase value.
inline double best_phase(const std::vector<QubitId>& qubits, const std::vector<Mat2>& targets,
                         bool single_gr) {
  double best = 0;
  int best_rz = INT_MAX, best_carry = INT_MAX;
  for (double cand : phase_candidates(targets)) {
    EmittedSlot trial = emit_slot(qubits, targets, cand, single_gr);
    if (trial.rz_emitted < best_rz ||
        (trial.rz_emitted == best_rz && trial.carries_nonzero < best_carry)) {
      best = cand;
      best_rz = trial.rz_emitted;
      best_carry = trial.carries_nonzero;
    }
  }
  return best;
}

}  // namespace gr_detail

/// The phase minimizing the number of Rz gates the collection's decomposition
/// emits, searched over the finite candidate set derived from the members'
/// PhXZ exponents; ties break toward the smallest phase in [0, 2pi).
inline double choose_phase(const GrCollection& c, std::uint32_t num_qubits) {
  if (c.members.empty()) throw std::invalid_argument("choose_phase: empty collection");
  std::vector<QubitId> qs;
  std::vector<Mat2> ts;
  for (const GrMember& m : c.members) {
    qs.push_back(m.qubit);
    ts.push_back(m.target);
  }
  bool single = qs.size() == num_qubits && gr_detail::all_equal_x(ts);
  return gr_detail::best_phase(qs, ts, single);
}

/// Stand-alone decomposition of one collection at a given phase: local Rz
/// gates around two mutually inverse GR pulses of area max_x*pi/2 each (or a
/// single GR when every qubit is a member with the same x). Spectator qubits
/// sit between the inverse pair untouched and are provably unaffected.
inline std::vector<Operation> decompose_collection(const GrCollection& c, double phi,
                                                   std::uint32_t num_qubits) {
  if (c.members.empty()) throw std::invalid_argument("decompose_collection: empty collection");
  std::vector<QubitId> qs;
  std::vector<Mat2> ts;
  for (const GrMember& m : c.members) {
    qs.push_back(m.qubit);
    ts.push_back(m.target);
  }
  bool single = qs.size() == num_qubits && gr_detail::all_equal_x(ts);
  gr_detail::EmittedSlot slot = gr_detail::emit_slot(qs, ts, phi, single);
  for (auto [q, kappa] : slot.carries) {
    double t = gr_detail::norm_0_2pi(kappa);
    if (t != 0) slot.ops.emplace_back(rz_gate(t), std::vector<QubitId>{q});
  }
  return slot.ops;
}

/// Moves members between collections (within their wall bounds) whenever the
/// move strictly reduces the net GR pulse area, to a fixed point. Collections
/// may empty out but are never added.
inline void reassign_collections(std::vector<GrCollection>& cs) {
  const std::size_t limit = [&] {
    std::size_t members = 0;
    for (const GrCollection& c : cs) members += c.members.size();
    return members * std::max<std::size_t>(1, cs.size()) + 1;
  }();
  for (std::size_t iter = 0; iter < limit; ++iter) {
    bool improved = false;
    for (std::size_t i = 0; i < cs.size() && !improved; ++i) {
      for (std::size_t mi = 0; mi < cs[i].members.size() && !improved; ++mi) {
        const GrMember& m = cs[i].members[mi];
        for (std::size_t j = m.lo_slot; j < std::min<std::size_t>(m.hi_slot, cs.size()); ++j) {
          if (j == i || cs[j].has(m.qubit)) continue;
          double before = cs[i].area() + (cs[j].members.empty() ? 0 : cs[j].area());
          GrCollection trial_i = cs[i], trial_j = cs[j];
          trial_j.members.push_back(m);
          trial_i.members.erase(trial_i.members.begin() + static_cast<std::ptrdiff_t>(mi));
          double after = (trial_i.members.empty() ? 0 : trial_i.area()) + trial_j.area();
          if (after < before - 1e-12) {
            cs[i] = std::move(trial_i);
            cs[j] = std::move(trial_j);
            improved = true;
            break;
          }
        }
      }
    }
    if (!improved) break;
  }
}

/// Merge neighboring global pulses about the same axis; inverse pairs cancel.
inline void merge_adjacent_gr(Circuit& c) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Operation> next;
    for (const Operation& op : c.ops) {
      if (op.gate.kind == GateKind::Gr && !next.empty() && next.back().gate.kind == GateKind::Gr &&
          std::abs(canonical_phase(next.back().gate.params[1]) -
                   canonical_phase(op.gate.params[1])) < 1e-12) {
        double sum = next.back().gate.params[0] + op.gate.params[0];
        next.pop_back();
        if (!is_identity_angle(sum)) next.emplace_back(gr_gate(sum, op.gate.params[1]), std::vector<QubitId>{});
        changed = true;
        continue;
      }
      next.push_back(op);
    }
    c.ops = std::move(next);
  }
}

struct GrOptions {
  bool baseline = false;     // straightforward per-moment Hadamard decomposition
  bool defer_frame = true;   // move trailing virtual rotations into the frame
  bool reassign = true;
};

struct GrCompiled {
  Circuit circuit;
  std::vector<double> frame;  // per-qubit Rz deferred to the measurement frame
  std::uint64_t collection_count{0};
};

namespace gr_detail {

/// Lower every gate to the {CZ, 1q, Delay} set sift consumes.
inline Circuit lower_to_cz(const Circuit& in) {
  Circuit out(in.num_qubits);
  auto emit_cx = [&](QubitId a, QubitId b) {
    out.h(b);
    out.cz(a, b);
    out.h(b);
  };
  for (const Operation& op : in.ops) {
    switch (op.gate.kind) {
    case GateKind::Cx: emit_cx(op.qubits[0], op.qubits[1]); break;
    case GateKind::Swap:
      emit_cx(op.qubits[0], op.qubits[1]);
      emit_cx(op.qubits[1], op.qubits[0]);
      emit_cx(op.qubits[0], op.qubits[1]);
      break;
    case GateKind::AceCr: {
      // R_ZX(theta) * X(control): conjugate an Rz sandwich into the ZX frame.
      QubitId ctl = op.qubits[0], tgt = op.qubits[1];
      out.x(ctl);
      out.h(tgt);
      emit_cx(ctl, tgt);
      out.rz(op.gate.theta(), tgt);
      emit_cx(ctl, tgt);
      out.h(tgt);
      break;
    }
    case GateKind::Gr: {
      double theta = op.gate.params[0], phi = op.gate.params[1];
      for (QubitId q = 0; q < in.num_qubits; ++q) {
        out.rz(-phi, q);
        out.rx(theta, q);
        out.rz(phi, q);
      }
      break;
    }
    default: out.push(op);
    }
  }
  return out;
}


/// Pulls trailing diagonal rotations out of the circuit and into the per-qubit
/// frame. A trailing Rz commutes past CZs, delays, and any echoed GR pair it
/// receives no mid-sequence Rz from (the pair acts as the identity there), so
/// the scan walks pairs as a unit.
inline std::vector<double> extract_frame(Circuit& c) {
  std::vector<double> frame(c.num_qubits, 0.0);
  std::vector<bool> clear(c.num_qubits, true);
  std::vector<bool> removed(c.ops.size(), false);
  std::size_t i = c.ops.size();
  while (i-- > 0) {
    const Operation& op = c.ops[i];
    if (op.gate.kind == GateKind::Rz) {
      if (clear[op.qubits[0]]) {
        frame[op.qubits[0]] += op.gate.theta();
        removed[i] = true;
      }
      continue;
    }
    if (op.gate.kind == GateKind::Cz || op.gate.kind == GateKind::Delay ||
        op.gate.kind == GateKind::Z)
      continue;
    if (op.gate.kind == GateKind::Gr) {
      // Match the earlier half of an inverse pair with only Rz/Delay between.
      std::size_t j = i;
      bool paired = false;
      while (j-- > 0) {
        GateKind k = c.ops[j].gate.kind;
        if (k == GateKind::Rz || k == GateKind::Delay) continue;
        if (k == GateKind::Gr) {
          paired = std::abs(c.ops[j].gate.params[0] + op.gate.params[0]) < 1e-12 &&
                   std::abs(canonical_phase(c.ops[j].gate.params[1]) -
                            canonical_phase(op.gate.params[1])) < 1e-12;
        }
        break;
      }
      if (paired) {
        for (std::size_t m = j + 1; m < i; ++m)
          if (c.ops[m].gate.kind == GateKind::Rz) clear[c.ops[m].qubits[0]] = false;
        i = j;  // step over the whole pair
        continue;
      }
      std::fill(clear.begin(), clear.end(), false);
      continue;
    }
    if (op.is_global())
      std::fill(clear.begin(), clear.end(), false);
    else
      for (QubitId q : op.qubits) clear[q] = false;
  }
  std::vector<Operation> kept;
  for (std::size_t k = 0; k < c.ops.size(); ++k)
    if (!removed[k]) kept.push_back(c.ops[k]);
  c.ops = std::move(kept);
  for (double& f : frame) f = canonical_angle(f);
  return frame;
}

inline bool is_hadamard(const Mat2& u) {
  return equiv_phase(u, mats::h(), 1e-9);
}

/// Straightforward mode: group consecutive 1q moments and decompose each
/// Hadamard layer as GR_x(-pi/2), sqrt(Z), GR_x(pi/2), Z with the GR pulses
/// shared across the layer.
inline Circuit compile_baseline(const Circuit& lowered) {
  Circuit out(lowered.num_qubits);
  std::vector<Mat2> buffer(lowered.num_qubits, Mat2::Identity());
  std::vector<bool> buffered(lowered.num_qubits, false);

  auto flush_layer = [&]() {
    std::vector<QubitId> qs;
    std::vector<Mat2> ts;
    for (QubitId q = 0; q < lowered.num_qubits; ++q) {
      if (!buffered[q]) continue;
      PhXZParams p = phxz_of(buffer[q]);
      if (p.x == 0) {  // bare diagonal: emit directly
        double ang = std::arg(buffer[q](1, 1) / buffer[q](0, 0));
        if (!is_identity_angle(ang)) out.rz(norm_0_2pi(ang), q);
      } else {
        qs.push_back(q);
        ts.push_back(buffer[q]);
      }
      buffer[q] = Mat2::Identity();
      buffered[q] = false;
    }
    if (qs.empty()) return;
    bool all_h = std::all_of(ts.begin(), ts.end(), is_hadamard);
    if (all_h) {
      out.gr(-PI / 2, 0);
      for (QubitId q : qs) out.rz(PI / 2, q);
      out.gr(PI / 2, 0);
      for (QubitId q : qs) out.rz(PI, q);
      return;
    }
    EmittedSlot slot = emit_slot(qs, ts, 0.0, false);
    for (Operation& op : slot.ops) out.ops.push_back(std::move(op));
    for (auto [q, kappa] : slot.carries) {
      double t = norm_0_2pi(kappa);
      if (t != 0) out.rz(t, q);
    }
  };

  for (const Operation& op : lowered.ops) {
    if (op.gate.kind == GateKind::Cz || op.gate.kind == GateKind::Delay) {
      flush_layer();
      out.push(op);
    } else {
      buffer[op.qubits[0]] = gate_matrix_1q(op.gate) * buffer[op.qubits[0]];
      buffered[op.qubits[0]] = true;
    }
  }
  flush_layer();
  return out;
}

}  // namespace gr_detail

/// Lowers a circuit to the neutral-atom gateset {CZ, Rz, GR}. The optimized
/// path sifts 1q gates into minimal parallel collections, reassigns members to
/// minimize net pulse area, picks each collection's GR phase to minimize Rz
/// count, and threads diagonal carries forward; trailing virtual rotations
/// land in the frame (or as explicit Rz gates with defer_frame off).
inline GrCompiled compile_gr(const Circuit& in, GrOptions opt = {}) {
  using namespace gr_detail;
  Circuit lowered = lower_to_cz(in);

  GrCompiled result;
  if (opt.baseline) {
    result.circuit = compile_baseline(lowered);
    std::uint64_t grs = 0;
    for (const Operation& op : result.circuit.ops)
      if (op.gate.kind == GateKind::Gr) ++grs;
    result.collection_count = (grs + 1) / 2;
  } else {
    Sifted sifted = sift(lowered);
    if (opt.reassign) reassign_collections(sifted.collections);

    Circuit out(lowered.num_qubits);
    std::vector<double> carry(lowered.num_qubits, 0.0);
    for (const SiftEvent& ev : sifted.order) {
      if (ev.collection < 0) {
        out.push(ev.op);
        continue;
      }
      const GrCollection& col = sifted.collections[static_cast<std::size_t>(ev.collection)];
      if (col.members.empty()) continue;
      ++result.collection_count;
      std::vector<QubitId> qs;
      std::vector<Mat2> ts;
      for (const GrMember& m : col.members) {
        qs.push_back(m.qubit);
        ts.push_back(m.target * mats::rz(carry[m.qubit]));
      }
      bool single = qs.size() == lowered.num_qubits && all_equal_x(ts);
      double phi = best_phase(qs, ts, single);
      EmittedSlot slot = emit_slot(qs, ts, phi, single);
      for (Operation& op : slot.ops) out.ops.push_back(std::move(op));
      for (auto [q, kappa] : slot.carries) carry[q] = kappa;
    }
    for (QubitId q = 0; q < lowered.num_qubits; ++q) {
      double total = canonical_angle(carry[q] + sifted.trailing[q]);
      if (!is_identity_angle(total)) out.rz(norm_0_2pi(total), q);
    }
    result.circuit = std::move(out);
  }

  merge_adjacent_gr(result.circuit);
  if (opt.defer_frame)
    result.frame = gr_detail::extract_frame(result.circuit);
  else
    result.frame.assign(result.circuit.num_qubits, 0.0);

  for (const Operation& op : result.circuit.ops) {
    bool ok = op.gate.kind == GateKind::Cz || op.gate.kind == GateKind::Rz ||
              op.gate.kind == GateKind::Gr || op.gate.kind == GateKind::Delay;
    if (!ok) throw std::logic_error("compile_gr produced a non-native gate");
  }
  return result;
}

/// Oracle check for GR-compiled output: original ~ frame * compiled.
inline bool gr_equiv(const GrCompiled& compiled, const Circuit& original, double tol) {
  return equiv_diag(unitary_of(original), unitary_of(compiled.circuit), compiled.frame, tol);
}

}  // namespace qlower
