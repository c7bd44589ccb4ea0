#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qlower/circuit.hpp"
#include "qlower/unitary.hpp"

namespace qlower {

/// Durations for the echoed-cross-resonance gateset, in dt. Rz is a frame
/// change and costs nothing.
struct EcrTiming {
  std::uint64_t dt_per_1q = 160;
  std::uint64_t dt_per_ecr_halfpi = 704;  // at |theta| = pi/2
  std::uint64_t dt_per_rz = 0;
  std::uint64_t granularity = 16;

  /// Affine in |theta|, rounded up to the granularity.
  std::uint64_t dt_per_ecr(double theta) const {
    double raw = static_cast<double>(dt_per_ecr_halfpi) * std::abs(theta) / (PI / 2);
    auto g = static_cast<double>(granularity);
    return static_cast<std::uint64_t>(std::ceil(raw / g) * g);
  }
};

/// Fractional echoed cross-resonance. The polarity selects which half drives
/// positive first, which flips the sign of the effective interaction angle.
struct AceCr {
  double theta{PI / 2};
  bool positive{true};

  double effective_angle() const { return positive ? theta : -theta; }
  Gate gate() const { return acecr_gate(effective_angle()); }
};

/// R_ZX(theta) * (X on control), the unit the hardware calibrates as one gate.
inline Mat4 acecr_unitary(const AceCr& g) { return mats::acecr(g.effective_angle()); }

/// CX as one AceCR plus local gates, in the order the pulse schedule plays
/// them: Rz(pi/2) and X on the control, Rx(pi/2) on the target, then the
/// echoed interaction with effective angle -pi/2.
inline std::vector<Operation> decompose_cx(const Operation& op) {
  if (op.gate.kind != GateKind::Cx) throw std::invalid_argument("decompose_cx: not a CX");
  QubitId c = op.qubits[0], t = op.qubits[1];
  return {
      Operation(rz_gate(PI / 2), {c}),
      Operation(x_gate(), {c}),
      Operation(rx_gate(PI / 2), {t}),
      Operation(AceCr{PI / 2, false}.gate(), {c, t}),
  };
}

/// exp(-i theta/2 Z(x)Z(y)) with a single AceCR: conjugate the target by a
/// basis change mapping X to Z and let the echo X cancel against an explicit
/// one on the control.
inline std::vector<Operation> decompose_zz(double theta, QubitId c, QubitId t) {
  auto native_h = [&](std::vector<Operation>& ops) {
    ops.emplace_back(rz_gate(PI / 2), std::vector<QubitId>{t});
    ops.emplace_back(rx_gate(PI / 2), std::vector<QubitId>{t});
    ops.emplace_back(rz_gate(PI / 2), std::vector<QubitId>{t});
  };
  std::vector<Operation> ops;
  native_h(ops);
  ops.emplace_back(x_gate(), std::vector<QubitId>{c});
  ops.emplace_back(AceCr{theta, true}.gate(), std::vector<QubitId>{c, t});
  native_h(ops);
  return ops;
}

namespace ecr_detail {

inline double norm_0_2pi(double theta) {
  double t = std::fmod(theta, 2 * PI);
  if (t < 0) t += 2 * PI;
  if (t > 2 * PI - 1e-9) t = 0;
  return t;
}

inline void push_rz(std::vector<Operation>& ops, double theta, QubitId q) {
  double t = norm_0_2pi(theta);
  if (t > 1e-9) ops.emplace_back(rz_gate(t), std::vector<QubitId>{q});
}

/// Canonical minimal-pulse resynthesis of a 2x2 unitary over {Rz, Rx(pi/2),
/// X}. Pulse count follows the ZYZ polar angle: 0 for diagonal, 1 for
/// anti-diagonal (an X) or a quarter-turn polar angle (one Rx(pi/2)), 2
/// otherwise (the ZXZXZ form).
inline std::vector<Operation> resynthesize_matrix(const Mat2& u, QubitId q) {
  std::vector<Operation> ops;
  const double m00 = std::abs(u(0, 0)), m10 = std::abs(u(1, 0));
  const double theta = 2 * std::atan2(m10, m00);
  constexpr double BRANCH_TOL = 1e-9;

  if (theta < BRANCH_TOL) {  // diagonal
    push_rz(ops, std::arg(u(1, 1) / u(0, 0)), q);
    return ops;
  }
  if (theta > PI - BRANCH_TOL) {  // anti-diagonal: X * Rz(delta)
    push_rz(ops, std::arg(u(0, 1) / u(1, 0)), q);
    ops.emplace_back(x_gate(), std::vector<QubitId>{q});
    return ops;
  }

  const double phi = std::arg(u(1, 0) / u(0, 0));
  const double lam = std::arg(-u(0, 1) / u(0, 0));
  if (std::abs(theta - PI / 2) < BRANCH_TOL) {  // single quarter pulse
    push_rz(ops, lam - PI / 2, q);
    ops.emplace_back(rx_gate(PI / 2), std::vector<QubitId>{q});
    push_rz(ops, phi + PI / 2, q);
    return ops;
  }

  push_rz(ops, lam, q);
  ops.emplace_back(rx_gate(PI / 2), std::vector<QubitId>{q});
  push_rz(ops, theta + PI, q);
  ops.emplace_back(rx_gate(PI / 2), std::vector<QubitId>{q});
  push_rz(ops, phi + PI, q);
  return ops;
}

inline Mat2 composite_of_run(const std::vector<Operation>& run) {
  Mat2 u = Mat2::Identity();
  for (const Operation& op : run) u = gate_matrix_1q(op.gate) * u;
  return u;
}

}  // namespace ecr_detail

/// Recombines a same-qubit run into the canonical {Rz, Rx(pi/2), X} sequence
/// with the fewest physical pulses (Rz is free).
inline std::vector<Operation> resynthesize_1q(const std::vector<Operation>& run) {
  if (run.empty()) return {};
  QubitId q = run.front().qubits.at(0);
  for (const Operation& op : run) {
    if (op.qubits.size() != 1) throw std::invalid_argument("resynthesize_1q: non-1q operation");
    if (op.qubits[0] != q) throw std::invalid_argument("resynthesize_1q: mixed qubits");
  }
  return ecr_detail::resynthesize_matrix(ecr_detail::composite_of_run(run), q);
}

/// Physical 1q pulse count: every non-virtual single-qubit gate is one pulse.
inline std::uint64_t ecr_pulse_count(const Circuit& c) {
  std::uint64_t n = 0;
  for (const Operation& op : c.ops) {
    if (op.qubits.size() != 1) continue;
    if (op.gate.kind == GateKind::Rz || op.gate.kind == GateKind::Delay) continue;
    ++n;
  }
  return n;
}

struct EcrOptions {
  bool merge = true;    // cross-gate single-qubit merging
  bool fuse_zz = false; // rewrite CX-Rz-CX sandwiches into one AceCR
};

namespace ecr_detail {

inline bool is_native_1q(const Gate& g) {
  if (g.kind == GateKind::X || g.kind == GateKind::Rz) return true;
  if (g.kind == GateKind::Rx) return std::abs(std::abs(g.theta()) - PI / 2) < 1e-12;
  return false;
}

/// CX-Rz-CX with the rotation on the target and nothing else touching the
/// pair in between realizes exp(-i theta/2 ZZ).
inline std::vector<Operation> fuse_zz_patterns(const std::vector<Operation>& in) {
  std::vector<Operation> out;
  std::size_t i = 0;
  auto touches_pair = [](const Operation& op, QubitId a, QubitId b) {
    return op.touches(a) || op.touches(b);
  };
  while (i < in.size()) {
    const Operation& op = in[i];
    if (op.gate.kind == GateKind::Cx) {
      QubitId a = op.qubits[0], b = op.qubits[1];
      std::size_t j = i + 1;
      while (j < in.size() && !touches_pair(in[j], a, b)) ++j;
      if (j < in.size() && in[j].gate.kind == GateKind::Rz && in[j].qubits[0] == b) {
        std::size_t k = j + 1;
        while (k < in.size() && !touches_pair(in[k], a, b)) ++k;
        if (k < in.size() && in[k].gate == op.gate && in[k].qubits == op.qubits) {
          for (const Operation& zz : decompose_zz(in[j].gate.theta(), a, b)) out.push_back(zz);
          std::vector<Operation> tail(in.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                      in.end());
          tail.erase(tail.begin() + static_cast<std::ptrdiff_t>(j - i - 1));
          tail.erase(tail.begin() + static_cast<std::ptrdiff_t>(k - i - 2));
          for (const Operation& rest : fuse_zz_patterns(tail)) out.push_back(rest);
          return out;
        }
      }
    }
    out.push_back(op);
    ++i;
  }
  return out;
}

}  // namespace ecr_detail

/// Lowers a circuit to {Rz, Rx(pi/2), X, AceCR}. With merging enabled every
/// maximal same-qubit 1q run is recombined, including runs that straddle
/// former CX boundaries; without it each gate is translated on its own.
inline Circuit compile_ecr(const Circuit& in, EcrOptions opt = {}) {
  using namespace ecr_detail;

  // Lower two-qubit and global gates to native plus plain 1q gates.
  std::vector<Operation> flat;
  std::vector<Operation> source = opt.fuse_zz ? fuse_zz_patterns(in.ops) : in.ops;
  for (const Operation& op : source) {
    switch (op.gate.kind) {
    case GateKind::Cx:
      for (const Operation& d : decompose_cx(op)) flat.push_back(d);
      break;
    case GateKind::Cz: {
      QubitId a = op.qubits[0], b = op.qubits[1];
      flat.emplace_back(h_gate(), std::vector<QubitId>{b});
      for (const Operation& d : decompose_cx(Operation(cx_gate(), {a, b}))) flat.push_back(d);
      flat.emplace_back(h_gate(), std::vector<QubitId>{b});
      break;
    }
    case GateKind::Swap: {
      QubitId a = op.qubits[0], b = op.qubits[1];
      for (auto [c, t] : {std::pair{a, b}, std::pair{b, a}, std::pair{a, b}})
        for (const Operation& d : decompose_cx(Operation(cx_gate(), {c, t}))) flat.push_back(d);
      break;
    }
    case GateKind::Gr: {
      double theta = op.gate.params[0], phi = op.gate.params[1];
      for (QubitId q = 0; q < in.num_qubits; ++q) {
        flat.emplace_back(rz_gate(-phi), std::vector<QubitId>{q});
        flat.emplace_back(rx_gate(theta), std::vector<QubitId>{q});
        flat.emplace_back(rz_gate(phi), std::vector<QubitId>{q});
      }
      break;
    }
    default: flat.push_back(op);
    }
  }

  Circuit out(in.num_qubits);
  std::vector<std::vector<Operation>> pending(in.num_qubits);

  auto flush = [&](QubitId q) {
    if (pending[q].empty()) return;
    for (Operation& op : resynthesize_1q(pending[q])) out.ops.push_back(std::move(op));
    pending[q].clear();
  };

  for (const Operation& op : flat) {
    if (op.qubits.size() == 1 && op.gate.kind != GateKind::Delay) {
      if (opt.merge) {
        pending[op.qubits[0]].push_back(op);
      } else if (is_native_1q(op.gate) && op.gate.kind != GateKind::Rx) {
        out.ops.push_back(op);
      } else if (is_native_1q(op.gate) && op.gate.theta() > 0) {
        out.ops.push_back(op);
      } else {
        for (Operation& r : resynthesize_1q({op})) out.ops.push_back(std::move(r));
      }
      continue;
    }
    for (QubitId q : op.qubits) flush(q);
    if (op.gate.kind == GateKind::Gr)
      for (QubitId q = 0; q < in.num_qubits; ++q) flush(q);
    out.ops.push_back(op);
  }
  for (QubitId q = 0; q < in.num_qubits; ++q) flush(q);

  for (const Operation& op : out.ops) {
    if (op.qubits.size() == 1 && op.gate.kind != GateKind::Delay && !is_native_1q(op.gate))
      throw std::logic_error("compile_ecr produced a non-native gate");
    if (op.is_two_qubit() && op.gate.kind != GateKind::AceCr)
      throw std::logic_error("compile_ecr produced a non-native two-qubit gate");
  }
  return out;
}

}  // namespace qlower
