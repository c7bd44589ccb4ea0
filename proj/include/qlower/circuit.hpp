#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlower {

using QubitId = std::uint32_t;

inline constexpr double PI = 3.14159265358979323846;

enum class GateKind : std::uint8_t {
  X,
  Y,
  Z,
  H,
  Sx,
  Rz,
  Rx,
  Cx,
  Cz,
  Swap,
  AceCr,
  Gr,
  PhXZ,
  Delay,
};

inline const char* gate_name(GateKind k) {
  switch (k) {
  case GateKind::X: return "x";
  case GateKind::Y: return "y";
  case GateKind::Z: return "z";
  case GateKind::H: return "h";
  case GateKind::Sx: return "sx";
  case GateKind::Rz: return "rz";
  case GateKind::Rx: return "rx";
  case GateKind::Cx: return "cx";
  case GateKind::Cz: return "cz";
  case GateKind::Swap: return "swap";
  case GateKind::AceCr: return "acecr";
  case GateKind::Gr: return "gr";
  case GateKind::PhXZ: return "phxz";
  case GateKind::Delay: return "delay";
  }
  return "?";
}

/// Number of qubit operands. Gr addresses every qubit and takes none explicitly.
inline int gate_arity(GateKind k) {
  switch (k) {
  case GateKind::Cx:
  case GateKind::Cz:
  case GateKind::Swap:
  case GateKind::AceCr: return 2;
  case GateKind::Gr: return 0;
  default: return 1;
  }
}

inline int gate_param_count(GateKind k) {
  switch (k) {
  case GateKind::Rz:
  case GateKind::Rx:
  case GateKind::AceCr:
  case GateKind::Delay: return 1;
  case GateKind::Gr: return 2;
  case GateKind::PhXZ: return 3;
  default: return 0;
  }
}

/// Reduce an angle into (-2*pi, 2*pi]. Rotation gates have period 4*pi as
/// matrices, so this is exact (no hidden global-phase change).
inline double canonical_angle(double theta) {
  double t = std::fmod(theta, 4.0 * PI);
  if (t > 2.0 * PI) t -= 4.0 * PI;
  if (t <= -2.0 * PI) t += 4.0 * PI;
  return t;
}

/// Reduce a half-turn exponent into (-1, 1]. Z^t has period 2 in t exactly.
inline double canonical_exponent(double t) {
  double v = std::fmod(t, 2.0);
  if (v > 1.0) v -= 2.0;
  if (v <= -1.0) v += 2.0;
  return v;
}

inline double canonical_phase(double phi) {
  double p = std::fmod(phi, 2.0 * PI);
  if (p < 0) p += 2.0 * PI;
  return p;
}

struct Gate {
  GateKind kind{GateKind::X};
  std::array<double, 3> params{0.0, 0.0, 0.0};

  Gate() = default;
  explicit Gate(GateKind k) : kind(k) {
    if (gate_param_count(k) != 0)
      throw std::invalid_argument(std::string(gate_name(k)) + " requires parameters");
  }
  Gate(GateKind k, double p0) : kind(k) {
    if (gate_param_count(k) != 1)
      throw std::invalid_argument(std::string(gate_name(k)) + " takes no single parameter");
    if (!std::isfinite(p0)) throw std::invalid_argument("non-finite gate parameter");
    switch (k) {
    case GateKind::Rz:
    case GateKind::Rx:
    case GateKind::AceCr: params[0] = canonical_angle(p0); break;
    case GateKind::Delay:
      if (p0 < 0 || p0 != std::floor(p0)) throw std::invalid_argument("delay takes a non-negative integer dt count");
      params[0] = p0;
      break;
    default: params[0] = p0;
    }
  }
  Gate(GateKind k, double p0, double p1) : kind(k) {
    if (gate_param_count(k) != 2)
      throw std::invalid_argument(std::string(gate_name(k)) + " does not take two parameters");
    if (!std::isfinite(p0) || !std::isfinite(p1)) throw std::invalid_argument("non-finite gate parameter");
    params[0] = canonical_angle(p0);
    params[1] = canonical_phase(p1);
  }
  Gate(GateKind k, double p0, double p1, double p2) : kind(k) {
    if (gate_param_count(k) != 3)
      throw std::invalid_argument(std::string(gate_name(k)) + " does not take three parameters");
    if (!std::isfinite(p0) || !std::isfinite(p1) || !std::isfinite(p2))
      throw std::invalid_argument("non-finite gate parameter");
    if (p0 < -1e-12 || p0 > 1.0 + 1e-12) throw std::invalid_argument("phxz x exponent must lie in [0, 1]");
    params[0] = std::min(1.0, std::max(0.0, p0));
    params[1] = canonical_exponent(p1);
    params[2] = canonical_exponent(p2);
  }

  double theta() const { return params[0]; }
  double phi() const { return params[1]; }

  bool operator==(const Gate& o) const { return kind == o.kind && params == o.params; }
  bool operator!=(const Gate& o) const { return !(*this == o); }
};

inline Gate x_gate() { return Gate(GateKind::X); }
inline Gate y_gate() { return Gate(GateKind::Y); }
inline Gate z_gate() { return Gate(GateKind::Z); }
inline Gate h_gate() { return Gate(GateKind::H); }
inline Gate sx_gate() { return Gate(GateKind::Sx); }
inline Gate rz_gate(double theta) { return Gate(GateKind::Rz, theta); }
inline Gate rx_gate(double theta) { return Gate(GateKind::Rx, theta); }
inline Gate cx_gate() { return Gate(GateKind::Cx); }
inline Gate cz_gate() { return Gate(GateKind::Cz); }
inline Gate swap_gate() { return Gate(GateKind::Swap); }
inline Gate acecr_gate(double theta) { return Gate(GateKind::AceCr, theta); }
inline Gate gr_gate(double theta, double phi) { return Gate(GateKind::Gr, theta, phi); }
inline Gate phxz_gate(double x, double z, double a) { return Gate(GateKind::PhXZ, x, z, a); }
inline Gate delay_gate(std::uint64_t dt) { return Gate(GateKind::Delay, static_cast<double>(dt)); }

struct Operation {
  Gate gate;
  std::vector<QubitId> qubits;  // empty for the global Gr gate

  Operation() = default;
  Operation(Gate g, std::vector<QubitId> qs) : gate(g), qubits(std::move(qs)) {
    int arity = gate_arity(gate.kind);
    if (static_cast<int>(qubits.size()) != arity)
      throw std::invalid_argument(std::string(gate_name(gate.kind)) + ": wrong operand count");
    if (arity == 2 && qubits[0] == qubits[1])
      throw std::invalid_argument("two-qubit gate with duplicate operand");
  }

  bool is_global() const { return gate.kind == GateKind::Gr; }
  bool is_two_qubit() const { return qubits.size() == 2; }

  /// True when the op acts on qubit q (a global gate acts on all of them).
  bool touches(QubitId q) const {
    if (is_global()) return true;
    for (QubitId o : qubits)
      if (o == q) return true;
    return false;
  }

  bool operator==(const Operation& o) const { return gate == o.gate && qubits == o.qubits; }
  bool operator!=(const Operation& o) const { return !(*this == o); }
};

/// Ordered gate list on a fixed register. List order is temporal order:
/// earlier entries act first.
struct Circuit {
  std::uint32_t num_qubits{0};
  std::vector<Operation> ops;

  Circuit() = default;
  explicit Circuit(std::uint32_t n) : num_qubits(n) {
    if (n == 0) throw std::invalid_argument("circuit needs at least one qubit");
  }

  void push(Operation op) {
    for (QubitId q : op.qubits)
      if (q >= num_qubits) throw std::out_of_range("qubit index out of range");
    ops.push_back(std::move(op));
  }
  void push(Gate g, std::vector<QubitId> qs) { push(Operation(std::move(g), std::move(qs))); }

  void x(QubitId q) { push(x_gate(), {q}); }
  void y(QubitId q) { push(y_gate(), {q}); }
  void z(QubitId q) { push(z_gate(), {q}); }
  void h(QubitId q) { push(h_gate(), {q}); }
  void sx(QubitId q) { push(sx_gate(), {q}); }
  void rz(double theta, QubitId q) { push(rz_gate(theta), {q}); }
  void rx(double theta, QubitId q) { push(rx_gate(theta), {q}); }
  void cx(QubitId c, QubitId t) { push(cx_gate(), {c, t}); }
  void cz(QubitId a, QubitId b) { push(cz_gate(), {a, b}); }
  void swap(QubitId a, QubitId b) { push(swap_gate(), {a, b}); }
  void acecr(double theta, QubitId c, QubitId t) { push(acecr_gate(theta), {c, t}); }
  void gr(double theta, double phi) { push(gr_gate(theta, phi), {}); }
  void phxz(double x, double z, double a, QubitId q) { push(phxz_gate(x, z, a), {q}); }
  void delay(std::uint64_t dt, QubitId q) { push(delay_gate(dt), {q}); }

  bool operator==(const Circuit& o) const { return num_qubits == o.num_qubits && ops == o.ops; }
  bool operator!=(const Circuit& o) const { return !(*this == o); }
};

/// Angles below this threshold count as identity rotations and may be dropped.
inline constexpr double ANGLE_EPS = 1e-12;

inline bool is_identity_angle(double theta) {
  double t = std::fmod(std::abs(theta), 2.0 * PI);
  return t < ANGLE_EPS || (2.0 * PI - t) < ANGLE_EPS;
}

}  // namespace qlower
