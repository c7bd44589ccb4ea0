#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qlower/circuit.hpp"

namespace qlower {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec = Eigen::VectorXcd;

inline constexpr std::uint32_t MAX_ORACLE_QUBITS = 12;

namespace mats {

inline Mat2 identity2() { return Mat2::Identity(); }

inline Mat2 x() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}

inline Mat2 y() {
  Mat2 m;
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline Mat2 z() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}

inline Mat2 h() {
  Mat2 m;
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

inline Mat2 sx() {
  Mat2 m;
  m << Complex(0.5, 0.5), Complex(0.5, -0.5), Complex(0.5, -0.5), Complex(0.5, 0.5);
  return m;
}

inline Mat2 rz(double theta) {
  Mat2 m = Mat2::Zero();
  m(0, 0) = std::exp(Complex(0, -theta / 2));
  m(1, 1) = std::exp(Complex(0, theta / 2));
  return m;
}

inline Mat2 rx(double theta) {
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Mat2 m;
  m << c, Complex(0, -s), Complex(0, -s), c;
  return m;
}

inline Mat2 ry(double theta) {
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Mat2 m;
  m << c, -s, s, c;
  return m;
}

/// Rotation by theta about the equatorial axis at azimuth phi:
/// exp(-i*theta*(cos(phi) X + sin(phi) Y)/2). This is the per-qubit action of
/// GR(theta, phi).
inline Mat2 r_equatorial(double theta, double phi) {
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Mat2 m;
  m(0, 0) = c;
  m(0, 1) = Complex(0, -s) * std::exp(Complex(0, -phi));
  m(1, 0) = Complex(0, -s) * std::exp(Complex(0, phi));
  m(1, 1) = c;
  return m;
}

/// Z^{z+a} X^x Z^{-a} in half-turn exponents, the PhXZ form.
inline Mat2 phxz(double x, double zz, double a) {
  Mat2 zpow1 = Mat2::Zero(), zpow2 = Mat2::Zero();
  zpow1(0, 0) = 1;
  zpow1(1, 1) = std::exp(Complex(0, PI * (zz + a)));
  zpow2(0, 0) = 1;
  zpow2(1, 1) = std::exp(Complex(0, -PI * a));
  double c = std::cos(PI * x / 2), s = std::sin(PI * x / 2);
  Mat2 xpow;
  Complex ph = std::exp(Complex(0, PI * x / 2));
  xpow << ph * c, ph * Complex(0, -s), ph * Complex(0, -s), ph * c;
  return zpow1 * xpow * zpow2;
}

inline Mat4 cx() {
  // Control is the gate-local LSB (first operand), target the second.
  Mat4 m = Mat4::Zero();
  m(0, 0) = 1;
  m(3, 1) = 1;
  m(2, 2) = 1;
  m(1, 3) = 1;
  return m;
}

inline Mat4 cz() {
  Mat4 m = Mat4::Identity();
  m(3, 3) = -1;
  return m;
}

inline Mat4 swap() {
  Mat4 m = Mat4::Zero();
  m(0, 0) = 1;
  m(2, 1) = 1;
  m(1, 2) = 1;
  m(3, 3) = 1;
  return m;
}

/// exp(-i*theta/2 * Z(ctl) X(tgt)) with the control as gate-local LSB.
inline Mat4 rzx(double theta) {
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  // Z(ctl) X(tgt) in local index order (tgt bit, ctl bit) = |t c>.
  Mat4 zx = Mat4::Zero();
  zx(2, 0) = 1;
  zx(3, 1) = -1;
  zx(0, 2) = 1;
  zx(1, 3) = -1;
  return c * Mat4::Identity() - Complex(0, s) * zx;
}

/// AceCR(theta): R_ZX(theta) with the echo X left on the control.
inline Mat4 acecr(double theta) {
  Mat4 xc = Mat4::Zero();
  xc(1, 0) = 1;
  xc(0, 1) = 1;
  xc(3, 2) = 1;
  xc(2, 3) = 1;
  return rzx(theta) * xc;
}

}  // namespace mats

/// Dense unitary of a one-qubit gate kind (Gr handled per qubit by callers).
inline Mat2 gate_matrix_1q(const Gate& g) {
  switch (g.kind) {
  case GateKind::X: return mats::x();
  case GateKind::Y: return mats::y();
  case GateKind::Z: return mats::z();
  case GateKind::H: return mats::h();
  case GateKind::Sx: return mats::sx();
  case GateKind::Rz: return mats::rz(g.params[0]);
  case GateKind::Rx: return mats::rx(g.params[0]);
  case GateKind::PhXZ: return mats::phxz(g.params[0], g.params[1], g.params[2]);
  case GateKind::Delay: return mats::identity2();
  default: throw std::invalid_argument("not a one-qubit gate");
  }
}

inline Mat4 gate_matrix_2q(const Gate& g) {
  switch (g.kind) {
  case GateKind::Cx: return mats::cx();
  case GateKind::Cz: return mats::cz();
  case GateKind::Swap: return mats::swap();
  case GateKind::AceCr: return mats::acecr(g.params[0]);
  default: throw std::invalid_argument("not a two-qubit gate");
  }
}

namespace detail {

inline void apply_1q_inplace(Mat& u, const Mat2& g, QubitId q) {
  const Eigen::Index dim = u.rows();
  const Eigen::Index bit = Eigen::Index(1) << q;
  for (Eigen::Index col = 0; col < u.cols(); ++col) {
    for (Eigen::Index base = 0; base < dim; ++base) {
      if (base & bit) continue;
      const Complex a = u(base, col);
      const Complex b = u(base | bit, col);
      u(base, col) = g(0, 0) * a + g(0, 1) * b;
      u(base | bit, col) = g(1, 0) * a + g(1, 1) * b;
    }
  }
}

inline void apply_2q_inplace(Mat& u, const Mat4& g, QubitId q0, QubitId q1) {
  const Eigen::Index dim = u.rows();
  const Eigen::Index b0 = Eigen::Index(1) << q0;  // gate-local LSB
  const Eigen::Index b1 = Eigen::Index(1) << q1;
  for (Eigen::Index col = 0; col < u.cols(); ++col) {
    for (Eigen::Index base = 0; base < dim; ++base) {
      if (base & (b0 | b1)) continue;
      Complex v[4] = {u(base, col), u(base | b0, col), u(base | b1, col), u(base | b0 | b1, col)};
      for (int r = 0; r < 4; ++r) {
        Complex acc = 0;
        for (int c = 0; c < 4; ++c) acc += g(r, c) * v[c];
        Eigen::Index idx = base | (r & 1 ? b0 : 0) | (r & 2 ? b1 : 0);
        u(idx, col) = acc;
      }
    }
  }
}

}  // namespace detail

/// Left-multiplies the unitary of one operation onto u (qubit 0 is the
/// least-significant state-index bit).
inline void apply_operation(Mat& u, const Operation& op, std::uint32_t num_qubits) {
  switch (op.gate.kind) {
  case GateKind::Gr: {
    Mat2 r = mats::r_equatorial(op.gate.params[0], op.gate.params[1]);
    for (QubitId q = 0; q < num_qubits; ++q) detail::apply_1q_inplace(u, r, q);
    break;
  }
  case GateKind::Cx:
  case GateKind::Cz:
  case GateKind::Swap:
  case GateKind::AceCr:
    detail::apply_2q_inplace(u, gate_matrix_2q(op.gate), op.qubits[0], op.qubits[1]);
    break;
  case GateKind::Delay: break;
  default: detail::apply_1q_inplace(u, gate_matrix_1q(op.gate), op.qubits[0]);
  }
}

/// Composite unitary of a circuit in temporal order; the oracle every pass is
/// checked against.
inline Mat unitary_of(const Circuit& c) {
  if (c.num_qubits > MAX_ORACLE_QUBITS)
    throw std::invalid_argument("dense unitary limited to 12 qubits");
  const Eigen::Index dim = Eigen::Index(1) << c.num_qubits;
  Mat u = Mat::Identity(dim, dim);
  for (const Operation& op : c.ops) apply_operation(u, op, c.num_qubits);
  return u;
}

inline Vec statevector_of(const Circuit& c) {
  if (c.num_qubits > MAX_ORACLE_QUBITS)
    throw std::invalid_argument("dense statevector limited to 12 qubits");
  const Eigen::Index dim = Eigen::Index(1) << c.num_qubits;
  Mat v = Mat::Zero(dim, 1);
  v(0, 0) = 1;
  for (const Operation& op : c.ops) apply_operation(v, op, c.num_qubits);
  return v.col(0);
}

/// True iff u = exp(i a) v within tol elementwise, with the phase read off the
/// largest-magnitude entry of v.
inline bool equiv_phase(const Mat& u, const Mat& v, double tol) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("dimension mismatch");
  Eigen::Index r = 0, c = 0;
  v.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(v(r, c)) < 1e-14) return u.cwiseAbs().maxCoeff() <= tol;
  Complex ratio = u(r, c) / v(r, c);
  double mag = std::abs(ratio);
  if (mag < 1e-14) return false;
  Complex phase = ratio / mag;
  return (u - phase * v).cwiseAbs().maxCoeff() <= tol;
}

/// Permutation operator on state-index bits: bit q of the input index becomes
/// bit perm[q] of the output index.
inline Mat permutation_matrix(const std::vector<QubitId>& perm) {
  const std::uint32_t n = static_cast<std::uint32_t>(perm.size());
  std::vector<bool> seen(n, false);
  for (QubitId p : perm) {
    if (p >= n || seen[p]) throw std::invalid_argument("permutation is not a bijection");
    seen[p] = true;
  }
  const Eigen::Index dim = Eigen::Index(1) << n;
  Mat p = Mat::Zero(dim, dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    Eigen::Index out = 0;
    for (std::uint32_t q = 0; q < n; ++q)
      if (idx & (Eigen::Index(1) << q)) out |= Eigen::Index(1) << perm[q];
    p(out, idx) = 1;
  }
  return p;
}

/// True iff u ~ P_perm * v up to global phase.
inline bool equiv_perm(const Mat& u, const Mat& v, const std::vector<QubitId>& perm, double tol) {
  if (u.rows() != v.rows()) throw std::invalid_argument("dimension mismatch");
  return equiv_phase(u, permutation_matrix(perm) * v, tol);
}

/// True iff u ~ D * v up to global phase, where D applies Rz(frame[q]) on each
/// qubit q. Used to verify circuits whose trailing virtual rotations were
/// deferred to the measurement frame.
inline bool equiv_diag(const Mat& u, const Mat& v, const std::vector<double>& frame, double tol) {
  if (u.rows() != v.rows()) throw std::invalid_argument("dimension mismatch");
  Mat d = v;
  for (QubitId q = 0; q < frame.size(); ++q)
    if (!is_identity_angle(frame[q])) detail::apply_1q_inplace(d, mats::rz(frame[q]), q);
  return equiv_phase(u, d, tol);
}

inline bool is_unitary(const Mat& u, double tol) {
  Mat prod = u * u.adjoint();
  return (prod - Mat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace qlower
