#pragma once

#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qlower/circuit.hpp"
#include "qlower/unitary.hpp"

namespace qlower::testing {

// Independent matrix-exponential oracle: exp(-i H) for Hermitian H via
// eigendecomposition. Deliberately avoids the closed forms the library uses.
inline Mat expm_minus_i(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const auto& vals = es.eigenvalues();
  const Mat& vecs = es.eigenvectors();
  Mat d = Mat::Zero(h.rows(), h.cols());
  for (Eigen::Index k = 0; k < vals.size(); ++k)
    d(k, k) = std::exp(Complex(0, -vals(k)));
  return vecs * d * vecs.adjoint();
}

inline Mat2 pauli(char p) {
  Mat2 m;
  switch (p) {
  case 'I': m = Mat2::Identity(); break;
  case 'X': m << 0, 1, 1, 0; break;
  case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
  case 'Z': m << 1, 0, 0, -1; break;
  default: throw std::invalid_argument("bad pauli");
  }
  return m;
}

// Kronecker product with qubit 0 as the least significant bit: the string is
// given most-significant qubit first, e.g. "ZX" means Z on qubit 1, X on 0.
inline Mat pauli_string(const std::string& s) {
  Mat acc = Mat::Identity(1, 1);
  for (char ch : s) {
    Mat2 p = pauli(ch);
    Mat next(acc.rows() * 2, acc.cols() * 2);
    for (Eigen::Index r = 0; r < acc.rows(); ++r)
      for (Eigen::Index c = 0; c < acc.cols(); ++c)
        next.block(2 * r, 2 * c, 2, 2) = acc(r, c) * p;
    acc = next;
  }
  return acc;
}

struct RandomPool {
  bool two_qubit = true;
  bool cz_only = false;   // restrict 2q gates to CZ
  bool global_gr = false;
  bool delays = false;
};

inline Circuit random_circuit(std::mt19937& rng, std::uint32_t num_qubits, int num_ops,
                              RandomPool pool = {}) {
  Circuit c(num_qubits);
  std::uniform_real_distribution<double> angle(-2 * PI, 2 * PI);
  std::uniform_int_distribution<int> qdist(0, static_cast<int>(num_qubits) - 1);
  std::vector<int> choices = {0, 1, 2, 3, 4, 5, 6};  // 1q kinds
  if (pool.two_qubit && num_qubits >= 2) {
    choices.push_back(7);
    choices.push_back(7);  // weight 2q ops up a little
  }
  if (pool.global_gr) choices.push_back(8);
  if (pool.delays) choices.push_back(9);
  std::uniform_int_distribution<std::size_t> pick(0, choices.size() - 1);
  for (int i = 0; i < num_ops; ++i) {
    int what = choices[pick(rng)];
    QubitId a = static_cast<QubitId>(qdist(rng));
    switch (what) {
    case 0: c.x(a); break;
    case 1: c.y(a); break;
    case 2: c.z(a); break;
    case 3: c.h(a); break;
    case 4: c.sx(a); break;
    case 5: c.rz(angle(rng), a); break;
    case 6: c.rx(angle(rng), a); break;
    case 7: {
      QubitId b = static_cast<QubitId>(qdist(rng));
      while (b == a) b = static_cast<QubitId>(qdist(rng));
      if (pool.cz_only) {
        c.cz(a, b);
      } else {
        switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
        case 0: c.cx(a, b); break;
        case 1: c.cz(a, b); break;
        case 2: c.swap(a, b); break;
        default: c.acecr(angle(rng), a, b); break;
        }
      }
      break;
    }
    case 8: c.gr(angle(rng), std::abs(angle(rng)) / 2); break;
    case 9: c.delay(16 * std::uniform_int_distribution<int>(1, 40)(rng), a); break;
    }
  }
  return c;
}

// Bernstein-Vazirani with an all-ones secret: hub is the last qubit, CX from
// every other qubit into it, nearest leaf first (the CXs commute).
inline Circuit bv_circuit(std::uint32_t n) {
  Circuit c(n);
  QubitId hub = n - 1;
  for (QubitId q = 0; q + 1 < n; ++q) c.h(q);
  c.x(hub);
  c.h(hub);
  for (QubitId q = n - 1; q-- > 0;) c.cx(q, hub);
  for (QubitId q = 0; q + 1 < n; ++q) c.h(q);
  return c;
}

// Four-qubit GHZ over CZ + H on three edges of a square (0-1, 1-2, 0-3),
// written so the Hadamard moments are {0,1},{1,2},{2,3},{3}.
inline Circuit ghz4_circuit() {
  Circuit c(4);
  c.h(0);
  c.h(1);
  c.cz(0, 1);
  c.h(1);
  c.h(2);
  c.cz(1, 2);
  c.h(2);
  c.h(3);
  c.cz(0, 3);
  c.h(3);
  return c;
}

}  // namespace qlower::testing
