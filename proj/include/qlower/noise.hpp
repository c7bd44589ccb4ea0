#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "qlower/circuit.hpp"
#include "qlower/counts.hpp"
#include "qlower/dd.hpp"
#include "qlower/schedule.hpp"
#include "qlower/unitary.hpp"

namespace qlower {

/// Per-gate-kind depolarizing fidelities (interpreted as average gate
/// fidelities), SPAM error, and an optional coherent idle error.
struct NoiseModel {
  double spam_fidelity_1q = 0.98;
  double gr_fidelity_per_qubit = 0.999;
  double rz_fidelity = 0.99;
  double cz_fidelity = 0.96;
  double fidelity_1q = 0.999;
  double fidelity_2q = 0.99;
  double coherent_idle_rate = 0.0;  // rad per dt of idle time
  IdleAxis idle_axis = IdleAxis::Z;

  void validate() const {
    for (double f : {spam_fidelity_1q, gr_fidelity_per_qubit, rz_fidelity, cz_fidelity,
                     fidelity_1q, fidelity_2q})
      if (!(f > 0.0) || f > 1.0) throw std::invalid_argument("fidelities must lie in (0, 1]");
  }

  double fidelity_for(GateKind k) const {
    switch (k) {
    case GateKind::Rz:
    case GateKind::Z: return rz_fidelity;  // virtual-leaning diagonal family
    case GateKind::Cz: return cz_fidelity;
    case GateKind::Gr: return gr_fidelity_per_qubit;
    case GateKind::Cx:
    case GateKind::Swap:
    case GateKind::AceCr: return fidelity_2q;
    case GateKind::Delay: return 1.0;
    default: return fidelity_1q;
    }
  }
};

using DensityMatrix = Mat;

namespace noise_detail {

/// Depolarizing probability for a gate fidelity F on a d-dimensional support:
/// p = (1 - F)(d + 1)/d, applied as rho -> (1-p) rho + p (I/d x Tr rho). The
/// convention is frozen here; it reproduces the published back-of-envelope
/// GHZ estimates to within their stated tolerance.
inline double depol_probability(double fidelity, Eigen::Index d) {
  return (1.0 - fidelity) * static_cast<double>(d + 1) / static_cast<double>(d);
}

/// rho -> (1-p) rho + p (I/d x Tr_supp rho) over the given support qubits.
inline void depolarize(Mat& rho, const std::vector<QubitId>& support, double fidelity,
                       std::uint32_t num_qubits) {
  if (fidelity >= 1.0) return;
  const Eigen::Index d = Eigen::Index(1) << support.size();
  const double p = depol_probability(fidelity, d);

  // Tr_supp(rho), embedded back with the support maximally mixed.
  const Eigen::Index dim = rho.rows();
  Mat mixed = Mat::Zero(dim, dim);
  Eigen::Index support_mask = 0;
  for (QubitId q : support) support_mask |= Eigen::Index(1) << q;
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      if ((r & support_mask) != (c & support_mask)) continue;  // off-diagonal in support dies
      Complex acc = 0;
      for (Eigen::Index s = 0; s < d; ++s) {
        Eigen::Index bits = 0;
        for (std::size_t k = 0; k < support.size(); ++k)
          if (s & (Eigen::Index(1) << k)) bits |= Eigen::Index(1) << support[k];
        acc += rho((r & ~support_mask) | bits, (c & ~support_mask) | bits);
      }
      mixed(r, c) = acc / static_cast<double>(d);
    }
  }
  (void)num_qubits;
  rho = (1.0 - p) * rho + p * mixed;
}

inline void apply_unitary(Mat& rho, const Operation& op, std::uint32_t n) {
  Mat a = rho;
  apply_operation(a, op, n);        // U rho
  Mat b = a.adjoint();
  apply_operation(b, op, n);        // U rho^dagger U^dagger ... adjoint below
  rho = b.adjoint();
}

}  // namespace noise_detail

/// Density-matrix simulation with depolarizing gate noise, SPAM error split
/// across preparation and readout, and (given a timing model) coherent stray
/// rotations across idle spans. The optional frame is applied noiselessly at
/// the end, matching its virtual-rotation semantics.
inline DensityMatrix simulate(const Circuit& c, const NoiseModel& noise,
                              const TimingModel* timing = nullptr,
                              const std::vector<double>* frame = nullptr) {
  using namespace noise_detail;
  noise.validate();
  if (c.num_qubits > 8) throw std::invalid_argument("simulate supports at most 8 qubits");
  const Eigen::Index dim = Eigen::Index(1) << c.num_qubits;
  Mat rho = Mat::Zero(dim, dim);
  rho(0, 0) = 1.0;

  // Half of the SPAM polarization at preparation, half before readout.
  const double lam = 2.0 * noise.spam_fidelity_1q - 1.0;
  const double spam_half = (std::sqrt(lam) + 1.0) / 2.0;
  auto spam_layer = [&] {
    for (QubitId q = 0; q < c.num_qubits; ++q) depolarize(rho, {q}, spam_half, c.num_qubits);
  };
  spam_layer();

  auto apply_noisy = [&](const Operation& op) {
    apply_unitary(rho, op, c.num_qubits);
    double f = noise.fidelity_for(op.gate.kind);
    if (f >= 1.0) return;
    if (op.gate.kind == GateKind::Gr) {
      for (QubitId q = 0; q < c.num_qubits; ++q) depolarize(rho, {q}, f, c.num_qubits);
    } else if (!op.qubits.empty()) {
      depolarize(rho, op.qubits, f, c.num_qubits);
    }
  };
  // Stray idle rotations are error terms, not gates: they get no channel.
  auto apply_stray = [&](QubitId q, std::uint64_t span) {
    double angle = canonical_angle(noise.coherent_idle_rate * static_cast<double>(span));
    if (is_identity_angle(angle)) return;
    Gate g = noise.idle_axis == IdleAxis::Z ? rz_gate(angle) : rx_gate(angle);
    apply_unitary(rho, Operation(g, {q}), c.num_qubits);
  };

  if (timing && noise.coherent_idle_rate != 0.0) {
    const Schedule s = schedule(c, *timing);
    struct Item {
      std::uint64_t start;
      std::size_t index;
    };
    std::vector<Item> order;
    for (std::size_t i = 0; i < c.ops.size(); ++i)
      if (c.ops[i].gate.kind != GateKind::Delay) order.push_back({s.ops[i].start, i});
    std::sort(order.begin(), order.end(), [](const Item& a, const Item& b) {
      return a.start != b.start ? a.start < b.start : a.index < b.index;
    });
    std::vector<std::uint64_t> last_end(c.num_qubits, 0);
    std::vector<bool> seen(c.num_qubits, false);
    for (const Item& it : order) {
      const Operation& op = c.ops[it.index];
      for (QubitId q = 0; q < c.num_qubits; ++q) {
        if (!op.touches(q)) continue;
        if (seen[q] && s.ops[it.index].start > last_end[q])
          apply_stray(q, s.ops[it.index].start - last_end[q]);
        seen[q] = true;
        last_end[q] = s.ops[it.index].end();
      }
      apply_noisy(op);
    }
    for (QubitId q = 0; q < c.num_qubits; ++q)
      if (seen[q] && s.makespan > last_end[q]) apply_stray(q, s.makespan - last_end[q]);
  } else {
    for (const Operation& op : c.ops) apply_noisy(op);
  }

  if (frame) {
    for (QubitId q = 0; q < c.num_qubits && q < frame->size(); ++q)
      if (!is_identity_angle((*frame)[q]))
        apply_unitary(rho, Operation(rz_gate((*frame)[q]), {q}), c.num_qubits);
  }
  spam_layer();
  return rho;
}

/// <psi| rho |psi>.
inline double state_fidelity(const DensityMatrix& rho, const Vec& psi) {
  if (rho.rows() != psi.size()) throw std::invalid_argument("dimension mismatch");
  return std::real((psi.adjoint() * rho * psi)(0, 0));
}

/// Multinomial sampling from the computational-basis diagonal with a seeded
/// generator; identical seeds give identical counts.
inline CountsDistribution sample_counts(const DensityMatrix& rho, std::uint64_t shots,
                                        std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample_counts: shots must be >= 1");
  const Eigen::Index dim = rho.rows();
  std::uint32_t n = 0;
  while ((Eigen::Index(1) << n) < dim) ++n;

  std::vector<double> cumulative(dim);
  double total = 0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    total += std::max(0.0, std::real(rho(i, i)));
    cumulative[i] = total;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, total);
  CountsDistribution counts;
  for (std::uint64_t s = 0; s < shots; ++s) {
    double r = u(rng);
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), r);
    Eigen::Index idx = it - cumulative.begin();
    if (idx >= dim) idx = dim - 1;
    std::string bits(n, '0');
    for (std::uint32_t q = 0; q < n; ++q)
      if (idx & (Eigen::Index(1) << q)) bits[n - 1 - q] = '1';
    counts.add(bits);
  }
  return counts;
}

inline bool density_matrix_valid(const DensityMatrix& rho, double tol_herm = 1e-10,
                                 double tol_trace = 1e-10) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol_herm) return false;
  if (std::abs(rho.trace() - Complex(1, 0)) > tol_trace) return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  return es.eigenvalues().minCoeff() > -1e-8;
}

}  // namespace qlower
