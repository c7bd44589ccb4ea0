#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace qlower {

/// Measurement outcome histogram. Bitstring keys are printed most-significant
/// qubit first (qubit 0 is the rightmost character).
struct CountsDistribution {
  std::map<std::string, std::uint64_t> counts;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& [k, v] : counts) t += v;
    return t;
  }
  void add(const std::string& bits, std::uint64_t n = 1) { counts[bits] += n; }
  bool empty() const { return counts.empty(); }
};

/// (sum_i sqrt(p_i q_i))^2 over the normalized distributions.
inline double hellinger_fidelity(const CountsDistribution& p, const CountsDistribution& q) {
  const double tp = static_cast<double>(p.total());
  const double tq = static_cast<double>(q.total());
  if (tp <= 0 || tq <= 0) throw std::invalid_argument("hellinger_fidelity: zero total shots");
  double acc = 0;
  for (const auto& [bits, np] : p.counts) {
    auto it = q.counts.find(bits);
    if (it == q.counts.end()) continue;
    acc += std::sqrt((static_cast<double>(np) / tp) * (static_cast<double>(it->second) / tq));
  }
  return acc * acc;
}

/// Correct-outcome count divided by the largest incorrect-outcome count.
/// All mass on the correct outcome gives +infinity; a missing correct outcome
/// gives 0.
inline double relative_strength(const CountsDistribution& counts, const std::string& correct) {
  if (counts.empty()) throw std::invalid_argument("relative_strength: empty distribution");
  std::uint64_t good = 0, worst = 0;
  for (const auto& [bits, n] : counts.counts) {
    if (bits == correct)
      good = n;
    else
      worst = std::max(worst, n);
  }
  if (good == 0) return 0.0;
  if (worst == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(good) / static_cast<double>(worst);
}

}  // namespace qlower
