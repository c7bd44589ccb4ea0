#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qlower/circuit.hpp"
#include "qlower/counts.hpp"
#include "qlower/dag.hpp"
#include "qlower/unitary.hpp"
#include "support.hpp"

using namespace qlower;
using qlower::testing::expm_minus_i;
using qlower::testing::pauli_string;
using qlower::testing::random_circuit;

TEST_CASE("angle canonicalization lands in (-2pi, 2pi]") {
  CHECK(rz_gate(3 * PI).theta() == Catch::Approx(-PI));
  CHECK(rz_gate(3 * PI / 2).theta() == Catch::Approx(3 * PI / 2));
  CHECK(rz_gate(-3 * PI / 2).theta() == Catch::Approx(-3 * PI / 2));
  CHECK(rz_gate(2 * PI).theta() == Catch::Approx(2 * PI));
  CHECK(rz_gate(9 * PI / 2).theta() == Catch::Approx(PI / 2));
  // Period-4pi reduction is exact on the matrix level.
  CHECK(gate_matrix_1q(rz_gate(5 * PI)).isApprox(gate_matrix_1q(rz_gate(canonical_angle(5 * PI))), 1e-14));
}

TEST_CASE("operation validation") {
  Circuit c(2);
  CHECK_THROWS_AS(c.cx(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(c.x(2), std::out_of_range);
  CHECK_THROWS_AS(Gate(GateKind::Rz), std::invalid_argument);
  CHECK_THROWS_AS(Gate(GateKind::X, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Gate(GateKind::Delay, -16.0), std::invalid_argument);
  CHECK_NOTHROW(c.delay(32, 1));
}

TEST_CASE("unitary_of identity cases") {
  Circuit empty(1);
  CHECK(unitary_of(empty).isApprox(Mat::Identity(2, 2), 1e-15));

  Circuit xx(1);
  xx.x(0);
  xx.x(0);
  CHECK((unitary_of(xx) - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("GR(pi, 0) on one qubit equals exp(-i pi X/2)") {
  Circuit c(1);
  c.gr(PI, 0);
  Mat expected = expm_minus_i(PI * pauli_string("X") / 2.0);  // = -iX
  CHECK(equiv_phase(unitary_of(c), expected, 1e-12));
  CHECK((unitary_of(c) - expected).cwiseAbs().maxCoeff() < 1e-12);  // exact, not just up to phase
}

TEST_CASE("GR acts as the same equatorial rotation on every qubit") {
  Circuit c(3);
  c.gr(0.7, 1.1);
  Mat direct = unitary_of(c);
  Mat h = Mat::Zero(8, 8);
  for (std::string p : {"IIX", "IXI", "XII"}) h += std::cos(1.1) * pauli_string(p) / 2;
  for (std::string p : {"IIY", "IYI", "YII"}) h += std::sin(1.1) * pauli_string(p) / 2;
  CHECK((direct - expm_minus_i(0.7 * h)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("unitary_of output is unitary for random circuits") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 25; ++trial) {
    qlower::testing::RandomPool pool;
    pool.global_gr = true;
    pool.delays = true;
    Circuit c = random_circuit(rng, 1 + trial % 4, 15, pool);
    CHECK(is_unitary(unitary_of(c), 1e-10));
  }
}

TEST_CASE("equiv_phase basics") {
  std::mt19937 rng(7);
  Mat u = unitary_of(random_circuit(rng, 2, 8));
  CHECK(equiv_phase(u, u, 1e-12));
  CHECK(equiv_phase(u, std::exp(Complex(0, PI / 7)) * u, 1e-12));
  Mat x = pauli_string("X"), z = pauli_string("Z");
  CHECK_FALSE(equiv_phase(x, z, 1e-6));
  Mat small = Mat::Identity(2, 2);
  CHECK_THROWS_AS(equiv_phase(u, small, 1e-9), std::invalid_argument);
}

TEST_CASE("equiv_perm basics") {
  std::mt19937 rng(8);
  Mat u = unitary_of(random_circuit(rng, 2, 8));
  // Identity permutation reduces to equiv_phase.
  CHECK(equiv_perm(u, u, {0, 1}, 1e-12));

  // SWAP is a pure relabeling.
  Circuit sw(2);
  sw.swap(0, 1);
  CHECK(equiv_perm(unitary_of(sw), Mat::Identity(4, 4), {1, 0}, 1e-12));

  // CX(0,1) then CX(1,0) equals CX(1,0) up to swapping the labels.
  Circuit two(2);
  two.cx(0, 1);
  two.cx(1, 0);
  Circuit one(2);
  one.cx(1, 0);
  CHECK(equiv_perm(unitary_of(two), unitary_of(one), {1, 0}, 1e-12));

  CHECK_THROWS_AS(equiv_perm(u, u, {0, 0}, 1e-9), std::invalid_argument);
}

TEST_CASE("equiv_diag applies per-qubit Rz frames") {
  Circuit plain = qlower::testing::ghz4_circuit();
  Circuit framed = plain;
  framed.rz(PI, 0);
  framed.rz(PI / 3, 2);
  CHECK(equiv_diag(unitary_of(framed), unitary_of(plain), {PI, 0, PI / 3, 0}, 1e-12));
  CHECK_FALSE(equiv_diag(unitary_of(framed), unitary_of(plain), {0, 0, 0, 0}, 1e-6));
}

TEST_CASE("dag_of direct dependencies") {
  Circuit a(2);
  a.x(0);
  a.x(1);
  DepGraph g = dag_of(a);
  CHECK(g.succ[0].empty());
  CHECK(g.succ[1].empty());

  Circuit b(2);
  b.x(0);
  b.cx(0, 1);
  g = dag_of(b);
  REQUIRE(g.succ[0].size() == 1);
  CHECK(g.succ[0][0] == 1);

  Circuit c(2);
  c.h(0);
  c.gr(PI / 2, 0);
  c.h(1);
  g = dag_of(c);
  REQUIRE(g.succ[0] == std::vector<std::uint32_t>{1});
  REQUIRE(g.succ[1] == std::vector<std::uint32_t>{2});
}

TEST_CASE("unitary invariant under topological reordering") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    qlower::testing::RandomPool pool;
    pool.global_gr = (trial % 3 == 0);
    Circuit c = random_circuit(rng, 2 + trial % 3, 20, pool);
    DepGraph g = dag_of(c);

    // Random topological order via repeated ready-set sampling.
    std::vector<int> missing(g.size());
    std::vector<std::uint32_t> ready, order;
    for (std::uint32_t i = 0; i < g.size(); ++i) {
      missing[i] = static_cast<int>(g.pred[i].size());
      if (missing[i] == 0) ready.push_back(i);
    }
    while (!ready.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, ready.size() - 1);
      std::size_t k = pick(rng);
      std::uint32_t node = ready[k];
      ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(k));
      order.push_back(node);
      for (std::uint32_t s : g.succ[node])
        if (--missing[s] == 0) ready.push_back(s);
    }
    REQUIRE(is_topological_order(g, order));
    CHECK(equiv_phase(unitary_of(reorder(c, order)), unitary_of(c), 1e-9));
  }
}

TEST_CASE("gate_counts tallies") {
  Circuit empty(1);
  GateTally t = gate_counts(empty);
  CHECK(t.total == 0);
  CHECK(t.gr_pulse_area == 0.0);

  Circuit g(2);
  g.gr(PI / 2, 0);
  g.gr(PI, PI);
  t = gate_counts(g);
  CHECK(t.count(GateKind::Gr) == 2);
  CHECK(t.gr_pulse_area == Catch::Approx(1.5 * PI));

  t = gate_counts(qlower::testing::bv_circuit(5));
  CHECK(t.count(GateKind::Cx) == 4);
  CHECK(t.two_qubit == 4);
}

TEST_CASE("hellinger fidelity") {
  CountsDistribution d;
  d.add("00", 10);
  d.add("11", 30);
  CHECK(hellinger_fidelity(d, d) == Catch::Approx(1.0));

  CountsDistribution p, q;
  p.add("00", 5);
  q.add("11", 5);
  CHECK(hellinger_fidelity(p, q) == 0.0);

  CountsDistribution half, point;
  half.add("0", 50);
  half.add("1", 50);
  point.add("0", 77);
  CHECK(hellinger_fidelity(half, point) == Catch::Approx(0.5));
  CHECK(hellinger_fidelity(point, half) == Catch::Approx(0.5));  // symmetric

  CountsDistribution zero;
  CHECK_THROWS_AS(hellinger_fidelity(zero, d), std::invalid_argument);
}

TEST_CASE("relative strength") {
  CountsDistribution d;
  d.add("1111", 890);
  d.add("0111", 50);
  d.add("1011", 31);
  d.add("0001", 12);
  CHECK(relative_strength(d, "1111") == Catch::Approx(17.8));

  CountsDistribution pure;
  pure.add("11", 100);
  CHECK(std::isinf(relative_strength(pure, "11")));
  CHECK(relative_strength(pure, "00") == 0.0);
}
