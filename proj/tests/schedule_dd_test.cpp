#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qlower/dag.hpp"
#include "qlower/dd.hpp"
#include "qlower/schedule.hpp"
#include "qlower/target_ecr.hpp"
#include "qlower/unitary.hpp"
#include "support.hpp"

using namespace qlower;

namespace {

void check_schedule_valid(const Circuit& c, const Schedule& s, const TimingModel& t) {
  REQUIRE(s.ops.size() == c.ops.size());
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    CHECK(s.ops[i].start % t.alignment == 0);
    CHECK(s.ops[i].end() <= s.makespan);
  }
  // No overlap on any shared qubit.
  for (QubitId q = 0; q < c.num_qubits; ++q) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> busy;
    for (std::size_t i = 0; i < c.ops.size(); ++i)
      if (c.ops[i].touches(q)) busy.emplace_back(s.ops[i].start, s.ops[i].end());
    std::sort(busy.begin(), busy.end());
    for (std::size_t i = 0; i + 1 < busy.size(); ++i) CHECK(busy[i].second <= busy[i + 1].first);
  }
}

}  // namespace

TEST_CASE("asap scheduling basics") {
  TimingModel t;
  Circuit c(1);
  c.x(0);
  Schedule s = schedule(c, t);
  CHECK(s.ops[0].start == 0);
  CHECK(s.makespan == 160);

  Circuit two(1);
  two.x(0);
  two.x(0);
  s = schedule(two, t);
  CHECK(s.ops[0].start == 0);
  CHECK(s.ops[1].start == 160);

  // Unaligned earliest start 100 rounds up to 112.
  Circuit misaligned(1);
  misaligned.delay(100, 0);
  misaligned.x(0);
  s = schedule(misaligned, t);
  CHECK(s.ops[1].start == 112);
}

TEST_CASE("asap and alap agree on makespan") {
  std::mt19937 rng(555);
  TimingModel t;
  for (int trial = 0; trial < 25; ++trial) {
    qlower::testing::RandomPool pool;
    pool.global_gr = (trial % 5 == 0);
    pool.delays = true;
    Circuit c = qlower::testing::random_circuit(rng, 1 + trial % 4, 16, pool);
    Schedule asap = schedule(c, t, SchedulePolicy::Asap);
    Schedule alap = schedule(c, t, SchedulePolicy::Alap);
    INFO("trial " << trial);
    check_schedule_valid(c, asap, t);
    check_schedule_valid(c, alap, t);
    CHECK(asap.makespan == alap.makespan);
    for (std::size_t i = 0; i < c.ops.size(); ++i) CHECK(alap.ops[i].start >= asap.ops[i].start);
  }
}

TEST_CASE("idle window detection") {
  TimingModel t;

  Circuit packed(1);
  packed.x(0);
  packed.x(0);
  CHECK(find_idle_windows(packed, schedule(packed, t), t).empty());

  // Unused qubits are not reported.
  Circuit gap(3);
  gap.x(0);
  gap.delay(1000, 0);
  gap.x(0);
  gap.cx(0, 1);
  auto windows = find_idle_windows(gap, schedule(gap, t), t);
  bool q2_seen = false;
  std::uint64_t q0_window = 0, q1_window = 0;
  for (const IdleWindow& w : windows) {
    if (w.qubit == 2) q2_seen = true;
    if (w.qubit == 0) q0_window = w.length();
    if (w.qubit == 1) q1_window = std::max(q1_window, w.length());
  }
  CHECK_FALSE(q2_seen);
  CHECK(q0_window == 1008);  // delay pushes the next aligned start to 1168
  CHECK(q1_window == 1328);  // leading window until the CX begins
}

TEST_CASE("insert_dd preserves the unitary noiselessly") {
  std::mt19937 rng(777);
  TimingModel t;
  for (int trial = 0; trial < 30; ++trial) {
    qlower::testing::RandomPool pool;
    pool.delays = true;
    Circuit c = qlower::testing::random_circuit(rng, 2 + trial % 3, 12, pool);
    DdKind kind = trial % 3 == 0 ? DdKind::Cpmg : (trial % 3 == 1 ? DdKind::Xy4 : DdKind::Xy8);
    Circuit with_dd = insert_dd(c, t, {kind, 1 + trial % 2});
    INFO("trial " << trial << " kind " << dd_name(kind));
    CHECK(equiv_phase(unitary_of(with_dd), unitary_of(c), 1e-9));
  }
}

TEST_CASE("dd pulse counts and window capacity") {
  TimingModel t;
  Circuit ramsey(1);
  ramsey.sx(0);
  ramsey.delay(6400, 0);
  ramsey.sx(0);

  Circuit xy4x2 = insert_dd(ramsey, t, {DdKind::Xy4, 2});
  std::uint64_t pulses =
      gate_counts(xy4x2).count(GateKind::X) + gate_counts(xy4x2).count(GateKind::Y);
  CHECK(pulses == 8);  // two evenly spaced XY4 repetitions

  // A window that fits only one pulse gets no partial sequence at all.
  Circuit tiny(1);
  tiny.x(0);
  tiny.delay(300, 0);
  tiny.x(0);
  Circuit after = insert_dd(tiny, t, {DdKind::Xy4, 1});
  CHECK(gate_counts(after).count(GateKind::Y) == 0);
  CHECK(gate_counts(after).count(GateKind::X) == 2);
  Circuit after_cpmg = insert_dd(tiny, t, {DdKind::Cpmg, 1});
  CHECK(gate_counts(after_cpmg).count(GateKind::X) == 2);

  // Repetitions auto-reduce to what fits.
  Circuit reduced = insert_dd(ramsey, t, {DdKind::Cpmg, 64});
  std::uint64_t xcount = gate_counts(reduced).count(GateKind::X);
  CHECK(xcount > 2);
  CHECK(xcount <= 80);
  CHECK(equiv_phase(unitary_of(reduced), unitary_of(ramsey), 1e-9));
}

TEST_CASE("cpmg echoes pure-Z idle noise exactly") {
  TimingModel t;
  const std::uint64_t idle = 6400;
  const double eps = (PI / 4) / static_cast<double>(idle);  // eps*T = pi/4

  Circuit ramsey(1);
  ramsey.sx(0);
  ramsey.delay(idle, 0);
  ramsey.sx(0);

  Circuit with_dd = insert_dd(ramsey, t, {DdKind::Cpmg, 1});
  auto [err_dd, err_bare] = dd_benefit_sim(with_dd, ramsey, t, eps, IdleAxis::Z);
  CHECK(err_bare > 1e-2);
  CHECK(err_dd <= 1e-6);

  // eps = 0: both errors vanish.
  auto [zero_dd, zero_bare] = dd_benefit_sim(with_dd, ramsey, t, 0.0, IdleAxis::Z);
  CHECK(zero_dd == Catch::Approx(0.0).margin(1e-12));
  CHECK(zero_bare == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("xy4 suppresses stray Rx but cpmg does not") {
  TimingModel t;
  const std::uint64_t idle = 6400;
  const double eps = (PI / 4) / static_cast<double>(idle);

  Circuit hold(1);
  hold.x(0);
  hold.delay(idle, 0);
  hold.x(0);

  Circuit cpmg = insert_dd(hold, t, {DdKind::Cpmg, 1});
  Circuit xy4 = insert_dd(hold, t, {DdKind::Xy4, 1});

  auto [err_cpmg, err_bare] = dd_benefit_sim(cpmg, hold, t, eps, IdleAxis::X);
  auto [err_xy4, err_bare2] = dd_benefit_sim(xy4, hold, t, eps, IdleAxis::X);
  CHECK(err_bare > 1e-2);
  CHECK(err_bare2 > 1e-2);
  CHECK(err_cpmg > 1e-2);  // X noise commutes with the X pulses
  CHECK(err_xy4 <= 1e-6);  // the universal sequence averages it away
}

TEST_CASE("warm-up circuit saves one single-qubit pulse of makespan") {
  TimingModel t = TimingModel::from_ecr(EcrTiming{});
  Circuit c(2);
  c.rx(-PI / 2, 1);
  c.cx(0, 1);
  std::uint64_t merged = schedule(compile_ecr(c), t).makespan;
  std::uint64_t unmerged = schedule(compile_ecr(c, {.merge = false, .fuse_zz = false}), t).makespan;
  CHECK(unmerged - merged == 160);
  CHECK(merged == 864);
}
