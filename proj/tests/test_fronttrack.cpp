#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bjw/errors.hpp"
#include "bjw/fronttrack.hpp"
#include "bjw/wavecurves.hpp"
#include "oracles.hpp"

using namespace bjw;

namespace {

struct ShockData {
  State left;
  std::vector<std::pair<double, State>> jumps;
  TrackerParams params;
};

// Approaching second-family shocks: strengths and positions chosen so that
// every pair catches up with its right neighbour.
ShockData shock_train(double eta, std::vector<double> strengths, std::vector<double> xs) {
  ShockData d;
  d.params.model.eta = eta;
  d.left = {0.25, 0.0, -0.25};
  State cur = d.left;
  for (std::size_t k = 0; k < strengths.size(); ++k) {
    cur = hugoniot(Family::Two, cur, strengths[k], d.params.model).state;
    d.jumps.push_back({xs[k], cur});
  }
  return d;
}

Front make_front(int id, double x0, double speed, State l = {}, State r = {}) {
  Front f;
  f.id = id;
  f.x0 = x0;
  f.speed = speed;
  f.wave.left = l;
  f.wave.right = r;
  f.wave.speed = f.wave.speed_lo = f.wave.speed_hi = speed;
  return f;
}

}  // namespace

TEST_CASE("a single shock becomes one front") {
  TrackerParams tp;
  const State Ul{0.0, 0.0, 0.0};
  const State Ur = hugoniot2_closed_form(Ul, -0.1).state;
  const TrackerState st = init_from_piecewise({{0.5, Ur}}, Ul, tp);
  REQUIRE(st.fronts.size() == 1);
  CHECK(st.fronts[0].speed == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(st.fronts[0].x0 == 0.5);
  CHECK(st.right_boundary_state() == Ur);
  CHECK(init_from_piecewise({}, Ul, tp).fronts.empty());
}

TEST_CASE("rarefactions split into delta pieces with increasing speeds") {
  TrackerParams tp;
  tp.delta = 0.01;
  const State Ul{0.1, -0.1, 0.0};
  const State Ur = rarefaction(Family::Two, Ul, 0.05, tp.model).state;
  const TrackerState st = init_from_piecewise({{0.0, Ur}}, Ul, tp);
  REQUIRE(st.fronts.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(st.fronts[k].wave.strength == doctest::Approx(0.01));
    if (k > 0) CHECK(st.fronts[k].speed > st.fronts[k - 1].speed);
  }
  CHECK(st.fronts[0].speed == doctest::Approx(-0.2));
  CHECK(st.fronts.back().wave.right == Ur);
}

TEST_CASE("init rejects bad data and names the jump") {
  TrackerParams tp;
  const State O{};
  CHECK_THROWS_AS(init_from_piecewise({{0.0, {0.1, 0, 0}}, {0.0, {0.2, 0, 0}}}, O, tp), DomainError);
  try {
    init_from_piecewise({{0.0, {0.1, 0, 0}}, {1.0, {0.95, 0.5, 0}}}, O, tp);
    FAIL("expected a throw");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("jump 1") != std::string::npos);
  }
  tp.delta = 0.0;
  CHECK_THROWS_AS(init_from_piecewise({}, O, tp), DomainError);
}

TEST_CASE("collision detection") {
  TrackerState st;
  st.fronts = {make_front(0, -1.0, 1.0), make_front(1, 1.0, -1.0)};
  auto c = next_collision(st);
  REQUIRE(c);
  CHECK(c->time == doctest::Approx(1.0));
  CHECK(c->position == doctest::Approx(0.0));
  CHECK(c->first == 0);
  CHECK(c->last == 1);

  st.fronts = {make_front(0, -1.0, 0.5), make_front(1, 1.0, 0.5)};
  CHECK_FALSE(next_collision(st));

  st.fronts = {make_front(0, -1.0, 1.0), make_front(1, 0.0, 0.0), make_front(2, 1.0, -1.0)};
  c = next_collision(st);
  REQUIRE(c);
  CHECK(c->first == 0);
  CHECK(c->last == 2);
  CHECK(c->ids == std::vector<int>{0, 1, 2});

  // Simultaneous meetings at distinct places: leftmost first.
  st.fronts = {make_front(0, -3.0, 1.0), make_front(1, -1.0, -1.0), make_front(2, 1.0, 1.0),
               make_front(3, 3.0, -1.0)};
  c = next_collision(st);
  REQUIRE(c);
  CHECK(c->first == 0);
  CHECK(c->position == doctest::Approx(-2.0));
}

TEST_CASE("a wave and its reverse annihilate") {
  const State A{0.1, 0.0, 0.1}, B{0.2, 0.0, 0.2};
  TrackerState st;
  st.left_boundary_state = A;
  st.fronts = {make_front(0, -1.0, 1.0, A, B), make_front(1, 1.0, -1.0, B, A)};
  st.history = {{st.fronts[0], INFINITY, true}, {st.fronts[1], INFINITY, true}};
  st.next_id = 2;
  const auto c = next_collision(st);
  REQUIRE(c);
  resolve_collision(st, *c);
  CHECK(st.fronts.empty());
  REQUIRE(st.log.size() == 1);
  CHECK(st.log[0].outgoing.empty());
  CHECK_FALSE(st.history[0].alive);
  CHECK(st.history[0].t_end == doctest::Approx(1.0));
}

TEST_CASE("two second-family shocks resolve into three shocks") {
  const ShockData d = shock_train(1e-3, {-2e-3, -1e-3}, {0.0, 0.01});
  TrackerState st = init_from_piecewise(d.jumps, d.left, d.params);
  REQUIRE(st.fronts.size() == 2);
  const auto c = next_collision(st);
  REQUIRE(c);
  resolve_collision(st, *c);
  REQUIRE(st.log.size() == 1);
  const CollisionEvent& e = st.log[0];
  CHECK(e.classification == "22");
  CHECK(e.shock_only());
  REQUIRE(e.outgoing.size() == 3);
  for (const Wave& w : e.outgoing) CHECK(w.kind == WaveKind::Shock);
  CHECK(st.fronts.size() == 3);
  CHECK(st.fronts.front().wave.left == d.left);
  CHECK(st.fronts.back().wave.right == d.jumps.back().second);
  CHECK(st.time == doctest::Approx(c->time));
}

TEST_CASE("brute-force pairwise scan agrees with adjacent detection") {
  const ShockData d =
      shock_train(1e-3, {-2e-3, -1.5e-3, -2.5e-3, -1e-3, -2e-3}, {0.0, 0.01, 0.02, 0.03, 0.04});
  TrackerState st = init_from_piecewise(d.jumps, d.left, d.params);
  int events = 0;
  while (true) {
    std::vector<oracle::Line> lines;
    for (const Front& f : st.fronts) lines.push_back({f.x0, f.t0, f.speed});
    const auto ref = oracle::earliest_meeting(lines, st.time);
    const auto c = next_collision(st);
    REQUIRE(bool(ref) == bool(c));
    if (!c) break;
    CHECK(std::abs(c->time - ref->first) <= 1e-9 * (1.0 + ref->first));
    CHECK(std::abs(c->position - ref->second) <= 1e-9 * (1.0 + std::abs(ref->second)));
    resolve_collision(st, *c);
    REQUIRE(++events < 100);
  }
  CHECK(events > 5);
}

TEST_CASE("runs: constant data, truncation, determinism and conservation") {
  TrackerParams tp;
  const RunResult flat = run(init_from_piecewise({}, {0.1, 0.1, 0.1}, tp), 10.0, 10);
  CHECK(flat.state.log.empty());
  CHECK_FALSE(flat.truncated);
  CHECK(flat.series.size() == 2);

  const ShockData d =
      shock_train(1e-3, {-2e-3, -1.5e-3, -2.5e-3, -1e-3, -2e-3}, {0.0, 0.01, 0.02, 0.03, 0.04});
  const RunResult a = run(init_from_piecewise(d.jumps, d.left, d.params), 10.0, 1000);
  const RunResult b = run(init_from_piecewise(d.jumps, d.left, d.params), 10.0, 1000);
  CHECK(a.failure.empty());
  CHECK_FALSE(a.truncated);
  REQUIRE(a.state.log.size() == b.state.log.size());
  for (std::size_t k = 0; k < a.state.log.size(); ++k) {
    CHECK(a.state.log[k].time == b.state.log[k].time);
    CHECK(a.state.log[k].outgoing_ids == b.state.log[k].outgoing_ids);
    if (k > 0) CHECK(a.state.log[k].time >= a.state.log[k - 1].time);
  }
  const Vec3 I0 = a.series.front().conserved;
  for (const Observables& o : a.series) CHECK((o.conserved - I0).norm() <= 1e-12);

  const RunResult t = run(init_from_piecewise(d.jumps, d.left, d.params), 10.0, 3);
  CHECK(t.truncated);
  CHECK(t.state.log.size() == 3);
}

TEST_CASE("scalar oracle") {
  const BurgersTrajectory one = burgers_oracle({{0.0, 0.1}}, 0.2, 1.0);
  REQUIRE(one.fronts.size() == 1);
  CHECK(one.fronts[0].speed == doctest::Approx(0.3));
  const BurgersTrajectory fan = burgers_oracle({{0.0, 0.3}}, 0.2, 1.0, 0.05);
  CHECK(fan.fronts.size() == 2);
  CHECK(fan.fronts[1].speed == doctest::Approx(0.5));
  // Two shocks merging: 0.4 | 0.2 | 0.0, speeds 0.6 and 0.2 from x = 0, 0.4.
  const BurgersTrajectory m = burgers_oracle({{0.0, 0.2}, {0.4, 0.0}}, 0.4, 5.0);
  REQUIRE(m.event_times.size() == 1);
  CHECK(m.event_times[0] == doctest::Approx(1.0));
  const auto prof = m.profile(2.0);
  REQUIRE(prof.size() == 1);
  CHECK(prof[0][0] == doctest::Approx(0.6 + 0.4 * 1.0));
}

TEST_CASE("v-component of pure second-family data follows the scalar oracle") {
  const ShockData d =
      shock_train(1e-3, {-2e-3, -1.5e-3, -2.5e-3, -1e-3, -2e-3}, {0.0, 0.01, 0.02, 0.03, 0.04});
  const double t_end = 10.0;
  const RunResult r = run(init_from_piecewise(d.jumps, d.left, d.params), t_end, 1000);
  std::vector<std::pair<double, double>> vj;
  for (const auto& [x, U] : d.jumps) vj.push_back({x, U.v});
  const BurgersTrajectory bt = burgers_oracle(vj, d.left.v, t_end);
  const auto sys = v_profile(r.state, t_end);
  const auto ref = bt.profile(t_end);
  REQUIRE(sys.size() == ref.size());
  for (std::size_t k = 0; k < sys.size(); ++k)
    for (int i = 0; i < 3; ++i) CHECK(std::abs(sys[k][i] - ref[k][i]) <= 1e-12);
  CHECK(bt.event_times.size() == 4);
}

TEST_CASE("trajectory segments cover every front") {
  const ShockData d = shock_train(1e-3, {-2e-3, -1e-3}, {0.0, 0.01});
  const RunResult r = run(init_from_piecewise(d.jumps, d.left, d.params), 10.0, 100);
  const auto seg = trajectories(r.state, 10.0);
  CHECK(seg.size() == r.state.history.size());
  for (const TrajectorySegment& s : seg) {
    CHECK(s.t_stop >= s.t_start);
    CHECK(s.family >= 1);
    CHECK(s.family <= 3);
  }
}
