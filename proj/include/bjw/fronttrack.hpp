#ifndef BJW_FRONTTRACK_HPP_
#define BJW_FRONTTRACK_HPP_

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bjw/riemann.hpp"
#include "bjw/state.hpp"

namespace bjw {

/// A straight discontinuity x(t) = x0 + speed (t - t0).
struct Front {
  int id = 0;
  Wave wave;
  double x0 = 0.0;
  double t0 = 0.0;
  double speed = 0.0;

  double position(double t) const { return x0 + speed * (t - t0); }
};

struct TrackerParams {
  ModelParams model;
  double delta = 1e-3;  // largest rarefaction front strength
  int max_events = 1000;
  double tol_event = 1e-12;
  RiemannOptions riemann;
};

struct CollisionEvent {
  double time = 0.0;
  double position = 0.0;
  std::vector<int> incoming_ids;
  std::vector<Wave> incoming;
  std::vector<int> outgoing_ids;
  std::vector<Wave> outgoing;
  std::string classification;  // "22", "12", "23" or "other"
  std::array<double, 3> strengths{};
  double residual = 0.0;

  bool shock_only() const;  // no outgoing rarefaction fronts
};

/// A front together with the time it was absorbed (infinite while alive).
struct FrontRecord {
  Front front;
  double t_end = 0.0;
  bool alive = true;
};

struct TrackerState {
  double time = 0.0;
  std::vector<Front> fronts;  // ordered by position, ties by speed
  State left_boundary_state;
  std::vector<CollisionEvent> log;
  TrackerParams params;
  int next_id = 0;
  std::vector<FrontRecord> history;  // every front ever created, by id

  /// State just right of front k (left_boundary_state for k < 0).
  State state_right_of(int k) const;
  State right_boundary_state() const;
};

class FrontTrackingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// jumps: (x_k, state right of x_k) with strictly increasing x_k.
/// Throws DomainError on bad data (naming the jump when the Riemann data are
/// rejected) and FrontTrackingError naming the jump when a solve fails.
TrackerState init_from_piecewise(const std::vector<std::pair<double, State>>& jumps,
                                 const State& U_leftmost, const TrackerParams& params);

/// Splits a fan into fronts born at (t0, x0); rarefactions become
/// ceil(|r| / delta) equal-strength jumps at their left-edge speed.
std::vector<Front> discretize_fan(const std::vector<Wave>& waves, double x0, double t0,
                                  const ModelParams& p, double delta, int& next_id);

struct CollisionInfo {
  double time = 0.0;
  double position = 0.0;
  int first = 0;  // index range [first, last] into TrackerState::fronts
  int last = 0;
  std::vector<int> ids;
};

/// Earliest collision of adjacent converging fronts. Pairs meeting within
/// tol_event of the same (t, x) are merged; among simultaneous events at
/// distinct positions the leftmost comes first.
std::optional<CollisionInfo> next_collision(const TrackerState& st);

/// Replaces the colliding fronts by the outgoing fan of the Riemann problem
/// between the outermost states and appends the event to the log.
void resolve_collision(TrackerState& st, const CollisionInfo& ev);

/// Interaction classification from the incoming families.
std::string classify_interaction(const std::vector<Wave>& incoming);

struct Observables {
  double time = 0.0;
  int events = 0;
  int front_count = 0;
  std::array<double, 3> total_variation{};
  double max_norm = 0.0;  // max |U| over the constant states
  /// Integral of U - U_bg, U_bg = initial far-left state for x < 0 and
  /// far-right state for x > 0, minus t (F(U_bg,left) - F(U_bg,right)).
  Vec3 conserved{};
};

Observables observe(const TrackerState& st, const State& bg_left, const State& bg_right);

struct RunResult {
  TrackerState state;
  std::vector<Observables> series;  // initial, then after each event
  bool truncated = false;           // stopped by max_events before t_end
  std::string failure;              // non-empty when a collision failed to resolve
};

/// Advances event by event up to t_end (fronts are then evaluated at t_end).
/// Reaching max_events sets the truncation flag; a failed resolution stops the
/// run and is reported in failure.
RunResult run(TrackerState st, double t_end, int max_events);

/// v-jumps of the current front set: (position, v left, v right), skipping
/// fronts with no jump in v.
std::vector<std::array<double, 3>> v_profile(const TrackerState& st, double t);

/// Polyline endpoints per front: (id, t_start, x_start, t_stop, x_stop).
struct TrajectorySegment {
  int id = 0;
  int family = 0;
  double t_start = 0.0, x_start = 0.0, t_stop = 0.0, x_stop = 0.0;
};
std::vector<TrajectorySegment> trajectories(const TrackerState& st, double t_stop);

/// Front tracking for v_t + (v^2)_x = 0.
struct BurgersFront {
  double x0 = 0.0, t0 = 0.0, speed = 0.0;
  double vl = 0.0, vr = 0.0;
  double t_end = 0.0;
  bool alive = true;

  double position(double t) const { return x0 + speed * (t - t0); }
};

struct BurgersTrajectory {
  std::vector<BurgersFront> fronts;  // every front ever created
  std::vector<double> event_times;
  bool truncated = false;

  /// Live fronts at time t (born at or before t, absorbed after t), as
  /// (position, v left, v right) ordered by position. Birth and absorption
  /// times within tol of t count as at or before t.
  std::vector<std::array<double, 3>> profile(double t, double tol = 0.0) const;
};

BurgersTrajectory burgers_oracle(const std::vector<std::pair<double, double>>& v_jumps,
                                 double v_leftmost, double t_end, double delta = 1e-3,
                                 int max_events = 100000, double tol_event = 1e-12);

}  // namespace bjw

#endif  // BJW_FRONTTRACK_HPP_
