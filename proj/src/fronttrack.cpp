#include "bjw/fronttrack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bjw/errors.hpp"
#include "bjw/flux.hpp"

namespace bjw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int pieces(double r, double delta) {
  return std::max(1, static_cast<int>(std::ceil(std::abs(r) / delta - 1e-9)));
}

// Meeting time of two straight trajectories, or +inf when they do not converge.
double meeting_time(double xa, double ta, double sa, double xb, double tb, double sb) {
  if (!(sa > sb)) return kInf;
  return (xb - xa + sa * ta - sb * tb) / (sa - sb);
}

void validate_params(const TrackerParams& p) {
  p.model.validate();
  if (!(p.delta > 0.0) || !std::isfinite(p.delta)) throw DomainError("delta must be positive");
  if (p.max_events < 0) throw DomainError("max_events must be non-negative");
  if (!(p.tol_event >= 0.0)) throw DomainError("tol_event must be non-negative");
}

}  // namespace

bool CollisionEvent::shock_only() const {
  return std::none_of(outgoing.begin(), outgoing.end(),
                      [](const Wave& w) { return w.kind == WaveKind::Rarefaction; });
}

State TrackerState::state_right_of(int k) const {
  if (k < 0 || fronts.empty()) return left_boundary_state;
  return fronts.at(static_cast<std::size_t>(k)).wave.right;
}

State TrackerState::right_boundary_state() const {
  return state_right_of(static_cast<int>(fronts.size()) - 1);
}

std::vector<Front> discretize_fan(const std::vector<Wave>& waves, double x0, double t0,
                                  const ModelParams& p, double delta, int& next_id) {
  std::vector<Front> out;
  for (const Wave& wv : waves) {
    if (wv.kind != WaveKind::Rarefaction) {
      out.push_back({next_id++, wv, x0, t0, wv.speed});
      continue;
    }
    const int n = pieces(wv.strength, delta);
    const double piece = wv.strength / n;
    State left = wv.left;
    for (int k = 0; k < n; ++k) {
      Wave part;
      part.family = wv.family;
      part.kind = WaveKind::Rarefaction;
      part.strength = piece;
      part.left = left;
      part.right = k + 1 == n ? wv.right : rarefaction(wv.family, wv.left, (k + 1) * piece, p).state;
      part.speed = part.speed_lo = characteristic_speed(index(wv.family), part.left, p);
      part.speed_hi = characteristic_speed(index(wv.family), part.right, p);
      out.push_back({next_id++, part, x0, t0, part.speed});
      left = part.right;
    }
  }
  return out;
}

TrackerState init_from_piecewise(const std::vector<std::pair<double, State>>& jumps,
                                 const State& U_leftmost, const TrackerParams& params) {
  validate_params(params);
  if (!U_leftmost.finite()) throw DomainError("non-finite leftmost state");
  for (std::size_t k = 0; k < jumps.size(); ++k) {
    if (!std::isfinite(jumps[k].first) || !jumps[k].second.finite()) {
      throw DomainError("non-finite jump data at jump " + std::to_string(k));
    }
    if (k > 0 && !(jumps[k].first > jumps[k - 1].first)) {
      throw DomainError("jump positions must be strictly increasing");
    }
  }
  TrackerState st;
  st.params = params;
  st.left_boundary_state = U_leftmost;
  State left = U_leftmost;
  for (std::size_t k = 0; k < jumps.size(); ++k) {
    const auto& [x, right] = jumps[k];
    RiemannFan fan;
    try {
      fan = solve_riemann(left, right, params.model, params.riemann);
    } catch (const DomainError& e) {
      std::ostringstream os;
      os << "invalid data at jump " << k << " (x = " << x << "): " << e.what();
      throw DomainError(os.str());
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "initialization failed at jump " << k << " (x = " << x << "): " << e.what();
      throw FrontTrackingError(os.str());
    }
    auto fronts = discretize_fan(fan.waves, x, 0.0, params.model, params.delta, st.next_id);
    if (!fronts.empty()) {
      fronts.front().wave.left = left;
      fronts.back().wave.right = right;
    }
    for (const Front& f : fronts) {
      st.fronts.push_back(f);
      st.history.push_back({f, kInf, true});
    }
    left = right;
  }
  return st;
}

std::optional<CollisionInfo> next_collision(const TrackerState& st) {
  const auto& fr = st.fronts;
  const double tol = st.params.tol_event;
  const int n = static_cast<int>(fr.size());
  std::vector<double> t(std::max(0, n - 1), kInf);
  int best = -1;
  for (int k = 0; k + 1 < n; ++k) {
    const Front& a = fr[k];
    const Front& b = fr[k + 1];
    double tk = meeting_time(a.x0, a.t0, a.speed, b.x0, b.t0, b.speed);
    if (tk == kInf) continue;
    tk = std::max(tk, st.time);
    t[k] = tk;
    if (best < 0 || tk < t[best] - tol) best = k;
  }
  if (best < 0) return std::nullopt;

  auto pair_x = [&](int k) { return fr[k].position(t[k]); };
  auto same_point = [&](int k, int j) {
    const double xtol = tol * (1.0 + std::abs(fr[j].speed) + std::abs(fr[j + 1].speed));
    return t[j] != kInf && std::abs(t[j] - t[k]) <= tol && std::abs(pair_x(j) - pair_x(k)) <= xtol;
  };
  CollisionInfo info;
  info.time = t[best];
  info.position = pair_x(best);
  info.first = best;
  info.last = best + 1;
  while (info.first > 0 && same_point(best, info.first - 1)) --info.first;
  while (info.last < n - 1 && same_point(best, info.last)) ++info.last;
  for (int k = info.first; k <= info.last; ++k) info.ids.push_back(fr[k].id);
  return info;
}

std::string classify_interaction(const std::vector<Wave>& incoming) {
  if (incoming.size() != 2) return "other";
  int a = index(incoming[0].family), b = index(incoming[1].family);
  if (a > b) std::swap(a, b);
  if (a == 2 && b == 2) return "22";
  if (a == 1 && b == 2) return "12";
  if (a == 2 && b == 3) return "23";
  return "other";
}

void resolve_collision(TrackerState& st, const CollisionInfo& ev) {
  const int n = static_cast<int>(st.fronts.size());
  if (ev.first < 0 || ev.last >= n || ev.last <= ev.first) {
    throw DomainError("collision does not name at least two current fronts");
  }
  CollisionEvent rec;
  rec.time = ev.time;
  rec.position = ev.position;
  for (int k = ev.first; k <= ev.last; ++k) {
    rec.incoming_ids.push_back(st.fronts[k].id);
    rec.incoming.push_back(st.fronts[k].wave);
  }
  rec.classification = classify_interaction(rec.incoming);
  const State Ul = st.fronts[ev.first].wave.left;
  const State Ur = st.fronts[ev.last].wave.right;
  const RiemannFan fan = solve_riemann(Ul, Ur, st.params.model, st.params.riemann);
  rec.strengths = fan.strengths;
  rec.residual = fan.residual;

  auto out = discretize_fan(fan.waves, ev.position, ev.time, st.params.model, st.params.delta,
                            st.next_id);
  // Chain the outgoing states exactly onto the untouched neighbours.
  State left = Ul;
  for (Front& f : out) {
    f.wave.left = left;
    left = f.wave.right;
  }
  if (!out.empty()) out.back().wave.right = Ur;

  for (int id : rec.incoming_ids) {
    FrontRecord& h = st.history.at(static_cast<std::size_t>(id));
    h.alive = false;
    h.t_end = ev.time;
  }
  for (const Front& f : out) {
    rec.outgoing_ids.push_back(f.id);
    rec.outgoing.push_back(f.wave);
    st.history.push_back({f, kInf, true});
  }
  st.fronts.erase(st.fronts.begin() + ev.first, st.fronts.begin() + ev.last + 1);
  st.fronts.insert(st.fronts.begin() + ev.first, out.begin(), out.end());
  st.time = std::max(st.time, ev.time);
  st.log.push_back(std::move(rec));
}

Observables observe(const TrackerState& st, const State& bg_left, const State& bg_right) {
  Observables ob;
  ob.time = st.time;
  ob.events = static_cast<int>(st.log.size());
  ob.front_count = static_cast<int>(st.fronts.size());
  ob.max_norm = st.left_boundary_state.norm();
  Vec3 integral{};
  for (const Front& f : st.fronts) {
    const Vec3 jump = f.wave.right - f.wave.left;
    for (int i = 0; i < 3; ++i) ob.total_variation[i] += std::abs(jump[i]);
    ob.max_norm = std::max(ob.max_norm, f.wave.right.norm());
    integral -= f.position(st.time) * jump;
  }
  const Vec3 flux_gap = flux(bg_left, st.params.model) - flux(bg_right, st.params.model);
  ob.conserved = integral - st.time * flux_gap;
  return ob;
}

RunResult run(TrackerState st, double t_end, int max_events) {
  if (!(t_end > st.time)) throw DomainError("t_end must exceed the current time");
  if (max_events < 0) throw DomainError("max_events must be non-negative");
  RunResult res;
  const State bg_left = st.left_boundary_state;
  const State bg_right = st.right_boundary_state();
  res.series.push_back(observe(st, bg_left, bg_right));
  int events = 0;
  while (true) {
    const auto ev = next_collision(st);
    if (!ev || ev->time > t_end) break;
    if (events >= max_events) {
      res.truncated = true;
      break;
    }
    try {
      resolve_collision(st, *ev);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "collision at t = " << ev->time << ", x = " << ev->position << " failed: " << e.what();
      res.failure = os.str();
      break;
    }
    ++events;
    res.series.push_back(observe(st, bg_left, bg_right));
  }
  if (!res.truncated && res.failure.empty() && t_end > st.time) {
    st.time = t_end;
    res.series.push_back(observe(st, bg_left, bg_right));
  }
  res.state = std::move(st);
  return res;
}

std::vector<std::array<double, 3>> v_profile(const TrackerState& st, double t) {
  std::vector<std::array<double, 3>> out;
  for (const Front& f : st.fronts) {
    if (f.wave.left.v != f.wave.right.v) out.push_back({f.position(t), f.wave.left.v, f.wave.right.v});
  }
  return out;
}

std::vector<TrajectorySegment> trajectories(const TrackerState& st, double t_stop) {
  std::vector<TrajectorySegment> out;
  out.reserve(st.history.size());
  for (const FrontRecord& h : st.history) {
    const Front& f = h.front;
    const double te = h.alive ? std::max(t_stop, f.t0) : h.t_end;
    out.push_back({f.id, index(f.wave.family), f.t0, f.x0, te, f.position(te)});
  }
  return out;
}

std::vector<std::array<double, 3>> BurgersTrajectory::profile(double t, double tol) const {
  std::vector<std::array<double, 3>> out;
  for (const BurgersFront& f : fronts) {
    if (f.t0 <= t + tol && (f.alive || f.t_end > t + tol)) out.push_back({f.position(t), f.vl, f.vr});
  }
  std::sort(out.begin(), out.end());
  return out;
}

BurgersTrajectory burgers_oracle(const std::vector<std::pair<double, double>>& v_jumps,
                                 double v_leftmost, double t_end, double delta, int max_events,
                                 double tol_event) {
  BurgersTrajectory tr;
  std::vector<std::size_t> live;  // indices into tr.fronts, ordered by position

  auto emit = [&](double x, double t, double vl, double vr, std::vector<std::size_t>& into) {
    if (vl > vr) {
      tr.fronts.push_back({x, t, vl + vr, vl, vr, 0.0, true});
      into.push_back(tr.fronts.size() - 1);
    } else if (vl < vr) {
      const int n = pieces(vr - vl, delta);
      const double dv = (vr - vl) / n;
      for (int k = 0; k < n; ++k) {
        const double a = vl + k * dv;
        const double b = k + 1 == n ? vr : vl + (k + 1) * dv;
        tr.fronts.push_back({x, t, 2.0 * a, a, b, 0.0, true});
        into.push_back(tr.fronts.size() - 1);
      }
    }
  };

  double vl = v_leftmost;
  for (const auto& [x, vr] : v_jumps) {
    emit(x, 0.0, vl, vr, live);
    vl = vr;
  }

  double now = 0.0;
  for (int events = 0;; ++events) {
    int best = -1;
    double tb = kInf;
    std::vector<double> tk(live.size(), kInf);
    for (std::size_t k = 0; k + 1 < live.size(); ++k) {
      const BurgersFront& a = tr.fronts[live[k]];
      const BurgersFront& b = tr.fronts[live[k + 1]];
      if (!(a.speed > b.speed)) continue;
      tk[k] = std::max(now, (b.x0 - a.x0 + a.speed * a.t0 - b.speed * b.t0) / (a.speed - b.speed));
      if (tk[k] < tb - tol_event) {
        tb = tk[k];
        best = static_cast<int>(k);
      }
    }
    if (best < 0 || tb > t_end) break;
    if (events >= max_events) {
      tr.truncated = true;
      break;
    }
    const double xb = tr.fronts[live[best]].position(tb);
    std::size_t lo = best, hi = best + 1;
    auto joins = [&](std::size_t k) {
      const double xk = tr.fronts[live[k]].position(tk[k]);
      return tk[k] != kInf && std::abs(tk[k] - tb) <= tol_event &&
             std::abs(xk - xb) <= tol_event * (1.0 + std::abs(tr.fronts[live[k]].speed) +
                                               std::abs(tr.fronts[live[k + 1]].speed));
    };
    while (lo > 0 && joins(lo - 1)) --lo;
    while (hi + 1 < live.size() && joins(hi)) ++hi;
    const double wl = tr.fronts[live[lo]].vl;
    const double wr = tr.fronts[live[hi]].vr;
    for (std::size_t k = lo; k <= hi; ++k) {
      tr.fronts[live[k]].alive = false;
      tr.fronts[live[k]].t_end = tb;
    }
    std::vector<std::size_t> born;
    emit(xb, tb, wl, wr, born);
    live.erase(live.begin() + lo, live.begin() + hi + 1);
    live.insert(live.begin() + lo, born.begin(), born.end());
    tr.event_times.push_back(tb);
    now = std::max(now, tb);
  }
  return tr;
}

}  // namespace bjw
