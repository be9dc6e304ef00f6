#include "covertour/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "covertour/tour.hpp"

namespace covertour {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-9;

}  // namespace

Position node_position(const MetricSpace& space, PointId p) {
  Position pos;
  pos.a = pos.b = p;
  pos.from_a = 0.0;
  if (space.is_line()) pos.coord = space.coord(p);
  return pos;
}

bool position_at_node(const MetricSpace& space, const Position& pos, PointId p) {
  if (space.is_line()) return std::abs(pos.coord - space.coord(p)) <= kTol;
  if (pos.a == pos.b) return pos.a == p || space.dist(pos.a, p) <= kTol;
  if (pos.a == p && std::abs(pos.from_a) <= kTol) return true;
  if (pos.b == p && std::abs(space.dist(pos.a, pos.b) - pos.from_a) <= kTol) return true;
  return false;
}

double position_dist(const MetricSpace& space, const Position& pos, PointId p) {
  if (space.is_line()) return std::abs(pos.coord - space.coord(p));
  if (pos.a == pos.b) return space.dist(pos.a, p);
  double L = space.dist(pos.a, pos.b);
  return std::min(pos.from_a + space.dist(pos.a, p), (L - pos.from_a) + space.dist(pos.b, p));
}

double position_dist_coord(const MetricSpace& space, const Position& pos, double coord) {
  if (!space.is_line()) throw std::logic_error("coordinate query on a non-line space");
  return std::abs(pos.coord - coord);
}

namespace {

// One plan step expanded into linear legs starting at (pos, t).
struct StepExec {
  std::vector<TimedLeg> legs;
  double t_end = 0.0;
  Position end_pos;
};

double pickup_ready(const Instance& inst, const PlanStep& s) {
  double ready = s.time;
  if (s.request >= 0) ready = std::max(ready, inst.rides[s.request].release);
  return ready;
}

StepExec exec_step(const MetricSpace& space, const Instance& inst, Position pos, double t,
                   const PlanStep& s, int step_idx) {
  StepExec out;
  auto stationary = [&](double until) {
    out.t_end = std::max(t, until);
    out.end_pos = pos;
    out.legs.push_back({t, out.t_end, pos, pos, step_idx});
  };
  switch (s.kind) {
    case PlanStep::Kind::Wait:
      stationary(s.time);
      break;
    case PlanStep::Kind::Pickup:
      if (!position_at_node(space, pos, s.point))
        throw std::runtime_error("infeasible plan: pickup step " + std::to_string(step_idx) +
                                 " away from its node");
      stationary(pickup_ready(inst, s));
      break;
    case PlanStep::Kind::Dropoff:
      if (!position_at_node(space, pos, s.point))
        throw std::runtime_error("infeasible plan: dropoff step " + std::to_string(step_idx) +
                                 " away from its node");
      out.t_end = t;
      out.end_pos = pos;
      break;
    case PlanStep::Kind::MoveCoord:
    case PlanStep::Kind::MovePoint: {
      if (s.kind == PlanStep::Kind::MoveCoord && !space.is_line())
        throw std::runtime_error("infeasible plan: coordinate move on a non-line space");
      if (space.is_line()) {
        double c1 = s.kind == PlanStep::Kind::MovePoint ? space.coord(s.point) : s.coord;
        out.t_end = t + std::abs(c1 - pos.coord);
        out.end_pos = s.kind == PlanStep::Kind::MovePoint ? node_position(space, s.point)
                                                          : Position{0, 0, 0.0, c1};
        if (out.t_end > t) out.legs.push_back({t, out.t_end, pos, out.end_pos, step_idx});
        break;
      }
      PointId target = s.point;
      if (position_at_node(space, pos, target)) {
        out.t_end = t;
        out.end_pos = node_position(space, target);
        break;
      }
      Position cur = pos;
      double tt = t;
      if (cur.a != cur.b) {
        // leave the geodesic via the cheaper endpoint
        double L = space.dist(cur.a, cur.b);
        bool via_a =
            cur.from_a + space.dist(cur.a, target) <= (L - cur.from_a) + space.dist(cur.b, target);
        PointId exit = via_a ? cur.a : cur.b;
        double leg_len = via_a ? cur.from_a : L - cur.from_a;
        Position at_exit{cur.a, cur.b, via_a ? 0.0 : L, 0.0};
        if (leg_len > 0) out.legs.push_back({tt, tt + leg_len, cur, at_exit, step_idx});
        tt += leg_len;
        cur = node_position(space, exit);
        if (exit == target) {
          out.t_end = tt;
          out.end_pos = cur;
          break;
        }
      }
      PointId from = cur.a;
      double L2 = space.dist(from, target);
      Position p0{from, target, 0.0, 0.0};
      Position p1{from, target, L2, 0.0};
      out.legs.push_back({tt, tt + L2, p0, p1, step_idx});
      out.t_end = tt + L2;
      out.end_pos = node_position(space, target);
      break;
    }
  }
  return out;
}

Position interpolate(const MetricSpace& space, const TimedLeg& leg, double t) {
  if (t >= leg.t1) return leg.p1;
  if (t <= leg.t0) return leg.p0;
  double dt = t - leg.t0;
  Position p = leg.p0;
  if (space.is_line()) {
    if (leg.p1.coord != leg.p0.coord) p.coord += (leg.p1.coord > leg.p0.coord ? dt : -dt);
    return p;
  }
  // motion legs share one (a, b) geodesic by construction
  if (leg.p1.from_a != leg.p0.from_a) p.from_a += (leg.p1.from_a > leg.p0.from_a ? dt : -dt);
  return p;
}

}  // namespace

std::vector<TimedLeg> plan_timeline(const MetricSpace& space, const Instance& inst,
                                    Position start, double t0, const Plan& plan) {
  std::vector<TimedLeg> legs;
  Position pos = start;
  double t = t0;
  for (int i = 0; i < static_cast<int>(plan.steps.size()); ++i) {
    StepExec ex = exec_step(space, inst, pos, t, plan.steps[i], i);
    for (auto& l : ex.legs) legs.push_back(l);
    pos = ex.end_pos;
    t = ex.t_end;
  }
  legs.push_back({t, kInf, pos, pos, -1});
  return legs;
}

std::vector<double> plan_step_ends(const MetricSpace& space, const Instance& inst, Position start,
                                   double t0, const Plan& plan) {
  std::vector<double> ends;
  Position pos = start;
  double t = t0;
  for (int i = 0; i < static_cast<int>(plan.steps.size()); ++i) {
    StepExec ex = exec_step(space, inst, pos, t, plan.steps[i], i);
    pos = ex.end_pos;
    t = ex.t_end;
    ends.push_back(t);
  }
  return ends;
}

double earliest_boundary_violation(const MetricSpace& space, const std::vector<TimedLeg>& legs,
                                   double bound) {
  PointId o = space.origin();
  auto dist_at = [&](const TimedLeg& leg, double t) {
    return position_dist(space, interpolate(space, leg, t), o);
  };
  for (const auto& leg : legs) {
    double g0 = leg.t0 + dist_at(leg, leg.t0);
    if (g0 > bound + kTol * std::max(1.0, std::abs(bound))) return leg.t0;
    if (leg.t1 == kInf) {
      // stationary forever; slope 1
      double tv = bound - position_dist(space, leg.p0, o);
      return std::max(tv, leg.t0);
    }
    // breakpoints: where the active endpoint route switches or origin crossed
    std::vector<double> ts = {leg.t0, leg.t1};
    if (space.is_line()) {
      double oc = space.origin_coord();
      if ((leg.p0.coord - oc) * (leg.p1.coord - oc) < 0)
        ts.push_back(leg.t0 + std::abs(oc - leg.p0.coord));
    } else if (leg.p0.a != leg.p0.b && leg.p0.from_a != leg.p1.from_a) {
      double L = space.dist(leg.p0.a, leg.p0.b);
      double xstar = 0.5 * (L + space.dist(leg.p0.b, o) - space.dist(leg.p0.a, o));
      double x0 = leg.p0.from_a, x1 = leg.p1.from_a;
      if (xstar > std::min(x0, x1) && xstar < std::max(x0, x1))
        ts.push_back(leg.t0 + std::abs(xstar - x0));
    }
    std::sort(ts.begin(), ts.end());
    for (size_t i = 0; i + 1 < ts.size(); ++i) {
      double lo = ts[i], hi = ts[i + 1];
      if (hi <= lo) continue;
      double glo = lo + dist_at(leg, lo);
      double ghi = hi + dist_at(leg, hi);
      double scale = kTol * std::max(1.0, std::abs(bound));
      if (ghi > bound + scale) {
        if (ghi <= glo) return lo;
        double tv = lo + (bound - glo) * (hi - lo) / (ghi - glo);
        return std::clamp(tv, lo, hi);
      }
    }
  }
  return kInf;
}

namespace {

class Sim : public Controller {
 public:
  Sim(const MetricSpace& space, const Instance& inst, OnlinePolicy& pol)
      : space_(space), inst_(inst), pol_(pol) {}

  Trace execute();

  const MetricSpace& space() const override { return space_; }
  ProblemKind kind() const override { return inst_.kind; }
  double now() const override { return t_; }
  Position position() const override { return pos_; }
  double dist_to(PointId p) const override { return position_dist(space_, pos_, p); }
  std::vector<int> released_unserved() const override {
    std::vector<int> out;
    for (int i = 0; i < inst_.count(); ++i)
      if (released_[i] && !served_[i]) out.push_back(i);
    return out;
  }
  bool served(int i) const override { return served_[i]; }
  Request request(int i) const override {
    guard_released(i);
    return inst_.requests[i];
  }
  RideRequest ride(int i) const override {
    guard_released(i);
    return inst_.rides[i];
  }
  int carrying() const override { return carrying_; }
  bool loaded() const override { return loaded_; }
  void set_plan(Plan plan) override {
    plan_ = std::move(plan);
    step_ = 0;
    // an empty plan means idle, with no completion callback
    plan_active_ = !plan_.steps.empty();
    plan_dirty_ = true;
  }
  void request_wake(double t, int tag) override {
    wakes_.push_back({std::max(t, t_), tag});
    std::sort(wakes_.begin(), wakes_.end());
  }
  void log_phase(const std::string& label) override { trace_.phase_log.push_back({t_, label}); }
  void log_decision(const std::string& label) override {
    trace_.decision_log.push_back({t_, label});
  }

 private:
  void guard_released(int i) const {
    if (!released_[i]) throw std::logic_error("policy observed an unreleased request");
  }
  void refresh_step();
  void advance_to(double te);
  void settle();
  bool check_end();
  void complete_step();
  std::pair<double, int> next_crossing() const;
  bool at_origin() const {
    return space_.is_line() ? std::abs(pos_.coord - space_.origin_coord()) <= kTol
                            : position_at_node(space_, pos_, space_.origin());
  }

  const MetricSpace& space_;
  const Instance& inst_;
  OnlinePolicy& pol_;

  double t_ = 0.0;
  Position pos_;
  Plan plan_;
  size_t step_ = 0;
  bool plan_active_ = false;
  bool plan_dirty_ = false;
  StepExec cur_;
  size_t leg_ = 0;
  std::vector<char> released_, served_;
  int carrying_ = -1;
  bool loaded_ = false;
  std::vector<std::pair<double, int>> wakes_;
  std::vector<std::pair<double, int>> releases_;  // (time, request) sorted
  size_t next_release_ = 0;
  bool finished_ = false;
  Trace trace_;
};

void Sim::refresh_step() {
  // (re)build legs of the current step from the current state
  plan_dirty_ = false;
  cur_ = StepExec{};
  leg_ = 0;
  if (!plan_active_ || step_ >= plan_.steps.size()) {
    // exhausted plans stay active until the event loop fires on_plan_complete
    cur_.t_end = t_;
    return;
  }
  cur_ = exec_step(space_, inst_, pos_, t_, plan_.steps[step_], static_cast<int>(step_));
}

void Sim::advance_to(double te) {
  if (te < t_ - kTol) throw std::logic_error("time went backwards");
  while (t_ < te) {
    if (plan_active_ && leg_ < cur_.legs.size()) {
      const TimedLeg& leg = cur_.legs[leg_];
      double stop = std::min(te, leg.t1);
      Position p1 = stop >= leg.t1 ? leg.p1 : interpolate(space_, leg, stop);
      if (stop > t_) trace_.segments.push_back({t_, stop, pos_, p1});
      pos_ = p1;
      t_ = stop;
      if (t_ >= leg.t1) ++leg_;
    } else {
      trace_.segments.push_back({t_, te, pos_, pos_});
      t_ = te;
    }
  }
}

std::pair<double, int> Sim::next_crossing() const {
  if (!space_.is_line() || inst_.kind != ProblemKind::Tsp) return {kInf, -1};
  if (!plan_active_ || leg_ >= cur_.legs.size()) return {kInf, -1};
  const TimedLeg& leg = cur_.legs[leg_];
  if (leg.p0.coord == leg.p1.coord) return {kInf, -1};
  double dir = leg.p1.coord > leg.p0.coord ? 1.0 : -1.0;
  std::pair<double, int> best = {kInf, -1};
  for (int i : plan_.serve) {
    if (served_[i]) continue;
    double x = space_.coord(inst_.requests[i].loc);
    if ((x - pos_.coord) * dir <= 0 || (leg.p1.coord - x) * dir <= 0) continue;
    double tc = t_ + std::abs(x - pos_.coord);
    if (inst_.requests[i].release <= tc && tc < best.first) best = {tc, i};
  }
  return best;
}

void Sim::settle() {
  if (inst_.kind != ProblemKind::Tsp) return;
  bool again = true;
  while (again) {
    again = false;
    for (int i : plan_.serve) {
      if (served_[i] || !released_[i] || inst_.requests[i].release > t_ + kTol) continue;
      PointId loc = inst_.requests[i].loc;
      bool here = space_.is_line() ? std::abs(pos_.coord - space_.coord(loc)) <= kTol
                                   : position_at_node(space_, pos_, loc);
      if (!here) continue;
      served_[i] = 1;
      trace_.service[i] = t_;
      pol_.on_serve(*this, i);
      again = true;
      break;
    }
  }
}

bool Sim::check_end() {
  if (finished_) return true;
  if (next_release_ < releases_.size()) return false;
  for (int i = 0; i < inst_.count(); ++i)
    if (!served_[i]) return false;
  if (!at_origin()) return false;
  finished_ = true;
  return true;
}

void Sim::complete_step() {
  const PlanStep& s = plan_.steps[step_];
  switch (s.kind) {
    case PlanStep::Kind::Pickup:
      if (loaded_) throw std::runtime_error("infeasible plan: pickup while loaded");
      if (s.request >= 0) {
        if (served_[s.request]) throw std::runtime_error("infeasible plan: ride already served");
        carrying_ = s.request;
      }
      loaded_ = true;
      break;
    case PlanStep::Kind::Dropoff:
      if (!loaded_) throw std::runtime_error("infeasible plan: dropoff while empty");
      if (s.request >= 0) {
        if (s.request != carrying_) throw std::runtime_error("infeasible plan: wrong dropoff");
        served_[s.request] = 1;
        trace_.service[s.request] = t_;
      }
      carrying_ = -1;
      loaded_ = false;
      break;
    default:
      break;
  }
  PlanStep done = s;  // copied before callbacks can replace the plan
  ++step_;
  refresh_step();
  if (done.kind == PlanStep::Kind::Dropoff && done.request >= 0)
    pol_.on_serve(*this, done.request);
  pol_.on_step_complete(*this, done);
}

Trace Sim::execute() {
  const int n = inst_.count();
  released_.assign(n, 0);
  served_.assign(n, 0);
  trace_.service.assign(n, -1.0);
  pos_ = node_position(space_, space_.origin());
  for (int i = 0; i < n; ++i) releases_.push_back({inst_.release_of(i), i});
  std::sort(releases_.begin(), releases_.end());

  pol_.start(*this);
  if (plan_dirty_) refresh_step();
  settle();
  check_end();

  while (!finished_) {
    if (plan_dirty_) refresh_step();
    double tr = next_release_ < releases_.size() ? releases_[next_release_].first : kInf;
    double tw = wakes_.empty() ? kInf : wakes_.front().first;
    auto [tc, cross_req] = next_crossing();
    double ts = kInf;
    if (plan_active_) ts = leg_ < cur_.legs.size() ? cur_.legs[leg_].t1 : cur_.t_end;
    ts = std::min(ts, tc);

    // priority at equal times: release, wake, step progress
    int kind;
    double te;
    if (tr <= tw && tr <= ts) {
      kind = 0;
      te = tr;
    } else if (tw <= ts) {
      kind = 1;
      te = tw;
    } else {
      kind = 2;
      te = ts;
    }
    if (te == kInf) {
      if (!check_end())
        throw std::runtime_error("simulation stalled: policy idle with unserved requests");
      break;
    }

    advance_to(te);
    if (kind == 0) {
      // all releases at this instant become visible before any callback runs
      size_t first = next_release_;
      while (next_release_ < releases_.size() && releases_[next_release_].first <= te)
        released_[releases_[next_release_++].second] = 1;
      for (size_t j = first; j < next_release_; ++j) pol_.on_release(*this, releases_[j].second);
    } else if (kind == 1) {
      int tag = wakes_.front().second;
      wakes_.erase(wakes_.begin());
      pol_.on_wake(*this, tag);
    } else {
      if (te == tc && cross_req >= 0) {
        // en-route crossing: snap onto the request coordinate, settle serves it
        pos_.coord = space_.coord(inst_.requests[cross_req].loc);
      } else if (plan_active_) {
        while (leg_ < cur_.legs.size() && cur_.legs[leg_].t1 <= t_) ++leg_;
        if (leg_ >= cur_.legs.size() && step_ < plan_.steps.size() && t_ >= cur_.t_end)
          complete_step();
      }
    }
    if (plan_dirty_) refresh_step();
    settle();
    if (check_end()) break;
    if (plan_active_ && step_ >= plan_.steps.size()) {
      plan_active_ = false;
      pol_.on_plan_complete(*this);
      if (plan_dirty_) refresh_step();
      settle();
      check_end();
    }
  }

  trace_.makespan = t_;
  validate_trace(space_, inst_, trace_);
  return trace_;
}

}  // namespace

Trace run(const MetricSpace& space, const Instance& inst, OnlinePolicy& policy) {
  inst.validate(space);
  Sim sim(space, inst, policy);
  return sim.execute();
}

namespace {

double segment_motion(const MetricSpace& space, const Position& p0, const Position& p1) {
  if (space.is_line()) return std::abs(p1.coord - p0.coord);
  if (p0.a == p1.a && p0.b == p1.b) return std::abs(p1.from_a - p0.from_a);
  if (p1.a == p1.b) return position_dist(space, p0, p1.a);
  if (p0.a == p0.b) return position_dist(space, p1, p0.a);
  return position_dist(space, p0, p1.a) + p1.from_a;  // conservative route
}

}  // namespace

void validate_trace(const MetricSpace& space, const Instance& inst, const Trace& trace) {
  double t = 0.0;
  Position last = node_position(space, space.origin());
  for (const auto& s : trace.segments) {
    if (std::abs(s.t0 - t) > kTol) throw std::runtime_error("trace gap at t=" + std::to_string(t));
    double motion = segment_motion(space, s.p0, s.p1);
    if (motion > (s.t1 - s.t0) * (1 + 1e-12) + kTol)
      throw std::runtime_error("trace exceeds unit speed at t=" + std::to_string(s.t0));
    t = s.t1;
    last = s.p1;
  }
  if (std::abs(trace.makespan - t) > kTol && !trace.segments.empty())
    throw std::runtime_error("makespan does not match last segment");
  for (int i = 0; i < inst.count(); ++i) {
    if (trace.service[i] < 0) throw std::runtime_error("request left unserved");
    if (trace.service[i] + kTol < inst.release_of(i))
      throw std::runtime_error("request served before release");
  }
  bool at_o = space.is_line() ? std::abs(last.coord - space.origin_coord()) <= kTol
                              : position_at_node(space, last, space.origin());
  if (!trace.segments.empty() && !at_o) throw std::runtime_error("trace does not end at origin");
}

double replay_makespan(const Trace& trace) {
  double t = 0.0;
  for (const auto& s : trace.segments) t = s.t1;
  return t;
}

double empirical_cr(const Trace& trace, const MetricSpace& space, const Instance& inst,
                    bool exact) {
  double denom;
  if (exact) {
    denom = optimal_makespan(space, inst);
  } else {
    TourProblem p;
    p.space = &space;
    p.kind = inst.kind;
    p.start = p.terminal = space.origin();
    p.requests = inst.requests;
    p.rides = inst.rides;
    denom = approx_tour(p).completion;
  }
  if (denom == 0.0) return 1.0;
  return trace.makespan / denom;
}

}  // namespace covertour
