#include "covertour/augmented.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "covertour/simulator.hpp"
#include "covertour/tour.hpp"
#include "plan_build.hpp"

namespace covertour {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-9;

// wake tags; subroutine tags are shifted so wrappers can route them
constexpr int kBoundaryWake = 100;
constexpr int kTrustWake = 101;
constexpr int kHlWake = 102;
constexpr int kAbsenceWake = 103;
constexpr int kSubOffset = 1000;

double scaled_tol(double ref) { return kTol * std::max(1.0, std::abs(ref)); }

Tour solve(const TourProblem& p, SolverKind solver, double nu) {
  return solver == SolverKind::Exact ? exact_tour(p) : approx_tour(p, nu);
}

// Length of the configured tour over the predicted requests from the origin.
double prediction_tour_cost(const MetricSpace& space, const PredictionSet& pred, SolverKind solver,
                            double nu) {
  TourProblem p;
  p.space = &space;
  p.kind = pred.kind;
  p.start = p.terminal = space.origin();
  p.requests = pred.requests;
  p.rides = pred.rides;
  return solve(p, solver, nu).completion;
}

// Minimal instance carrying the release dates the step executor needs for
// pickups; ride indices the policy has not seen stay at release 0.
Instance surrogate_instance(const Controller& c, const Plan& plan) {
  Instance inst;
  inst.kind = c.kind();
  if (inst.kind != ProblemKind::Darp) return inst;
  int hi = -1;
  for (const auto& s : plan.steps) hi = std::max(hi, s.request);
  inst.rides.resize(hi + 1);
  for (int i : c.released_unserved())
    if (i <= hi) inst.rides[i] = c.ride(i);
  return inst;
}

std::vector<TimedLeg> timeline_from(const Controller& c, const Plan& plan) {
  return plan_timeline(c.space(), surrogate_instance(c, plan), c.position(), c.now(), plan);
}

// Completion time of the plan under uninterrupted execution from now.
double plan_completion(const Controller& c, const Plan& plan) {
  auto legs = timeline_from(c, plan);
  return legs.back().t0;  // trailing idle leg starts when the plan is done
}

// Matches a released actual request against an unmatched identical predicted
// one; returns the predicted index or -1.
int match_release(const PredictionSet& pred, std::vector<int>& pred_match, Controller& c, int i) {
  if (pred.kind == ProblemKind::Tsp) {
    Request r = c.request(i);
    for (int j = 0; j < pred.count(); ++j)
      if (pred_match[j] < 0 && pred.requests[j] == r) {
        pred_match[j] = i;
        return j;
      }
  } else {
    RideRequest r = c.ride(i);
    for (int j = 0; j < pred.count(); ++j)
      if (pred_match[j] < 0 && pred.rides[j] == r) {
        pred_match[j] = i;
        return j;
      }
  }
  return -1;
}

// Dial-a-Ride phase (i) rule: drop planned rides whose dropoff plus the trip
// home would overrun the trust horizon. Blocked rides stay hidden from the
// subroutine and are left to the prediction phase.
void filter_blocked(Controller& c, double bound, Plan& plan, std::vector<char>& blocked) {
  if (c.kind() != ProblemKind::Darp || !std::isfinite(bound)) return;
  PointId o = c.space().origin();
  for (;;) {
    auto ends = plan_step_ends(c.space(), surrogate_instance(c, plan), c.position(), c.now(), plan);
    int bad = -1;
    for (size_t idx = 0; idx < plan.steps.size(); ++idx) {
      const PlanStep& s = plan.steps[idx];
      if (s.kind != PlanStep::Kind::Dropoff || s.request < 0) continue;
      if (s.request == c.carrying()) continue;  // a ride in progress must finish
      if (ends[idx] + c.space().dist(s.point, o) > bound + scaled_tol(bound)) {
        bad = s.request;
        break;
      }
    }
    if (bad < 0) return;
    if (static_cast<int>(blocked.size()) <= bad) blocked.resize(bad + 1, 0);
    blocked[bad] = 1;
    std::erase_if(plan.steps, [&](const PlanStep& s) { return s.request == bad; });
    std::erase(plan.serve, bad);
    c.log_decision("block_ride_" + std::to_string(bad));
  }
}

// Controller facade handed to a phase (i) subroutine: plans are routed
// through the owner, wake tags are shifted, blocked rides are invisible.
class SubProxy : public Controller {
 public:
  Controller* real = nullptr;
  std::function<void(Plan)> sink;
  std::vector<char> blocked;

  const MetricSpace& space() const override { return real->space(); }
  ProblemKind kind() const override { return real->kind(); }
  double now() const override { return real->now(); }
  Position position() const override { return real->position(); }
  double dist_to(PointId p) const override { return real->dist_to(p); }
  std::vector<int> released_unserved() const override {
    auto v = real->released_unserved();
    std::erase_if(v, [&](int i) { return i < static_cast<int>(blocked.size()) && blocked[i]; });
    return v;
  }
  bool served(int i) const override { return real->served(i); }
  Request request(int i) const override { return real->request(i); }
  RideRequest ride(int i) const override { return real->ride(i); }
  int carrying() const override { return real->carrying(); }
  bool loaded() const override { return real->loaded(); }
  void set_plan(Plan plan) override { sink(std::move(plan)); }
  void request_wake(double t, int tag) override { real->request_wake(t, tag + kSubOffset); }
  void log_phase(const std::string& label) override { real->log_phase(label); }
  void log_decision(const std::string& label) override { real->log_decision(label); }
};

}  // namespace

// ---------------------------------------------------------------- PredictReplan

PredictReplanPolicy::PredictReplanPolicy(PredictionSet pred, bool practical, SolverKind solver,
                                         double nu)
    : pred_(std::move(pred)), practical_(practical), solver_(solver), nu_(nu) {
  if (pred_.is_scalar())
    throw std::invalid_argument("predict_replan requires a request-set prediction");
  pred_served_.assign(pred_.count(), 0);
  pred_dropped_.assign(pred_.count(), 0);
  pred_match_.assign(pred_.count(), -1);
}

bool PredictReplanPolicy::known_absent(int j, double now) const {
  double r = pred_.kind == ProblemKind::Tsp ? pred_.requests[j].release : pred_.rides[j].release;
  return pred_match_[j] < 0 && r < now - kTol;
}

// a no-show must be noticed the moment its predicted release passes, not at
// the next unexpected release, or the server chases it across the space
void PredictReplanPolicy::arm_absence(Controller& c) {
  if (!practical_ || !active_) return;
  double next = kInf;
  for (int j = 0; j < pred_.count(); ++j) {
    if (pred_served_[j] || pred_dropped_[j] || pred_match_[j] >= 0) continue;
    double r = pred_.kind == ProblemKind::Tsp ? pred_.requests[j].release : pred_.rides[j].release;
    next = std::min(next, r);
  }
  if (next == kInf) return;
  c.request_wake(std::max(c.now(), next + 2 * scaled_tol(next)), kAbsenceWake);
}

void PredictReplanPolicy::on_wake(Controller& c, int tag) {
  if (tag != kAbsenceWake || !active_) return;
  bool stale = false;
  for (int j = 0; j < pred_.count(); ++j)
    if (!pred_served_[j] && !pred_dropped_[j] && known_absent(j, c.now())) stale = true;
  if (!stale) {
    arm_absence(c);
    return;
  }
  if (c.kind() == ProblemKind::Darp && c.loaded()) {
    pending_ = true;  // recompute resumes once the capacity frees up
    return;
  }
  recompute(c);
}

void PredictReplanPolicy::start(Controller& c) {
  if (pred_.kind != c.kind())
    throw std::invalid_argument("prediction kind does not match the instance");
  active_ = true;
  recompute(c);
}

void PredictReplanPolicy::observe_release(Controller& c, int i) { note_release(c, i, false); }

void PredictReplanPolicy::observe_serve(Controller&, int i) {
  if (i < static_cast<int>(actual_match_.size()) && actual_match_[i] >= 0)
    pred_served_[actual_match_[i]] = 1;
}

void PredictReplanPolicy::activate(Controller& c) {
  active_ = true;
  recompute(c);
}

void PredictReplanPolicy::on_release(Controller& c, int i) { note_release(c, i, true); }

void PredictReplanPolicy::note_release(Controller& c, int i, bool active) {
  if (static_cast<int>(actual_match_.size()) <= i) actual_match_.resize(i + 1, -1);
  int j = match_release(pred_, pred_match_, c, i);
  actual_match_[i] = j;
  if (j < 0) {
    unexpected_.push_back(i);
    if (!active) return;
    if (c.kind() == ProblemKind::Darp && c.loaded()) {
      pending_ = true;
      c.log_decision("defer_recompute");
    } else {
      recompute(c);
    }
    return;
  }
  if (!active) return;
  serve_.push_back(i);
  if (c.kind() == ProblemKind::Darp) {
    // upgrade the phantom visit so the real ride is picked up and dropped
    for (auto& s : remaining_)
      if (s.predicted == j && s.request < 0) s.request = i;
  }
  reissue(c);
}

void PredictReplanPolicy::recompute(Controller& c) {
  pending_ = false;
  double t = c.now();
  TourProblem p;
  p.space = &c.space();
  p.kind = c.kind();
  p.terminal = c.space().origin();
  p.start_time = t;
  p.start_dist = detail::start_distances(c);
  std::vector<detail::PlanTarget> targets;
  std::vector<char> covered;  // actual indices already represented

  auto cover = [&](int i) {
    if (i < 0) return;
    if (static_cast<int>(covered.size()) <= i) covered.resize(i + 1, 0);
    covered[i] = 1;
  };

  for (int j = 0; j < pred_.count(); ++j) {
    if (pred_served_[j]) continue;
    int a = pred_match_[j];
    if (a >= 0 && c.served(a)) {
      pred_served_[j] = 1;
      continue;
    }
    if (practical_ && known_absent(j, t)) {
      pred_dropped_[j] = 1;
      continue;
    }
    if (p.kind == ProblemKind::Tsp)
      p.requests.push_back(pred_.requests[j]);
    else
      p.rides.push_back(pred_.rides[j]);
    targets.push_back({a, j});
    cover(a);
  }
  for (int i : c.released_unserved()) {
    if (i < static_cast<int>(covered.size()) && covered[i]) continue;
    if (p.kind == ProblemKind::Tsp)
      p.requests.push_back(c.request(i));
    else
      p.rides.push_back(c.ride(i));
    targets.push_back({i, -1});
  }

  Plan plan = detail::plan_from_tour(p, solve(p, solver_, nu_), targets);
  remaining_ = plan.steps;
  serve_ = plan.serve;
  reissue(c);
  arm_absence(c);
}

void PredictReplanPolicy::reissue(Controller& c) { c.set_plan(Plan{remaining_, serve_}); }

void PredictReplanPolicy::on_step_complete(Controller& c, const PlanStep& s) {
  if (!remaining_.empty()) remaining_.erase(remaining_.begin());
  bool visit = s.kind == (c.kind() == ProblemKind::Tsp ? PlanStep::Kind::Wait
                                                       : PlanStep::Kind::Dropoff);
  if (visit && s.predicted >= 0) pred_served_[s.predicted] = 1;
  if (pending_ && !c.loaded()) recompute(c);
}

void PredictReplanPolicy::on_serve(Controller& c, int i) { observe_serve(c, i); }

// ------------------------------------------------------------------ DelayTrust

struct DelayTrustPolicy::Proxy : SubProxy {};

DelayTrustPolicy::DelayTrustPolicy(PredictionSet pred, double alpha,
                                   std::unique_ptr<OnlinePolicy> sub, SolverKind solver, double nu,
                                   bool practical)
    : pred_(std::move(pred)), alpha_(alpha), sub_(std::move(sub)), solver_(solver), nu_(nu) {
  if (alpha_ <= 0) throw std::invalid_argument("trust parameter alpha must be positive");
  if (pred_.is_scalar())
    throw std::invalid_argument("delay_trust requires a request-set prediction");
  if (!sub_) throw std::invalid_argument("delay_trust needs a phase (i) subroutine");
  if (solver_ == SolverKind::Exact)
    pr_ = std::make_unique<PredictReplanPolicy>(pred_, practical, SolverKind::Exact, nu_);
  else
    pr_ = std::make_unique<PolyPredictReplanPolicy>(pred_, nu_, practical);
  proxy_ = std::make_unique<Proxy>();
  proxy_->sink = [this](Plan plan) {
    Controller& c = *proxy_->real;
    filter_blocked(c, bound_, plan, proxy_->blocked);
    sub_plan_ = plan;
    sub_cursor_ = 0;
    c.set_plan(std::move(plan));
  };
}

DelayTrustPolicy::~DelayTrustPolicy() = default;

double DelayTrustPolicy::certified_ratio() const {
  double rho = sub_->certified_ratio();
  if (!std::isfinite(rho)) return kInf;
  return solver_ == SolverKind::Exact ? 1.0 + rho + rho / alpha_
                                      : rho + (1.0 + nu_) * (1.0 + rho / alpha_);
}

void DelayTrustPolicy::start(Controller& c) {
  proxy_->real = &c;
  chat_ = prediction_tour_cost(c.space(), pred_, solver_, nu_);
  bound_ = alpha_ * chat_;
  phase_ = 1;
  c.log_phase("i");
  sub_->start(*proxy_);
  arm_boundary(c);
}

void DelayTrustPolicy::arm_boundary(Controller& c) {
  if (phase_ != 1) return;
  Plan rem;
  if (sub_cursor_ < sub_plan_.steps.size())
    rem.steps.assign(sub_plan_.steps.begin() + sub_cursor_, sub_plan_.steps.end());
  double tv = earliest_boundary_violation(c.space(), timeline_from(c, rem), bound_);
  if (tv < kInf) {
    tv_ = tv;
    c.request_wake(tv, kBoundaryWake);
  }
}

void DelayTrustPolicy::on_release(Controller& c, int i) {
  proxy_->real = &c;
  if (phase_ == 1) {
    pr_->observe_release(c, i);
    sub_->on_release(*proxy_, i);
    arm_boundary(c);
  } else if (phase_ == 2) {
    pr_->observe_release(c, i);
  } else {
    pr_->on_release(c, i);
  }
}

void DelayTrustPolicy::on_wake(Controller& c, int tag) {
  proxy_->real = &c;
  if (tag >= kSubOffset) {
    if (phase_ == 1) {
      sub_->on_wake(*proxy_, tag - kSubOffset);
      arm_boundary(c);
    }
    return;
  }
  if (tag == kAbsenceWake) {
    if (phase_ == 3) pr_->on_wake(c, tag);
    return;
  }
  if (tag == kBoundaryWake && phase_ == 1 && std::abs(c.now() - tv_) <= scaled_tol(tv_))
    enter_phase2(c);
}

void DelayTrustPolicy::enter_phase2(Controller& c) {
  phase_ = 2;
  c.log_phase("ii");
  Plan plan;
  int car = c.kind() == ProblemKind::Darp ? c.carrying() : -1;
  if (car >= 0) {
    RideRequest r = c.ride(car);
    plan.steps.push_back({PlanStep::Kind::MovePoint, r.dropoff, 0.0, 0.0, car, -1});
    plan.steps.push_back({PlanStep::Kind::Dropoff, r.dropoff, 0.0, 0.0, car, -1});
  }
  plan.steps.push_back({PlanStep::Kind::MovePoint, c.space().origin(), 0.0, 0.0, -1, -1});
  c.set_plan(std::move(plan));
}

void DelayTrustPolicy::enter_phase3(Controller& c) {
  phase_ = 3;
  c.log_phase("iii");
  pr_->activate(c);
}

void DelayTrustPolicy::on_plan_complete(Controller& c) {
  proxy_->real = &c;
  if (phase_ == 1) {
    sub_->on_plan_complete(*proxy_);
    arm_boundary(c);
  } else if (phase_ == 2) {
    enter_phase3(c);
  } else {
    pr_->on_plan_complete(c);
  }
}

void DelayTrustPolicy::on_step_complete(Controller& c, const PlanStep& s) {
  proxy_->real = &c;
  if (phase_ == 1) {
    ++sub_cursor_;
    sub_->on_step_complete(*proxy_, s);
    arm_boundary(c);
  } else if (phase_ == 3) {
    pr_->on_step_complete(c, s);
  }
}

void DelayTrustPolicy::on_serve(Controller& c, int i) {
  proxy_->real = &c;
  if (phase_ == 1) {
    pr_->observe_serve(c, i);
    sub_->on_serve(*proxy_, i);
    arm_boundary(c);
  } else if (phase_ == 2) {
    pr_->observe_serve(c, i);
  } else {
    pr_->on_serve(c, i);
  }
}

// ------------------------------------------------------------------ SmartTrust

struct SmartTrustPolicy::Proxy : SubProxy {};

SmartTrustPolicy::SmartTrustPolicy(PredictionSet pred, double alpha, SolverKind solver, double nu,
                                   bool practical)
    : pred_(std::move(pred)), alpha_(alpha), solver_(solver), nu_(nu), sub_(solver, nu) {
  if (alpha_ <= 0) throw std::invalid_argument("trust parameter alpha must be positive");
  if (pred_.is_scalar())
    throw std::invalid_argument("smart_trust requires a request-set prediction");
  if (solver_ == SolverKind::Exact)
    pr_ = std::make_unique<PredictReplanPolicy>(pred_, practical, SolverKind::Exact, nu_);
  else
    pr_ = std::make_unique<PolyPredictReplanPolicy>(pred_, nu_, practical);
  proxy_ = std::make_unique<Proxy>();
  proxy_->sink = [this](Plan plan) {
    Controller& c = *proxy_->real;
    filter_blocked(c, alpha_ * chat_, plan, proxy_->blocked);
    c.set_plan(std::move(plan));
  };
  sub_.set_departure_hook([this](double t, double ell) {
    if (t + ell > alpha_ * chat_ + scaled_tol(alpha_ * chat_)) {
      pending2_ = true;
      return false;
    }
    return true;
  });
}

SmartTrustPolicy::~SmartTrustPolicy() = default;

double SmartTrustPolicy::certified_ratio() const {
  return solver_ == SolverKind::Exact ? 2.0 + 2.0 / alpha_ : kInf;
}

void SmartTrustPolicy::start(Controller& c) {
  proxy_->real = &c;
  chat_ = prediction_tour_cost(c.space(), pred_, solver_, nu_);
  phase_ = 1;
  c.log_phase("i");
  sub_.start(*proxy_);
  c.request_wake(alpha_ * chat_, kTrustWake);
}

void SmartTrustPolicy::enter_phase2(Controller& c) {
  pending2_ = false;
  phase_ = 2;
  sub_.freeze();
  c.log_phase("ii");
  Plan plan;
  plan.steps.push_back(
      {PlanStep::Kind::Wait, -1, 0.0, std::max(c.now(), alpha_ * chat_ / 2.0), -1, -1});
  c.set_plan(std::move(plan));
}

void SmartTrustPolicy::enter_phase3(Controller& c) {
  phase_ = 3;
  sub_.freeze();
  c.log_phase("iii");
  pr_->activate(c);
}

void SmartTrustPolicy::on_release(Controller& c, int i) {
  proxy_->real = &c;
  if (phase_ == 1) {
    pr_->observe_release(c, i);
    sub_.on_release(*proxy_, i);
    if (pending2_) enter_phase2(c);
  } else if (phase_ == 2) {
    pr_->observe_release(c, i);
  } else {
    pr_->on_release(c, i);
  }
}

void SmartTrustPolicy::on_wake(Controller& c, int tag) {
  proxy_->real = &c;
  if (tag >= kSubOffset) {
    if (phase_ == 1) {
      sub_.on_wake(*proxy_, tag - kSubOffset);
      if (pending2_) enter_phase2(c);
    }
    return;
  }
  if (tag == kAbsenceWake) {
    if (phase_ == 3) pr_->on_wake(c, tag);
    return;
  }
  if (tag == kTrustWake && phase_ == 1 && !sub_.touring()) enter_phase3(c);
}

void SmartTrustPolicy::on_plan_complete(Controller& c) {
  proxy_->real = &c;
  if (phase_ == 1) {
    sub_.on_plan_complete(*proxy_);
    if (pending2_) enter_phase2(c);
  } else if (phase_ == 2) {
    enter_phase3(c);
  } else {
    pr_->on_plan_complete(c);
  }
}

void SmartTrustPolicy::on_step_complete(Controller& c, const PlanStep& s) {
  proxy_->real = &c;
  if (phase_ == 1) {
    sub_.on_step_complete(*proxy_, s);
    if (pending2_) enter_phase2(c);
  } else if (phase_ == 3) {
    pr_->on_step_complete(c, s);
  }
}

void SmartTrustPolicy::on_serve(Controller& c, int i) {
  proxy_->real = &c;
  if (phase_ == 1) {
    pr_->observe_serve(c, i);
    sub_.on_serve(*proxy_, i);
  } else if (phase_ == 2) {
    pr_->observe_serve(c, i);
  } else {
    pr_->on_serve(c, i);
  }
}

// ----------------------------------------------------------- PolyPredictReplan

PolyPredictReplanPolicy::PolyPredictReplanPolicy(PredictionSet pred, double nu, bool practical)
    : pred_(std::move(pred)), nu_(nu), practical_(practical) {
  if (pred_.is_scalar())
    throw std::invalid_argument("poly_predict_replan requires a request-set prediction");
  if (pred_.kind != ProblemKind::Tsp)
    throw std::invalid_argument("poly_predict_replan is provided for the TSP variant");
  pred_served_.assign(pred_.count(), 0);
  pred_dropped_.assign(pred_.count(), 0);
  pred_match_.assign(pred_.count(), -1);
}

bool PolyPredictReplanPolicy::known_absent(int j, double now) const {
  return pred_match_[j] < 0 && pred_.requests[j].release < now - kTol;
}

double PolyPredictReplanPolicy::plan_end(Controller& c, const std::vector<PlanStep>& steps) const {
  return plan_completion(c, Plan{steps, {}});
}

void PolyPredictReplanPolicy::start(Controller& c) {
  if (c.kind() != ProblemKind::Tsp)
    throw std::invalid_argument("poly_predict_replan is provided for the TSP variant");
  active_ = true;
  recompute(c);
  ctilde_ = plan_end(c, remaining_);
}

void PolyPredictReplanPolicy::observe_release(Controller& c, int i) { note_release(c, i, false); }

void PolyPredictReplanPolicy::observe_serve(Controller&, int i) {
  if (i < static_cast<int>(actual_match_.size()) && actual_match_[i] >= 0)
    pred_served_[actual_match_[i]] = 1;
}

void PolyPredictReplanPolicy::activate(Controller& c) {
  active_ = true;
  recompute(c);
}

void PolyPredictReplanPolicy::on_release(Controller& c, int i) { note_release(c, i, true); }

void PolyPredictReplanPolicy::note_release(Controller& c, int i, bool active) {
  if (static_cast<int>(actual_match_.size()) <= i) actual_match_.resize(i + 1, -1);
  int j = match_release(pred_, pred_match_, c, i);
  actual_match_[i] = j;
  if (j < 0) {
    unexpected_.push_back(i);
    if (active) handle_unexpected(c, i);
    return;
  }
  if (active) {
    serve_.push_back(i);
    reissue(c);
  }
}

void PolyPredictReplanPolicy::recompute(Controller& c) {
  double t = c.now();
  TourProblem p;
  p.space = &c.space();
  p.kind = ProblemKind::Tsp;
  p.terminal = c.space().origin();
  p.start_time = t;
  p.start_dist = detail::start_distances(c);
  std::vector<detail::PlanTarget> targets;
  std::vector<char> covered;
  for (int j = 0; j < pred_.count(); ++j) {
    if (pred_served_[j]) continue;
    int a = pred_match_[j];
    if (a >= 0 && c.served(a)) {
      pred_served_[j] = 1;
      continue;
    }
    if (practical_ && known_absent(j, t)) {
      pred_dropped_[j] = 1;
      continue;
    }
    p.requests.push_back(pred_.requests[j]);
    targets.push_back({a, j});
    if (a >= 0) {
      if (static_cast<int>(covered.size()) <= a) covered.resize(a + 1, 0);
      covered[a] = 1;
    }
  }
  for (int i : c.released_unserved()) {
    if (i < static_cast<int>(covered.size()) && covered[i]) continue;
    p.requests.push_back(c.request(i));
    targets.push_back({i, -1});
  }
  Plan plan = detail::plan_from_tour(p, approx_tour(p, nu_), targets);
  remaining_ = plan.steps;
  serve_ = plan.serve;
  reissue(c);
  arm_absence(c);
}

void PolyPredictReplanPolicy::arm_absence(Controller& c) {
  if (!practical_ || !active_) return;
  double next = kInf;
  for (int j = 0; j < pred_.count(); ++j) {
    if (pred_served_[j] || pred_dropped_[j] || pred_match_[j] >= 0) continue;
    next = std::min(next, pred_.requests[j].release);
  }
  if (next == kInf) return;
  c.request_wake(std::max(c.now(), next + 2 * scaled_tol(next)), kAbsenceWake);
}

void PolyPredictReplanPolicy::on_wake(Controller& c, int tag) {
  if (tag != kAbsenceWake || !active_) return;
  bool stale = false;
  for (int j = 0; j < pred_.count(); ++j)
    if (!pred_served_[j] && !pred_dropped_[j] && known_absent(j, c.now())) stale = true;
  if (stale)
    recompute(c);
  else
    arm_absence(c);
}

void PolyPredictReplanPolicy::handle_unexpected(Controller& c, int i) {
  Request x = c.request(i);
  const MetricSpace& space = c.space();
  // anchor: predicted request cheapest to serve from the unexpected release
  int best = -1;
  double bestv = kInf;
  for (int j = 0; j < pred_.count(); ++j) {
    double v = gamma_tsp(space, {pred_.requests[j]}, x);
    if (v < bestv) {
      bestv = v;
      best = j;
    }
  }

  // T1: current tour plus an excursion
  std::vector<PlanStep> t1 = remaining_;
  PlanStep mv{PlanStep::Kind::MovePoint, x.loc, 0.0, 0.0, i, -1};
  PlanStep wt{PlanStep::Kind::Wait, x.loc, 0.0, x.release, i, -1};
  bool in_tour = false;
  size_t at = 0;
  if (best >= 0)
    for (size_t idx = 0; idx < t1.size(); ++idx)
      if (t1[idx].kind == PlanStep::Kind::Wait && t1[idx].predicted == best) {
        in_tour = true;
        at = idx + 1;
        break;
      }
  if (in_tour) {
    PlanStep back{PlanStep::Kind::MovePoint, pred_.requests[best].loc, 0.0, 0.0, -1, -1};
    t1.insert(t1.begin() + at, {mv, wt, back});
  } else {
    // immediate deviation; the return leg folds into the next move
    t1.insert(t1.begin(), {mv, wt});
  }
  double prev_end = plan_end(c, remaining_);
  double t1_end = plan_end(c, t1);

  // T2: fresh approximate tour over everything unserved
  TourProblem p;
  p.space = &space;
  p.kind = ProblemKind::Tsp;
  p.terminal = space.origin();
  p.start_time = c.now();
  p.start_dist = detail::start_distances(c);
  std::vector<detail::PlanTarget> targets;
  std::vector<char> covered;
  for (int j = 0; j < pred_.count(); ++j) {
    if (pred_served_[j]) continue;
    int a = pred_match_[j];
    if (a >= 0 && c.served(a)) {
      pred_served_[j] = 1;
      continue;
    }
    if (practical_ && known_absent(j, c.now())) continue;
    p.requests.push_back(pred_.requests[j]);
    targets.push_back({a, j});
    if (a >= 0) {
      if (static_cast<int>(covered.size()) <= a) covered.resize(a + 1, 0);
      covered[a] = 1;
    }
  }
  for (int q : c.released_unserved()) {
    if (q < static_cast<int>(covered.size()) && covered[q]) continue;
    p.requests.push_back(c.request(q));
    targets.push_back({q, -1});
  }
  Plan t2 = detail::plan_from_tour(p, approx_tour(p, nu_), targets);
  double t2_end = plan_completion(c, t2);

  ExcursionRecord rec;
  rec.request = i;
  rec.anchor = best;
  rec.added = t1_end - prev_end;
  rec.bound = best >= 0 ? 3.0 * gamma_tsp(space, {Request{x.loc, x.release}}, pred_.requests[best])
                        : kInf;
  rec.took_t2 = t2_end < t1_end - scaled_tol(t1_end);
  excursions_.push_back(rec);
  c.log_decision(rec.took_t2 ? "t2" : "t1");

  if (rec.took_t2) {
    remaining_ = t2.steps;
    serve_ = t2.serve;
  } else {
    remaining_ = std::move(t1);
    serve_.push_back(i);
  }
  reissue(c);
}

void PolyPredictReplanPolicy::reissue(Controller& c) { c.set_plan(Plan{remaining_, serve_}); }

void PolyPredictReplanPolicy::on_step_complete(Controller&, const PlanStep& s) {
  if (!remaining_.empty()) remaining_.erase(remaining_.begin());
  if (s.kind == PlanStep::Kind::Wait && s.predicted >= 0) pred_served_[s.predicted] = 1;
}

void PolyPredictReplanPolicy::on_serve(Controller& c, int i) { observe_serve(c, i); }

// --------------------------------------------------------------------- AlgoHl

AlgoHlPolicy::AlgoHlPolicy(double chat, double alpha) : chat_(chat), alpha_(alpha) {
  if (alpha_ <= 0.0 || alpha_ > 0.5)
    throw std::invalid_argument("algohl requires alpha in (0, 1/2]");
  if (chat_ < 0.0) throw std::invalid_argument("predicted makespan must be nonnegative");
}

void AlgoHlPolicy::start(Controller& c) {
  mrin_.start(c);
  phase_ = 1;
  c.log_phase("i");
  c.request_wake(alpha_ * chat_, kHlWake);
}

void AlgoHlPolicy::on_release(Controller& c, int i) { mrin_.on_release(c, i); }

void AlgoHlPolicy::on_wake(Controller& c, int tag) {
  if (tag != kHlWake || phase_ != 1) return;
  mrin_.freeze();
  phase_ = 2;
  double p2 = c.position().coord;
  double p3 = 0.5 * ((1.0 - alpha_) * chat_ + p2);
  c.log_phase("ii");
  Plan plan;
  plan.steps.push_back({PlanStep::Kind::MoveCoord, -1, p3, 0.0, -1, -1});
  c.set_plan(std::move(plan));
}

void AlgoHlPolicy::on_plan_complete(Controller& c) {
  if (phase_ == 2) {
    phase_ = 3;
    c.log_phase("iii");
    mrin_.unfreeze();
    mrin_.recompute(c);
  } else {
    mrin_.on_plan_complete(c);
  }
}

}  // namespace covertour
