#include "covertour/classic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "covertour/tour.hpp"
#include "plan_build.hpp"

namespace covertour {

namespace {

constexpr double kTol = 1e-9;
constexpr int kSmartStartWake = 1;

Tour solve(const TourProblem& p, SolverKind solver, double nu) {
  return solver == SolverKind::Exact ? exact_tour(p) : approx_tour(p, nu);
}

}  // namespace

ReplanPolicy::ReplanPolicy(SolverKind solver, double nu) : solver_(solver), nu_(nu) {}

std::string ReplanPolicy::name() const {
  return solver_ == SolverKind::Exact ? "replan" : "replan_approx";
}

double ReplanPolicy::certified_ratio() const {
  return solver_ == SolverKind::Approx ? 1.5 + nu_ : std::numeric_limits<double>::infinity();
}

void ReplanPolicy::on_release(Controller& c, int) { recompute(c); }

void ReplanPolicy::recompute(Controller& c) {
  std::vector<int> ids = c.released_unserved();
  Plan plan;
  TourProblem p;
  p.space = &c.space();
  p.kind = c.kind();
  p.terminal = c.space().origin();

  int car = c.kind() == ProblemKind::Darp ? c.carrying() : -1;
  if (car >= 0) {
    // finish the ride in progress, then tour the rest from its dropoff
    ids.erase(std::remove(ids.begin(), ids.end(), car), ids.end());
    RideRequest r = c.ride(car);
    plan.steps.push_back({PlanStep::Kind::MovePoint, r.dropoff, 0.0, 0.0, car, -1});
    plan.steps.push_back({PlanStep::Kind::Dropoff, r.dropoff, 0.0, 0.0, car, -1});
    p.start = r.dropoff;
    p.start_time = c.now() + c.dist_to(r.dropoff);
  } else {
    p.start_time = c.now();
    p.start_dist = detail::start_distances(c);
  }
  for (int i : ids) {
    if (p.kind == ProblemKind::Tsp)
      p.requests.push_back(c.request(i));
    else
      p.rides.push_back(c.ride(i));
  }

  Plan tail = detail::plan_from_tour(p, solve(p, solver_, nu_), detail::actual_targets(ids));
  plan.steps.insert(plan.steps.end(), tail.steps.begin(), tail.steps.end());
  plan.serve = std::move(tail.serve);
  c.set_plan(std::move(plan));
}

IgnorePolicy::IgnorePolicy(SolverKind solver, double nu) : solver_(solver), nu_(nu) {}

std::string IgnorePolicy::name() const {
  return solver_ == SolverKind::Exact ? "ignore" : "ignore_approx";
}

void IgnorePolicy::on_release(Controller& c, int) {
  if (!touring_) commit(c);
}

void IgnorePolicy::on_plan_complete(Controller& c) {
  touring_ = false;
  commit(c);
}

void IgnorePolicy::commit(Controller& c) {
  std::vector<int> ids = c.released_unserved();
  if (ids.empty()) return;
  TourProblem p = detail::problem_from_state(c, ids);
  c.set_plan(detail::plan_from_tour(p, solve(p, solver_, nu_), detail::actual_targets(ids)));
  touring_ = true;
}

SmartStartPolicy::SmartStartPolicy(SolverKind solver, double nu) : solver_(solver), nu_(nu) {}

std::string SmartStartPolicy::name() const {
  return solver_ == SolverKind::Exact ? "smartstart" : "smartstart_approx";
}

double SmartStartPolicy::certified_ratio() const {
  return solver_ == SolverKind::Exact ? 2.0 : approx_smartstart_ratio(nu_);
}

void SmartStartPolicy::on_release(Controller& c, int) {
  if (!touring_ && !frozen_) decide(c);
}

void SmartStartPolicy::on_wake(Controller& c, int tag) {
  if (tag == kSmartStartWake && !touring_ && !frozen_) decide(c);
}

void SmartStartPolicy::on_plan_complete(Controller& c) {
  touring_ = false;
  if (!frozen_) decide(c);
}

void SmartStartPolicy::decide(Controller& c) {
  std::vector<int> ids = c.released_unserved();
  if (ids.empty()) return;
  TourProblem p = detail::problem_from_state(c, ids);
  Tour tour = solve(p, solver_, nu_);
  double t = c.now();
  double ell = tour.completion - t;
  if (ell <= t + kTol) {
    if (hook_ && !hook_(t, ell)) {
      frozen_ = true;
      return;
    }
    c.log_decision("depart");
    c.set_plan(detail::plan_from_tour(p, tour, detail::actual_targets(ids)));
    touring_ = true;
  } else {
    // sleep until the absolute time equal to the tour length
    c.log_decision("sleep");
    c.request_wake(ell, kSmartStartWake);
  }
}

void MrinPolicy::start(Controller& c) {
  if (!c.space().is_half_line() || c.kind() != ProblemKind::Tsp)
    throw std::invalid_argument("mrin requires a half-line TSP instance");
}

void MrinPolicy::on_release(Controller& c, int) {
  if (!frozen_) recompute(c);
}

void MrinPolicy::on_plan_complete(Controller& c) {
  if (!frozen_) recompute(c);
}

void MrinPolicy::recompute(Controller& c) {
  std::vector<int> ids = c.released_unserved();
  double pc = c.position().coord;
  double target = -1.0;
  for (int i : ids) {
    double x = c.space().coord(c.request(i).loc);
    if (x > pc + kTol) target = std::max(target, x);
  }
  Plan plan;
  plan.serve = ids;
  if (target >= 0.0) {
    plan.steps.push_back({PlanStep::Kind::MoveCoord, -1, target, 0.0, -1, -1});
  } else if (pc > c.space().origin_coord() + kTol) {
    plan.steps.push_back({PlanStep::Kind::MoveCoord, -1, c.space().origin_coord(), 0.0, -1, -1});
  }
  c.set_plan(std::move(plan));
}

std::unique_ptr<OnlinePolicy> make_replan(SolverKind solver, double nu) {
  return std::make_unique<ReplanPolicy>(solver, nu);
}

std::unique_ptr<OnlinePolicy> make_ignore(SolverKind solver, double nu) {
  return std::make_unique<IgnorePolicy>(solver, nu);
}

std::unique_ptr<SmartStartPolicy> make_smartstart(SolverKind solver, double nu) {
  return std::make_unique<SmartStartPolicy>(solver, nu);
}

std::unique_ptr<MrinPolicy> make_mrin() { return std::make_unique<MrinPolicy>(); }

double approx_smartstart_ratio(double nu) {
  return (4.0 * nu + 1.0 + std::sqrt(1.0 + 8.0 * nu)) / 4.0;
}

}  // namespace covertour
