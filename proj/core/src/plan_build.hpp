#pragma once

#include <vector>

#include "covertour/policy.hpp"
#include "covertour/tour.hpp"

namespace covertour::detail {

// Annotation carried from a tour-problem request into its plan steps.
struct PlanTarget {
  int actual = -1;
  int predicted = -1;
};

// Distance from the server's current position to every point; feeds
// TourProblem::start_dist when replanning away from a node.
inline std::vector<double> start_distances(const Controller& c) {
  std::vector<double> d(c.space().size());
  for (int p = 0; p < c.space().size(); ++p) d[p] = c.dist_to(p);
  return d;
}

// Expands a solved tour into simulator steps ending at the problem terminal.
// targets parallels the problem's request list; serve lists actual requests.
inline Plan plan_from_tour(const TourProblem& p, const Tour& tour,
                           const std::vector<PlanTarget>& targets) {
  Plan plan;
  for (size_t j = 0; j < tour.order.size(); ++j) {
    int i = tour.order[j];
    const PlanTarget& tg = targets[i];
    if (p.kind == ProblemKind::Tsp) {
      const Request& r = p.requests[i];
      plan.steps.push_back({PlanStep::Kind::MovePoint, r.loc, 0.0, 0.0, tg.actual, tg.predicted});
      // waits fold the release date in; zero-length when already released
      plan.steps.push_back(
          {PlanStep::Kind::Wait, r.loc, 0.0, tour.service[j], tg.actual, tg.predicted});
    } else {
      const RideRequest& r = p.rides[i];
      plan.steps.push_back({PlanStep::Kind::MovePoint, r.pickup, 0.0, 0.0, tg.actual, tg.predicted});
      plan.steps.push_back(
          {PlanStep::Kind::Pickup, r.pickup, 0.0, r.release, tg.actual, tg.predicted});
      plan.steps.push_back(
          {PlanStep::Kind::MovePoint, r.dropoff, 0.0, 0.0, tg.actual, tg.predicted});
      plan.steps.push_back({PlanStep::Kind::Dropoff, r.dropoff, 0.0, 0.0, tg.actual, tg.predicted});
    }
    if (tg.actual >= 0) plan.serve.push_back(tg.actual);
  }
  plan.steps.push_back({PlanStep::Kind::MovePoint, p.terminal, 0.0, 0.0, -1, -1});
  return plan;
}

// Tour problem over the given actual request indices, rooted at the server's
// current position and time, ending at the origin.
inline TourProblem problem_from_state(const Controller& c, const std::vector<int>& ids) {
  TourProblem p;
  p.space = &c.space();
  p.kind = c.kind();
  p.start = c.space().origin();
  p.start_time = c.now();
  p.terminal = c.space().origin();
  p.start_dist = start_distances(c);
  for (int i : ids) {
    if (p.kind == ProblemKind::Tsp)
      p.requests.push_back(c.request(i));
    else
      p.rides.push_back(c.ride(i));
  }
  return p;
}

inline std::vector<PlanTarget> actual_targets(const std::vector<int>& ids) {
  std::vector<PlanTarget> t(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) t[i].actual = ids[i];
  return t;
}

}  // namespace covertour::detail
