#pragma once

#include <string>
#include <utility>
#include <vector>

#include "covertour/policy.hpp"

namespace covertour {

struct TraceSegment {
  double t0 = 0.0, t1 = 0.0;
  Position p0, p1;
};

struct Trace {
  std::vector<TraceSegment> segments;
  std::vector<double> service;  // absolute service time per actual request
  double makespan = 0.0;
  std::vector<std::pair<double, std::string>> phase_log;
  std::vector<std::pair<double, std::string>> decision_log;
};

/// Executes the policy against the instance. The returned trace has passed
/// validate_trace; an infeasible plan raises std::runtime_error naming the
/// offending step.
Trace run(const MetricSpace& space, const Instance& inst, OnlinePolicy& policy);

/// Trace invariants: contiguous segments, unit speed, service after release,
/// termination at the origin, makespan equal to the last segment end.
void validate_trace(const MetricSpace& space, const Instance& inst, const Trace& trace);

/// Recomputes the makespan from the segments alone.
double replay_makespan(const Trace& trace);

/// makespan / optimal-makespan estimate; exact mode uses the exact solver.
double empirical_cr(const Trace& trace, const MetricSpace& space, const Instance& inst,
                    bool exact = true);

/// One linear piece of a plan's deterministic execution: either stationary or
/// unit-speed motion along a single geodesic.
struct TimedLeg {
  double t0 = 0.0, t1 = 0.0;
  Position p0, p1;
  int step = -1;  // index into the plan, -1 for the trailing idle leg
};

/// Deterministic forward execution of a plan assuming no interruptions;
/// includes a trailing unbounded idle leg at the final position.
std::vector<TimedLeg> plan_timeline(const MetricSpace& space, const Instance& inst,
                                    Position start, double t0, const Plan& plan);

/// Absolute completion time of every plan step under uninterrupted execution.
std::vector<double> plan_step_ends(const MetricSpace& space, const Instance& inst, Position start,
                                   double t0, const Plan& plan);

/// Earliest time t with t + d(p(t), origin) > bound along the legs, or
/// +infinity. Equality does not violate.
double earliest_boundary_violation(const MetricSpace& space, const std::vector<TimedLeg>& legs,
                                   double bound);

}  // namespace covertour
