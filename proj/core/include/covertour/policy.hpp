#pragma once

#include <limits>
#include <string>
#include <vector>

#include "covertour/instance.hpp"

namespace covertour {

/// Server location. Line spaces use `coord` exclusively; graph spaces use the
/// geodesic parameterization (a, b, from_a) and sit at a node when from_a is
/// 0 or the full geodesic length.
struct Position {
  PointId a = 0;
  PointId b = 0;
  double from_a = 0.0;
  double coord = 0.0;
};

Position node_position(const MetricSpace& space, PointId p);
bool position_at_node(const MetricSpace& space, const Position& pos, PointId p);
/// Distance from a mid-geodesic position to a point: min over the two
/// endpoint routes (exact coordinates on line spaces).
double position_dist(const MetricSpace& space, const Position& pos, PointId p);
double position_dist_coord(const MetricSpace& space, const Position& pos, double coord);

struct PlanStep {
  enum class Kind { MovePoint, MoveCoord, Wait, Pickup, Dropoff };
  Kind kind = Kind::Wait;
  PointId point = -1;  // MovePoint target; Pickup/Dropoff node
  double coord = 0.0;  // MoveCoord target (line spaces)
  double time = 0.0;   // Wait: absolute end; Pickup: earliest pickup time
  int request = -1;    // actual request/ride index; -1 for phantom visits
  int predicted = -1;  // predicted-set index, for policy bookkeeping only
};

/// A policy's current intent: timed steps plus the set of actual requests the
/// plan is willing to serve when the server stands at their location.
struct Plan {
  std::vector<PlanStep> steps;
  std::vector<int> serve;
};

/// Simulator services exposed to policies. Policies may only observe released
/// requests; querying an unreleased one is a hard error.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual const MetricSpace& space() const = 0;
  virtual ProblemKind kind() const = 0;
  virtual double now() const = 0;
  virtual Position position() const = 0;
  virtual double dist_to(PointId p) const = 0;
  virtual std::vector<int> released_unserved() const = 0;
  virtual bool served(int i) const = 0;
  virtual Request request(int i) const = 0;
  virtual RideRequest ride(int i) const = 0;
  virtual int carrying() const = 0;  // actual ride on board, -1 if none
  virtual bool loaded() const = 0;   // true also for phantom rides
  virtual void set_plan(Plan plan) = 0;
  virtual void request_wake(double t, int tag) = 0;
  virtual void log_phase(const std::string& label) = 0;
  virtual void log_decision(const std::string& label) = 0;
};

class OnlinePolicy {
 public:
  virtual ~OnlinePolicy() = default;
  virtual std::string name() const = 0;
  /// Proven competitive ratio, +inf when no bound is certified.
  virtual double certified_ratio() const { return std::numeric_limits<double>::infinity(); }
  virtual void start(Controller& c) = 0;
  virtual void on_release(Controller& c, int i) = 0;
  virtual void on_wake(Controller& c, int tag) { (void)c, (void)tag; }
  virtual void on_plan_complete(Controller& c) { (void)c; }
  virtual void on_step_complete(Controller& c, const PlanStep& s) { (void)c, (void)s; }
  virtual void on_serve(Controller& c, int i) { (void)c, (void)i; }
};

}  // namespace covertour
