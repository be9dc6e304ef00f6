#pragma once

#include <vector>

#include "covertour/instance.hpp"

namespace covertour {

/// Offline tour problem with release dates: serve all requests starting from
/// `start` at `start_time`, end at `terminal`.
struct TourProblem {
  const MetricSpace* space = nullptr;
  ProblemKind kind = ProblemKind::Tsp;
  PointId start = 0;
  double start_time = 0.0;
  PointId terminal = 0;
  std::vector<Request> requests;   // kind == Tsp
  std::vector<RideRequest> rides;  // kind == Darp
  // distance from the true start to every point; overrides `start` when
  // non-empty (replanning away from any node)
  std::vector<double> start_dist;

  double dist_from_start(PointId q) const {
    return start_dist.empty() ? space->dist(start, q) : start_dist[q];
  }
  int count() const {
    return kind == ProblemKind::Tsp ? static_cast<int>(requests.size())
                                    : static_cast<int>(rides.size());
  }
};

struct Tour {
  std::vector<int> order;        // visit order of request indices
  std::vector<double> service;   // absolute service times (dropoff for rides)
  double completion = 0.0;       // absolute time the server reaches terminal
};

inline constexpr int kExactTourCap = 14;

/// Minimum-makespan tour by subset DP; waits fold in as max(arrival, release).
/// Rides are atomic: pickup (waiting for release) immediately followed by the
/// dropoff. Throws when the request count exceeds kExactTourCap.
Tour exact_tour(const TourProblem& p);

/// Release-date tour from a nu-approximate TSP tour (MST doubling for nu = 2),
/// following the tour and waiting at early arrivals. Completion is at most
/// (1 + nu) times the exact completion.
Tour approx_tour(const TourProblem& p, double nu = 2.0);

/// Optimal makespan for serving `subset` from origin anchor.loc at initial
/// time anchor.release, returning to anchor.loc; reported relative to the
/// initial time.
double gamma_tsp(const MetricSpace& space, const std::vector<Request>& subset,
                 const Request& anchor);

/// Dial-a-Ride hyperedge cost: cheaper of serving from the anchor's pickup at
/// its release or from its dropoff after the ride, plus D; zero for an
/// identical singleton ride.
double gamma_darp(const MetricSpace& space, const std::vector<RideRequest>& subset,
                  const RideRequest& anchor, double max_shared_distance);

/// Relative optimal costs for every subset of `requests` served from
/// (anchor_loc, anchor_time) and back; index = bitmask. Batch form used by the
/// cover solver.
std::vector<double> subset_tour_costs(const MetricSpace& space,
                                      const std::vector<Request>& requests,
                                      PointId anchor_loc, double anchor_time);
std::vector<double> subset_ride_costs(const MetricSpace& space,
                                      const std::vector<RideRequest>& rides,
                                      PointId anchor_loc, double anchor_time);

/// Optimal makespan of the full offline instance from the origin (C*).
double optimal_makespan(const MetricSpace& space, const Instance& inst);

/// Closed-form optimal makespan on the half-line: max over requests of
/// max{r + x, 2x}.
double half_line_optimum(const MetricSpace& space, const Instance& inst);

}  // namespace covertour
