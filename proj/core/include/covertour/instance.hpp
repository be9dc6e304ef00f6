#pragma once

#include <optional>
#include <vector>

#include "covertour/metric.hpp"

namespace covertour {

struct Request {
  PointId loc = 0;
  double release = 0.0;

  friend bool operator==(const Request&, const Request&) = default;
};

struct RideRequest {
  PointId pickup = 0;
  PointId dropoff = 0;
  double release = 0.0;

  friend bool operator==(const RideRequest&, const RideRequest&) = default;
};

enum class ProblemKind { Tsp, Darp };

/// Actual online input: either TSP requests or Dial-a-Ride requests.
struct Instance {
  ProblemKind kind = ProblemKind::Tsp;
  std::vector<Request> requests;
  std::vector<RideRequest> rides;

  int count() const {
    return kind == ProblemKind::Tsp ? static_cast<int>(requests.size())
                                    : static_cast<int>(rides.size());
  }
  double release_of(int i) const {
    return kind == ProblemKind::Tsp ? requests[i].release : rides[i].release;
  }
  void validate(const MetricSpace& space) const;
};

/// Predicted input: a request set of the same shape as the instance, or (on
/// the half-line) a single predicted makespan.
struct PredictionSet {
  ProblemKind kind = ProblemKind::Tsp;
  std::vector<Request> requests;
  std::vector<RideRequest> rides;
  std::optional<double> makespan_prediction;  // half-line scalar variant

  bool is_scalar() const { return makespan_prediction.has_value(); }
  int count() const {
    return kind == ProblemKind::Tsp ? static_cast<int>(requests.size())
                                    : static_cast<int>(rides.size());
  }
  static PredictionSet perfect(const Instance& inst);
  static PredictionSet scalar(double chat);
};

/// Multiset partition of actual vs predicted requests under exact identity.
/// Index lists refer into the respective request vectors; duplicates are
/// matched one-to-one.
struct ErrorSplit {
  std::vector<int> unexpected;  // indices into actual (R \ R-hat)
  std::vector<int> absent;      // indices into predicted (R-hat \ R)
  std::vector<int> correct;     // indices into actual (R intersect R-hat)
  // one matched predicted index per entry of `correct`, parallel array
  std::vector<int> correct_predicted;
};

ErrorSplit split_errors(const Instance& actual, const PredictionSet& predicted);

/// Max transportation distance over exactly-matching rides; 0 when the
/// intersection is empty.
double max_shared_ride_distance(const MetricSpace& space, const Instance& actual,
                                const PredictionSet& predicted);

}  // namespace covertour
