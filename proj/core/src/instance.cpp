#include "covertour/instance.hpp"

#include <algorithm>
#include <stdexcept>

namespace covertour {

void Instance::validate(const MetricSpace& space) const {
  auto check_point = [&](PointId p) {
    if (p < 0 || p >= space.size()) throw std::invalid_argument("request point out of range");
  };
  if (kind == ProblemKind::Tsp) {
    for (const auto& r : requests) {
      check_point(r.loc);
      if (r.release < 0) throw std::invalid_argument("negative release date");
    }
  } else {
    for (const auto& r : rides) {
      check_point(r.pickup);
      check_point(r.dropoff);
      if (r.release < 0) throw std::invalid_argument("negative release date");
    }
  }
}

PredictionSet PredictionSet::perfect(const Instance& inst) {
  PredictionSet p;
  p.kind = inst.kind;
  p.requests = inst.requests;
  p.rides = inst.rides;
  return p;
}

PredictionSet PredictionSet::scalar(double chat) {
  PredictionSet p;
  p.makespan_prediction = chat;
  return p;
}

namespace {

// Greedy one-to-one matching of identical items; indices matched in order.
template <typename T>
ErrorSplit split_impl(const std::vector<T>& actual, const std::vector<T>& predicted) {
  ErrorSplit out;
  std::vector<bool> pred_used(predicted.size(), false);
  for (int i = 0; i < static_cast<int>(actual.size()); ++i) {
    int match = -1;
    for (int j = 0; j < static_cast<int>(predicted.size()); ++j)
      if (!pred_used[j] && predicted[j] == actual[i]) {
        match = j;
        break;
      }
    if (match >= 0) {
      pred_used[match] = true;
      out.correct.push_back(i);
      out.correct_predicted.push_back(match);
    } else {
      out.unexpected.push_back(i);
    }
  }
  for (int j = 0; j < static_cast<int>(predicted.size()); ++j)
    if (!pred_used[j]) out.absent.push_back(j);
  return out;
}

}  // namespace

ErrorSplit split_errors(const Instance& actual, const PredictionSet& predicted) {
  if (predicted.is_scalar())
    throw std::invalid_argument(
        "scalar makespan prediction has no request-set split; use the half-line error path");
  if (predicted.kind != actual.kind)
    throw std::invalid_argument("prediction kind does not match instance kind");
  if (actual.kind == ProblemKind::Tsp) return split_impl(actual.requests, predicted.requests);
  return split_impl(actual.rides, predicted.rides);
}

double max_shared_ride_distance(const MetricSpace& space, const Instance& actual,
                                const PredictionSet& predicted) {
  if (actual.kind != ProblemKind::Darp) return 0.0;
  ErrorSplit s = split_errors(actual, predicted);
  double d = 0.0;  // max over empty intersection pinned to 0
  for (int i : s.correct) d = std::max(d, space.dist(actual.rides[i].pickup, actual.rides[i].dropoff));
  return d;
}

}  // namespace covertour
