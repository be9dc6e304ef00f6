#pragma once

#include <functional>
#include <vector>

#include "covertour/instance.hpp"

namespace covertour {

/// One chosen cover edge: a subset of the left side anchored at one right
/// element.
struct Hyperedge {
  std::vector<int> left;  // indices into the left universe
  int right = -1;         // index into the right universe
  double cost = 0.0;
};

/// Hyperedge cost evaluator. `eval` maps (left subset, right element) to a
/// non-negative cost and must be zero on identical singletons. `batch`, when
/// set, returns costs for every left-subset bitmask of one right element and
/// is used to avoid repeated subset solves.
struct CostOracle {
  std::function<double(const std::vector<int>& left, int right)> eval;
  std::function<std::vector<double>(int right, int left_count)> batch;
  bool monotone = true;
};

struct CoverResult {
  double cost = 0.0;  // +inf when the left side is uncoverable (empty right)
  std::vector<Hyperedge> edges;
};

inline constexpr int kCoverDpCap = 12;
inline constexpr int kCoverNonMonotoneCap = 8;
inline constexpr int kUnboundedK = 1 << 20;  // stands in for k = infinity

/// Minimum-cost k-hyperedge cover of `left_count` elements by edges anchored
/// at one of `right_count` elements, each edge spanning at most k left
/// elements. Assumes identical left/right pairs were already removed.
CoverResult solve_cover(int left_count, int right_count, int k, const CostOracle& oracle);

/// Gamma_k(A, B) for TSP request sets: elements of the multiset intersection
/// are removed first (zero-cost self-cover), the rest solved exactly.
CoverResult gamma_k(const MetricSpace& space, const std::vector<Request>& A,
                    const std::vector<Request>& B, int k);
CoverResult gamma_k(const MetricSpace& space, const std::vector<RideRequest>& A,
                    const std::vector<RideRequest>& B, int k,
                    double max_shared_distance);

struct CoverReport {
  double gamma_inf_pred = 0.0;  // cover of absent predicted, unbounded edges
  double gamma_k_actual = 0.0;  // cover of unexpected actual, edges of size <= k
  int k = 1;
  std::vector<Hyperedge> pred_edges;    // left indices into predicted set
  std::vector<Hyperedge> actual_edges;  // left indices into actual set
  double lambda_k = 0.0;
};

/// Cover error Lambda_k = Gamma_inf(predicted, actual) + Gamma_k(actual,
/// predicted). The oracle is the optimal-subinstance tour cost; for
/// Dial-a-Ride the shared-ride distance D is charged only on the actual side.
CoverReport lambda_k(const MetricSpace& space, const Instance& actual,
                     const PredictionSet& predicted, int k);

/// Scalar-prediction error on the half-line: |chat - C*|.
double lambda_halfline(const MetricSpace& space, const Instance& actual, double chat);

/// Same value obtained through the cover machinery on the reduced one-request
/// instances {(C*/2, 0)} and {(chat/2, 0)} with the additional-cost oracle
/// max{0, max(r1 + x1, 2 x1) - max(r2 + x2, 2 x2)}.
double lambda_halfline_cover(const MetricSpace& space, const Instance& actual, double chat);

struct PriorErrors {
  int eta = 0;                // max{|pred|, |actual|} - |intersection|
  int delta = 0;              // unmatched count at the reported matching size
  double d_matching = 0.0;    // total matched distance at the reported size
  std::vector<double> curve;  // curve[m] = min-cost m-matching on locations
};

/// Comparison error measures: erroneous-request count and the metric error
/// with outliers, exact at every matching cardinality. The reported
/// (delta, d_matching) pair takes the maximum matching size (smallest delta).
PriorErrors prior_errors(const MetricSpace& space, const Instance& actual,
                         const PredictionSet& predicted);

namespace detail {

/// Indices of the multiset A \ B under exact equality; duplicates matched
/// one-to-one in index order.
template <typename T>
std::vector<int> multiset_difference(const std::vector<T>& A, const std::vector<T>& B) {
  std::vector<bool> used(B.size(), false);
  std::vector<int> left;
  for (int i = 0; i < static_cast<int>(A.size()); ++i) {
    bool matched = false;
    for (int j = 0; j < static_cast<int>(B.size()); ++j)
      if (!used[j] && B[j] == A[i]) {
        used[j] = true;
        matched = true;
        break;
      }
    if (!matched) left.push_back(i);
  }
  return left;
}

}  // namespace detail

}  // namespace covertour
