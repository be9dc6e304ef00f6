#pragma once

#include <utility>
#include <vector>

#include "covertour/cover.hpp"
#include "covertour/metric.hpp"

namespace covertour {

using NodePair = std::pair<PointId, PointId>;

inline constexpr int kSteinerTerminalCap = 10;

/// Optimal Steiner tree cost for `terminals` with root `root`. `space` must
/// be the shortest-path closure of the underlying graph; optimal trees only
/// branch at vertices of the original graph, which the closure preserves.
double gamma_st(const MetricSpace& space, const std::vector<PointId>& terminals, PointId root);

/// Optimal Steiner forest cost for terminal `pairs` when connecting through
/// `free_pair` costs nothing. Exact by minimizing over partitions of the
/// pairs into jointly-connected groups; at most 4 pairs.
double gamma_sf(const GraphInput& g, const std::vector<NodePair>& pairs, NodePair free_pair);

/// Facility-location hyperedge cost: opening cost of `facility` plus the
/// connection cost of every client.
double gamma_fl(const MetricSpace& space, const std::vector<double>& opening,
                const std::vector<PointId>& clients, PointId facility);

/// Refined facility-location k-hyperedge cover: opening costs are refunded
/// for facilities that cover exactly one client. Solved exactly by a DP that
/// assigns each facility a disjoint client block of cost
/// (|U| = 1 ? d : ceil(|U|/k) * f + sum of d).
CoverResult gamma_k_fl(const MetricSpace& space, const std::vector<double>& opening,
                       const std::vector<PointId>& clients,
                       const std::vector<PointId>& facilities, int k);

/// Lambda_k for the network problems: node (or pair) multisets compared with
/// the problem-specific oracle; unbounded edges on the predicted side.
CoverReport lambda_k_st(const GraphInput& g, const std::vector<PointId>& actual,
                        const std::vector<PointId>& predicted, int k);
CoverReport lambda_k_sf(const GraphInput& g, const std::vector<NodePair>& actual,
                        const std::vector<NodePair>& predicted, int k);
CoverReport lambda_k_fl(const MetricSpace& space, const std::vector<double>& opening,
                        const std::vector<PointId>& actual,
                        const std::vector<PointId>& predicted, int k);

}  // namespace covertour
