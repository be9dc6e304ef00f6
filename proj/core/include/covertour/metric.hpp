#pragma once

#include <optional>
#include <string>
#include <vector>

namespace covertour {

using PointId = int;

/// Finite metric space with a distinguished origin. Immutable after
/// construction; safe to share across threads.
class MetricSpace {
 public:
  enum class Kind { Explicit, GraphClosure, Line, HalfLine };

  static MetricSpace from_matrix(const std::vector<std::vector<double>>& d,
                                 PointId origin);
  static MetricSpace line(std::vector<double> coords, double origin_coord);
  static MetricSpace half_line(std::vector<double> coords);

  int size() const { return n_; }
  PointId origin() const { return origin_; }
  Kind kind() const { return kind_; }
  bool is_line() const { return kind_ == Kind::Line || kind_ == Kind::HalfLine; }
  bool is_half_line() const { return kind_ == Kind::HalfLine; }

  double dist(PointId a, PointId b) const { return d_[a * n_ + b]; }
  double coord(PointId p) const { return coords_[p]; }
  double origin_coord() const { return coords_[origin_]; }

  /// Verifies the three metric axioms (O(n^3); relative tolerance 1e-9).
  /// Throws std::invalid_argument naming the first violated axiom.
  void verify_axioms() const;

  /// Diameter (max pairwise distance).
  double diameter() const;

 private:
  friend MetricSpace metric_closure(const struct GraphInput& g);
  MetricSpace() = default;

  int n_ = 0;
  PointId origin_ = 0;
  Kind kind_ = Kind::Explicit;
  std::vector<double> d_;       // n*n row-major
  std::vector<double> coords_;  // line/half-line only
};

struct GraphEdge {
  PointId u;
  PointId v;
  double w;
};

struct GraphInput {
  std::vector<GraphEdge> edges;
  int node_count = 0;  // 0: inferred as max id + 1
  PointId origin = 0;
};

/// Shortest-path completion of a weighted undirected graph.
/// Throws if the graph is disconnected, naming an unreachable pair.
MetricSpace metric_closure(const GraphInput& g);

/// n x n grid with unit edge weights; origin at node 0 (corner).
GraphInput grid_graph(int rows, int cols);

}  // namespace covertour
