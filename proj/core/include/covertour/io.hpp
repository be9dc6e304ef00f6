#pragma once

#include <string>

#include "covertour/instance.hpp"
#include "covertour/simulator.hpp"

namespace covertour {

/// Edge-list CSV with header `u,v,w`, 0-based node ids, undirected.
GraphInput read_graph_csv(const std::string& path);

/// Dense distance matrix, one CSV row of floats per point.
MetricSpace read_matrix_csv(const std::string& path, PointId origin);

/// One coordinate per row; half_line demands nonnegative coords and pins the
/// origin at 0, otherwise the origin is the given point index.
MetricSpace read_line_csv(const std::string& path, PointId origin, bool half_line);

struct InstanceFile {
  Instance instance;
  PointId origin = 0;
};

/// {"kind":"tsp"|"darp","origin":int,"requests":[...]}
InstanceFile read_instance_json(const std::string& path);
void write_instance_json(const std::string& path, const Instance& inst, PointId origin);

/// Same request schema as instances, or {"makespan_prediction": float}.
PredictionSet read_prediction_json(const std::string& path);
void write_prediction_json(const std::string& path, const PredictionSet& pred);

void write_trace_json(const std::string& path, const Trace& trace);

}  // namespace covertour
