#include "covertour/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace covertour {

namespace {

using nlohmann::json;

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

std::vector<std::vector<double>> read_csv_rows(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

json position_json(const Position& p) {
  return json{{"a", p.a}, {"b", p.b}, {"from_a", p.from_a}, {"coord", p.coord}};
}

}  // namespace

GraphInput read_graph_csv(const std::string& path) {
  auto f = open_in(path);
  std::string header;
  std::getline(f, header);
  if (header.rfind("u,v,w", 0) != 0)
    throw std::runtime_error("graph CSV must start with the header u,v,w");
  GraphInput g;
  auto rows = read_csv_rows(f);
  for (const auto& r : rows) {
    if (r.size() != 3) throw std::runtime_error("graph CSV rows need exactly u,v,w");
    g.edges.push_back({static_cast<PointId>(r[0]), static_cast<PointId>(r[1]), r[2]});
  }
  return g;
}

MetricSpace read_matrix_csv(const std::string& path, PointId origin) {
  auto f = open_in(path);
  auto rows = read_csv_rows(f);
  return MetricSpace::from_matrix(rows, origin);
}

MetricSpace read_line_csv(const std::string& path, PointId origin, bool half_line) {
  auto f = open_in(path);
  auto rows = read_csv_rows(f);
  std::vector<double> coords;
  for (const auto& r : rows) {
    if (r.size() != 1) throw std::runtime_error("line CSV takes one coordinate per row");
    coords.push_back(r[0]);
  }
  if (half_line) return MetricSpace::half_line(std::move(coords));
  if (origin < 0 || origin >= static_cast<PointId>(coords.size()))
    throw std::runtime_error("line origin index out of range");
  double oc = coords[origin];
  return MetricSpace::line(std::move(coords), oc);
}

InstanceFile read_instance_json(const std::string& path) {
  json j = json::parse(open_in(path));
  InstanceFile out;
  std::string kind = j.at("kind");
  if (kind != "tsp" && kind != "darp") throw std::runtime_error("kind must be tsp or darp");
  out.instance.kind = kind == "tsp" ? ProblemKind::Tsp : ProblemKind::Darp;
  out.origin = j.value("origin", 0);
  for (const auto& r : j.at("requests")) {
    if (out.instance.kind == ProblemKind::Tsp)
      out.instance.requests.push_back({r.at("loc").get<PointId>(), r.at("release").get<double>()});
    else
      out.instance.rides.push_back({r.at("pickup").get<PointId>(), r.at("dropoff").get<PointId>(),
                                    r.at("release").get<double>()});
  }
  return out;
}

void write_instance_json(const std::string& path, const Instance& inst, PointId origin) {
  json j;
  j["kind"] = inst.kind == ProblemKind::Tsp ? "tsp" : "darp";
  j["origin"] = origin;
  j["requests"] = json::array();
  if (inst.kind == ProblemKind::Tsp) {
    for (const auto& r : inst.requests)
      j["requests"].push_back({{"loc", r.loc}, {"release", r.release}});
  } else {
    for (const auto& r : inst.rides)
      j["requests"].push_back(
          {{"pickup", r.pickup}, {"dropoff", r.dropoff}, {"release", r.release}});
  }
  open_out(path) << j.dump(2) << "\n";
}

PredictionSet read_prediction_json(const std::string& path) {
  json j = json::parse(open_in(path));
  PredictionSet out;
  if (j.contains("makespan_prediction")) {
    return PredictionSet::scalar(j.at("makespan_prediction").get<double>());
  }
  std::string kind = j.value("kind", "tsp");
  if (kind != "tsp" && kind != "darp") throw std::runtime_error("kind must be tsp or darp");
  out.kind = kind == "tsp" ? ProblemKind::Tsp : ProblemKind::Darp;
  for (const auto& r : j.at("requests")) {
    if (out.kind == ProblemKind::Tsp)
      out.requests.push_back({r.at("loc").get<PointId>(), r.at("release").get<double>()});
    else
      out.rides.push_back({r.at("pickup").get<PointId>(), r.at("dropoff").get<PointId>(),
                           r.at("release").get<double>()});
  }
  return out;
}

void write_prediction_json(const std::string& path, const PredictionSet& pred) {
  json j;
  if (pred.is_scalar()) {
    j["makespan_prediction"] = *pred.makespan_prediction;
    open_out(path) << j.dump(2) << "\n";
    return;
  }
  j["kind"] = pred.kind == ProblemKind::Tsp ? "tsp" : "darp";
  j["requests"] = json::array();
  if (pred.kind == ProblemKind::Tsp) {
    for (const auto& r : pred.requests)
      j["requests"].push_back({{"loc", r.loc}, {"release", r.release}});
  } else {
    for (const auto& r : pred.rides)
      j["requests"].push_back(
          {{"pickup", r.pickup}, {"dropoff", r.dropoff}, {"release", r.release}});
  }
  open_out(path) << j.dump(2) << "\n";
}

void write_trace_json(const std::string& path, const Trace& trace) {
  json j;
  j["segments"] = json::array();
  for (const auto& s : trace.segments)
    j["segments"].push_back(
        {{"t0", s.t0}, {"t1", s.t1}, {"p0", position_json(s.p0)}, {"p1", position_json(s.p1)}});
  j["service"] = trace.service;
  j["makespan"] = trace.makespan;
  j["phase_log"] = json::array();
  for (const auto& [t, label] : trace.phase_log) j["phase_log"].push_back({{"t", t}, {"label", label}});
  j["decision_log"] = json::array();
  for (const auto& [t, label] : trace.decision_log)
    j["decision_log"].push_back({{"t", t}, {"label", label}});
  open_out(path) << j.dump(2) << "\n";
}

}  // namespace covertour
