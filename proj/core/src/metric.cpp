#include "covertour/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace covertour {

namespace {

constexpr double kRelTol = 1e-9;

bool within_tol(double lhs, double rhs_bound) {
  // lhs <= rhs_bound up to relative tolerance
  double scale = std::max({1.0, std::abs(lhs), std::abs(rhs_bound)});
  return lhs <= rhs_bound + kRelTol * scale;
}

}  // namespace

MetricSpace MetricSpace::from_matrix(const std::vector<std::vector<double>>& d,
                                     PointId origin) {
  int n = static_cast<int>(d.size());
  if (n == 0) throw std::invalid_argument("empty distance matrix");
  MetricSpace m;
  m.n_ = n;
  m.origin_ = origin;
  m.kind_ = Kind::Explicit;
  m.d_.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(d[i].size()) != n)
      throw std::invalid_argument("distance matrix is not square");
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(d[i][j]) || d[i][j] < 0)
        throw std::invalid_argument("distance matrix entries must be finite and non-negative");
      m.d_[i * n + j] = d[i][j];
    }
  }
  if (origin < 0 || origin >= n) throw std::invalid_argument("origin out of range");
  m.verify_axioms();
  return m;
}

MetricSpace MetricSpace::line(std::vector<double> coords, double origin_coord) {
  int n = static_cast<int>(coords.size());
  if (n == 0) throw std::invalid_argument("empty coordinate list");
  int origin = -1;
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(coords[i])) throw std::invalid_argument("non-finite coordinate");
    if (origin < 0 && coords[i] == origin_coord) origin = i;
  }
  if (origin < 0) {
    coords.push_back(origin_coord);
    origin = n;
    ++n;
  }
  MetricSpace m;
  m.n_ = n;
  m.origin_ = origin;
  m.kind_ = Kind::Line;
  m.coords_ = std::move(coords);
  m.d_.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.d_[i * n + j] = std::abs(m.coords_[i] - m.coords_[j]);
  return m;
}

MetricSpace MetricSpace::half_line(std::vector<double> coords) {
  for (double c : coords)
    if (c < 0) throw std::invalid_argument("half-line coordinates must be non-negative");
  MetricSpace m = line(std::move(coords), 0.0);
  m.kind_ = Kind::HalfLine;
  return m;
}

void MetricSpace::verify_axioms() const {
  for (int i = 0; i < n_; ++i) {
    if (dist(i, i) != 0)
      throw std::invalid_argument("identity violated: dist(" + std::to_string(i) + "," +
                                  std::to_string(i) + ") != 0");
    for (int j = i + 1; j < n_; ++j) {
      double scale = std::max(1.0, std::max(dist(i, j), dist(j, i)));
      if (std::abs(dist(i, j) - dist(j, i)) > kRelTol * scale)
        throw std::invalid_argument("symmetry violated at pair (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
    }
  }
  if (n_ > 512) return;  // large imported graphs trust closure correctness
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        if (!within_tol(dist(i, k), dist(i, j) + dist(j, k)))
          throw std::invalid_argument("triangle inequality violated at (" + std::to_string(i) +
                                      "," + std::to_string(j) + "," + std::to_string(k) + ")");
}

double MetricSpace::diameter() const {
  double d = 0;
  for (double x : d_) d = std::max(d, x);
  return d;
}

MetricSpace metric_closure(const GraphInput& g) {
  int n = g.node_count;
  for (const auto& e : g.edges) {
    n = std::max(n, std::max(e.u, e.v) + 1);
    if (e.w <= 0) throw std::invalid_argument("edge weights must be positive");
    if (e.u < 0 || e.v < 0) throw std::invalid_argument("negative node id");
  }
  if (n == 0) throw std::invalid_argument("empty graph");

  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& e : g.edges) {
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }

  MetricSpace m;
  m.n_ = n;
  m.origin_ = g.origin;
  m.kind_ = MetricSpace::Kind::GraphClosure;
  m.d_.assign(static_cast<size_t>(n) * n, 0.0);

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n);
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), inf);
    dist[s] = 0;
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
    pq.push({0.0, s});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (auto [v, w] : adj[u])
        if (d + w < dist[v]) {
          dist[v] = d + w;
          pq.push({dist[v], v});
        }
    }
    for (int t = 0; t < n; ++t) {
      if (dist[t] == inf)
        throw std::invalid_argument("graph disconnected: no path from node " + std::to_string(s) +
                                    " to node " + std::to_string(t));
      m.d_[s * n + t] = dist[t];
    }
  }
  if (m.origin_ < 0 || m.origin_ >= n) throw std::invalid_argument("origin out of range");
  return m;
}

GraphInput grid_graph(int rows, int cols) {
  GraphInput g;
  g.node_count = rows * cols;
  g.origin = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      int id = r * cols + c;
      if (c + 1 < cols) g.edges.push_back({id, id + 1, 1.0});
      if (r + 1 < rows) g.edges.push_back({id, id + cols, 1.0});
    }
  return g;
}

}  // namespace covertour
