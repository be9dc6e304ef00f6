#include "covertour/tour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace covertour {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Earliest absolute service completion of request i when arriving at time t
// from point `from`, and the point the server ends at.
struct Hop {
  double done;
  PointId end;
};

Hop serve_request(const MetricSpace& space, const Request& r, PointId from, double t) {
  double arrive = t + space.dist(from, r.loc);
  return {std::max(arrive, r.release), r.loc};
}

Hop serve_ride(const MetricSpace& space, const RideRequest& r, PointId from, double t) {
  double pickup = std::max(t + space.dist(from, r.pickup), r.release);
  return {pickup + space.dist(r.pickup, r.dropoff), r.dropoff};
}

PointId end_point(const TourProblem& p, int i) {
  return p.kind == ProblemKind::Tsp ? p.requests[i].loc : p.rides[i].dropoff;
}

Hop serve(const TourProblem& p, int i, PointId from, double t) {
  return p.kind == ProblemKind::Tsp ? serve_request(*p.space, p.requests[i], from, t)
                                    : serve_ride(*p.space, p.rides[i], from, t);
}

// First hop leaves the (possibly virtual) start.
Hop serve_first(const TourProblem& p, int i) {
  if (p.kind == ProblemKind::Tsp) {
    const Request& r = p.requests[i];
    return {std::max(p.start_time + p.dist_from_start(r.loc), r.release), r.loc};
  }
  const RideRequest& r = p.rides[i];
  double pickup = std::max(p.start_time + p.dist_from_start(r.pickup), r.release);
  return {pickup + p.space->dist(r.pickup, r.dropoff), r.dropoff};
}

}  // namespace

Tour exact_tour(const TourProblem& p) {
  const int n = p.count();
  if (n > kExactTourCap) throw std::invalid_argument("exact tour limited to 14 requests");
  Tour out;
  if (n == 0) {
    out.completion = p.start_time + p.dist_from_start(p.terminal);
    return out;
  }

  const int full = (1 << n) - 1;
  // g[mask][last]: earliest time at end_point(last) having served exactly mask
  std::vector<std::vector<double>> g(full + 1, std::vector<double>(n, kInf));
  std::vector<std::vector<int>> parent(full + 1, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i) g[1 << i][i] = serve_first(p, i).done;
  for (int mask = 1; mask <= full; ++mask)
    for (int last = 0; last < n; ++last) {
      if (!(mask & (1 << last)) || g[mask][last] == kInf) continue;
      for (int nxt = 0; nxt < n; ++nxt) {
        if (mask & (1 << nxt)) continue;
        double done = serve(p, nxt, end_point(p, last), g[mask][last]).done;
        int m2 = mask | (1 << nxt);
        if (done < g[m2][nxt]) {
          g[m2][nxt] = done;
          parent[m2][nxt] = last;
        }
      }
    }

  int best_last = 0;
  double best = kInf;
  for (int last = 0; last < n; ++last) {
    double c = g[full][last] + p.space->dist(end_point(p, last), p.terminal);
    if (c < best) {
      best = c;
      best_last = last;
    }
  }
  out.completion = best;

  out.order.resize(n);
  out.service.resize(n);
  int mask = full, last = best_last;
  for (int pos = n - 1; pos >= 0; --pos) {
    out.order[pos] = last;
    out.service[pos] = g[mask][last];
    int prev = parent[mask][last];
    mask ^= 1 << last;
    last = prev;
  }
  return out;
}

namespace {

// Preorder of an MST over m abstract points, rooted at index 0. Edges by
// Kruskal with ties broken on (w, u, v); children visited in index order.
template <typename DistFn>
std::vector<int> mst_preorder(int m, DistFn&& dist) {
  struct E {
    double w;
    int u, v;
  };
  std::vector<E> edges;
  edges.reserve(static_cast<size_t>(m) * (m - 1) / 2);
  for (int u = 0; u < m; ++u)
    for (int v = u + 1; v < m; ++v) edges.push_back({dist(u, v), u, v});
  std::sort(edges.begin(), edges.end(), [](const E& a, const E& b) {
    return std::tie(a.w, a.u, a.v) < std::tie(b.w, b.u, b.v);
  });

  std::vector<int> dsu(m);
  std::iota(dsu.begin(), dsu.end(), 0);
  auto find = [&](int x) {
    while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
    return x;
  };
  std::vector<std::vector<int>> adj(m);
  for (const auto& e : edges) {
    int a = find(e.u), b = find(e.v);
    if (a == b) continue;
    dsu[a] = b;
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  std::vector<int> order;
  order.reserve(m);
  std::vector<bool> seen(m, false);
  std::vector<int> stack = {0};
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    if (seen[u]) continue;
    seen[u] = true;
    order.push_back(u);
    for (auto it = adj[u].rbegin(); it != adj[u].rend(); ++it)
      if (!seen[*it]) stack.push_back(*it);
  }
  return order;
}

}  // namespace

Tour approx_tour(const TourProblem& p, double nu) {
  const int n = p.count();
  Tour out;
  if (n == 0) {
    out.completion = p.start_time + p.dist_from_start(p.terminal);
    return out;
  }
  if (nu != 2.0) throw std::invalid_argument("only the doubling approximation (nu = 2) is provided");

  // Distinct visit points, start first; request indices grouped per point. A
  // virtual start never groups with a request point.
  std::vector<PointId> points = {p.start};
  std::vector<std::vector<int>> at_point(1);
  const size_t match_from = p.start_dist.empty() ? 0 : 1;
  for (int i = 0; i < n; ++i) {
    PointId loc = p.kind == ProblemKind::Tsp ? p.requests[i].loc : p.rides[i].pickup;
    auto it = std::find(points.begin() + match_from, points.end(), loc);
    if (it == points.end()) {
      points.push_back(loc);
      at_point.emplace_back();
      at_point.back().push_back(i);
    } else {
      at_point[it - points.begin()].push_back(i);
    }
  }

  auto d = [&](int a, int b) {
    if (a == 0) return p.dist_from_start(points[b]);
    if (b == 0) return p.dist_from_start(points[a]);
    return p.space->dist(points[a], points[b]);
  };
  std::vector<int> pre = mst_preorder(static_cast<int>(points.size()), d);
  bool first = true;
  PointId cur = p.start;
  double t = p.start_time;
  for (int pi : pre)
    for (int i : at_point[pi]) {
      Hop h = first ? serve_first(p, i) : serve(p, i, cur, t);
      first = false;
      out.order.push_back(i);
      out.service.push_back(h.done);
      cur = h.end;
      t = h.done;
    }
  out.completion = t + p.space->dist(cur, p.terminal);
  return out;
}

double gamma_tsp(const MetricSpace& space, const std::vector<Request>& subset,
                 const Request& anchor) {
  TourProblem p;
  p.space = &space;
  p.kind = ProblemKind::Tsp;
  p.start = anchor.loc;
  p.start_time = anchor.release;
  p.terminal = anchor.loc;
  p.requests = subset;
  return exact_tour(p).completion - anchor.release;
}

double gamma_darp(const MetricSpace& space, const std::vector<RideRequest>& subset,
                  const RideRequest& anchor, double max_shared_distance) {
  if (subset.size() == 1 && subset[0] == anchor) return 0.0;
  TourProblem p;
  p.space = &space;
  p.kind = ProblemKind::Darp;
  p.rides = subset;

  p.start = anchor.pickup;
  p.start_time = anchor.release;
  p.terminal = anchor.pickup;
  double from_pickup = exact_tour(p).completion - p.start_time;

  double ride_len = space.dist(anchor.pickup, anchor.dropoff);
  p.start = anchor.dropoff;
  p.start_time = anchor.release + ride_len;
  p.terminal = anchor.dropoff;
  double from_dropoff = exact_tour(p).completion - p.start_time;

  return std::min(from_pickup, from_dropoff) + max_shared_distance;
}

namespace {

// Held-Karp table over all subsets at once: costs[mask] is the optimal
// relative completion back at the anchor. One DP serves every subset query
// against the same anchor.
template <typename ServeFn, typename EndFn>
std::vector<double> subset_costs_impl(const MetricSpace& space, int n, PointId anchor_loc,
                                      double anchor_time, ServeFn&& do_serve, EndFn&& end_of) {
  if (n > kExactTourCap) throw std::invalid_argument("subset table limited to 14 requests");
  const int full = (1 << n) - 1;
  std::vector<std::vector<double>> g(full + 1, std::vector<double>(std::max(n, 1), kInf));
  for (int i = 0; i < n; ++i) g[1 << i][i] = do_serve(i, anchor_loc, anchor_time);
  for (int mask = 1; mask <= full; ++mask)
    for (int last = 0; last < n; ++last) {
      if (!(mask & (1 << last)) || g[mask][last] == kInf) continue;
      for (int nxt = 0; nxt < n; ++nxt) {
        if (mask & (1 << nxt)) continue;
        double done = do_serve(nxt, end_of(last), g[mask][last]);
        g[mask | (1 << nxt)][nxt] = std::min(g[mask | (1 << nxt)][nxt], done);
      }
    }
  std::vector<double> costs(full + 1, 0.0);
  for (int mask = 1; mask <= full; ++mask) {
    double best = kInf;
    for (int last = 0; last < n; ++last)
      if (mask & (1 << last))
        best = std::min(best, g[mask][last] + space.dist(end_of(last), anchor_loc));
    costs[mask] = best - anchor_time;
  }
  return costs;
}

}  // namespace

std::vector<double> subset_tour_costs(const MetricSpace& space,
                                      const std::vector<Request>& requests,
                                      PointId anchor_loc, double anchor_time) {
  return subset_costs_impl(
      space, static_cast<int>(requests.size()), anchor_loc, anchor_time,
      [&](int i, PointId from, double t) { return serve_request(space, requests[i], from, t).done; },
      [&](int i) { return requests[i].loc; });
}

std::vector<double> subset_ride_costs(const MetricSpace& space,
                                      const std::vector<RideRequest>& rides,
                                      PointId anchor_loc, double anchor_time) {
  return subset_costs_impl(
      space, static_cast<int>(rides.size()), anchor_loc, anchor_time,
      [&](int i, PointId from, double t) { return serve_ride(space, rides[i], from, t).done; },
      [&](int i) { return rides[i].dropoff; });
}

double optimal_makespan(const MetricSpace& space, const Instance& inst) {
  TourProblem p;
  p.space = &space;
  p.kind = inst.kind;
  p.start = space.origin();
  p.start_time = 0.0;
  p.terminal = space.origin();
  p.requests = inst.requests;
  p.rides = inst.rides;
  return exact_tour(p).completion;
}

double half_line_optimum(const MetricSpace& space, const Instance& inst) {
  if (!space.is_half_line()) throw std::invalid_argument("half-line metric required");
  if (inst.kind != ProblemKind::Tsp)
    throw std::invalid_argument("half-line optimum defined for the TSP variant");
  double c = 0.0;
  for (const auto& r : inst.requests) {
    double x = space.coord(r.loc);
    c = std::max(c, std::max(r.release + x, 2 * x));
  }
  return c;
}

}  // namespace covertour
