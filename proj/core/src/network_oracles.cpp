#include "covertour/network_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace covertour {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dreyfus-Wagner over a closure distance function. Returns dp with
// dp[mask][v] = optimal Steiner tree cost spanning terminals(mask) + {v}.
std::vector<std::vector<double>> dreyfus_wagner(int n, const std::function<double(int, int)>& d,
                                                const std::vector<PointId>& terms) {
  const int t = static_cast<int>(terms.size());
  if (t > kSteinerTerminalCap) throw std::invalid_argument("Steiner solver capped at 10 terminals");
  std::vector<std::vector<double>> dp(1u << t, std::vector<double>(n, 0.0));
  for (int i = 0; i < t; ++i)
    for (int v = 0; v < n; ++v) dp[1u << i][v] = d(terms[i], v);
  for (unsigned mask = 1; mask < (1u << t); ++mask) {
    if ((mask & (mask - 1)) == 0) continue;
    auto& cur = dp[mask];
    std::fill(cur.begin(), cur.end(), kInf);
    for (unsigned sub = (mask - 1) & mask; sub > (mask ^ sub); sub = (sub - 1) & mask)
      for (int v = 0; v < n; ++v) cur[v] = std::min(cur[v], dp[sub][v] + dp[mask ^ sub][v]);
    // closure distances collapse the relax step to one pass
    std::vector<double> merged = cur;
    for (int v = 0; v < n; ++v)
      for (int u = 0; u < n; ++u) cur[v] = std::min(cur[v], merged[u] + d(u, v));
  }
  return dp;
}

std::vector<std::vector<double>> closure_matrix(const GraphInput& g) {
  MetricSpace m = metric_closure(g);
  std::vector<std::vector<double>> d(m.size(), std::vector<double>(m.size()));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) d[i][j] = m.dist(i, j);
  return d;
}

}  // namespace

double gamma_st(const MetricSpace& space, const std::vector<PointId>& terminals, PointId root) {
  if (terminals.empty()) return 0.0;
  auto dp = dreyfus_wagner(space.size(), [&](int a, int b) { return space.dist(a, b); },
                           terminals);
  return dp.back()[root];
}

double gamma_sf(const GraphInput& g, const std::vector<NodePair>& pairs, NodePair free_pair) {
  if (pairs.empty()) return 0.0;
  if (pairs.size() > 4) throw std::invalid_argument("Steiner forest solver capped at 4 pairs");

  auto base = closure_matrix(g);
  const int n = static_cast<int>(base.size());
  auto [fs, ft] = free_pair;
  if (fs < 0 || fs >= n || ft < 0 || ft >= n)
    throw std::invalid_argument("free pair node out of range");
  auto d = [&](int a, int b) { return base[a][b]; };
  auto tree = [&](std::vector<PointId> terms) {
    PointId root = terms.back();
    terms.pop_back();
    return dreyfus_wagner(n, d, terms).back()[root];
  };
  // the free pair's own optimal tree (its shortest path) costs nothing extra
  const double free_tree = base[fs][ft];

  const int p = static_cast<int>(pairs.size());
  // minimum over partitions of the pairs, each group joined by one tree; at
  // most one group additionally absorbs the free pair, paying only the
  // increase over the free tree (groups that would share it can merge first)
  std::vector<int> group(p, -1);
  double best = kInf;
  std::function<void(int, int)> rec = [&](int i, int groups) {
    if (i == p) {
      std::vector<double> own(groups), joined(groups);
      for (int gi = 0; gi < groups; ++gi) {
        std::vector<PointId> terms;
        for (int j = 0; j < p; ++j)
          if (group[j] == gi) {
            terms.push_back(pairs[j].first);
            terms.push_back(pairs[j].second);
          }
        own[gi] = tree(terms);
        terms.push_back(fs);
        terms.push_back(ft);
        joined[gi] = tree(terms) - free_tree;
      }
      double total = 0.0;
      for (int gi = 0; gi < groups; ++gi) total += own[gi];
      best = std::min(best, total);
      for (int gi = 0; gi < groups; ++gi)
        best = std::min(best, total - own[gi] + joined[gi]);
      return;
    }
    for (int gi = 0; gi <= groups; ++gi) {
      group[i] = gi;
      rec(i + 1, std::max(groups, gi + 1));
    }
    group[i] = -1;
  };
  rec(0, 0);
  return best;
}

double gamma_fl(const MetricSpace& space, const std::vector<double>& opening,
                const std::vector<PointId>& clients, PointId facility) {
  double c = opening.at(facility);
  for (PointId r : clients) c += space.dist(facility, r);
  return c;
}

CoverResult gamma_k_fl(const MetricSpace& space, const std::vector<double>& opening,
                       const std::vector<PointId>& clients,
                       const std::vector<PointId>& facilities, int k) {
  if (k < 1) throw std::invalid_argument("cover edge size bound must be positive");
  CoverResult out;
  const int n = static_cast<int>(clients.size());
  const int nB = static_cast<int>(facilities.size());
  if (n == 0) return out;
  if (nB == 0) {
    out.cost = kInf;
    return out;
  }
  if (n > kCoverDpCap) throw std::invalid_argument("cover error set exceeds the exact cap of 12");
  k = std::min(k, n);

  const unsigned full = (1u << n) - 1;
  // block cost for facility b covering exactly U: opening paid once per edge
  // of <= k clients, refunded when |U| = 1
  auto block = [&](int b, unsigned u) {
    double dsum = 0.0;
    int cnt = 0;
    for (int i = 0; i < n; ++i)
      if (u & (1u << i)) {
        dsum += space.dist(facilities[b], clients[i]);
        ++cnt;
      }
    if (cnt == 1) return dsum;
    return static_cast<double>((cnt + k - 1) / k) * opening.at(facilities[b]) + dsum;
  };

  // g[b][T]: cheapest cover of T using only the first b facilities, each with
  // at most one disjoint client block; choice is only set on improvement
  std::vector<std::vector<double>> g(nB + 1, std::vector<double>(full + 1, kInf));
  std::vector<std::vector<unsigned>> choice(nB + 1, std::vector<unsigned>(full + 1, 0));
  g[0][0] = 0.0;
  for (int b = 1; b <= nB; ++b) {
    g[b] = g[b - 1];
    for (unsigned t = 1; t <= full; ++t)
      for (unsigned u = t; u; u = (u - 1) & t) {
        if (g[b - 1][t ^ u] == kInf) continue;
        double c = g[b - 1][t ^ u] + block(b - 1, u);
        if (c < g[b][t]) {
          g[b][t] = c;
          choice[b][t] = u;
        }
      }
  }

  out.cost = g[nB][full];
  if (out.cost == kInf) return out;
  unsigned t = full;
  for (int b = nB; b >= 1 && t; --b) {
    unsigned u = choice[b][t];
    if (u == 0) continue;  // facility b left unused for this residual set
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (u & (1u << i)) members.push_back(i);
    for (size_t s = 0; s < members.size(); s += k) {
      Hyperedge e;
      double dsum = 0.0;
      for (size_t j = s; j < std::min(members.size(), s + static_cast<size_t>(k)); ++j) {
        e.left.push_back(members[j]);
        dsum += space.dist(facilities[b - 1], clients[members[j]]);
      }
      e.right = b - 1;
      e.cost = members.size() == 1 ? dsum : opening.at(facilities[b - 1]) + dsum;
      out.edges.push_back(e);
    }
    t ^= u;
  }
  std::reverse(out.edges.begin(), out.edges.end());
  return out;
}

namespace {

template <typename T, typename Solve>
CoverReport network_report(const std::vector<T>& actual, const std::vector<T>& predicted, int k,
                           Solve&& solve) {
  CoverReport rep;
  rep.k = k;
  auto one_side = [&](const std::vector<T>& A, const std::vector<T>& B, int kk) {
    std::vector<int> idx = detail::multiset_difference(A, B);
    std::vector<T> left;
    for (int i : idx) left.push_back(A[i]);
    CoverResult r = solve(left, B, kk);
    for (auto& e : r.edges)
      for (int& a : e.left) a = idx[a];
    return r;
  };
  CoverResult fwd = one_side(predicted, actual, kUnboundedK);
  CoverResult bwd = one_side(actual, predicted, k);
  rep.gamma_inf_pred = fwd.cost;
  rep.gamma_k_actual = bwd.cost;
  rep.pred_edges = std::move(fwd.edges);
  rep.actual_edges = std::move(bwd.edges);
  rep.lambda_k = rep.gamma_inf_pred + rep.gamma_k_actual;
  return rep;
}

}  // namespace

CoverReport lambda_k_st(const GraphInput& g, const std::vector<PointId>& actual,
                        const std::vector<PointId>& predicted, int k) {
  MetricSpace closure = metric_closure(g);
  return network_report(actual, predicted, k,
                        [&](const std::vector<PointId>& left, const std::vector<PointId>& right,
                            int kk) {
                          CostOracle o;
                          o.monotone = true;
                          // one solver pass tabulates every (subset, anchor) at once
                          auto dp = left.empty()
                                        ? std::vector<std::vector<double>>()
                                        : dreyfus_wagner(
                                              closure.size(),
                                              [&](int a, int b) { return closure.dist(a, b); },
                                              left);
                          o.batch = [dp, &right](int b, int) {
                            std::vector<double> col(dp.size());
                            for (size_t m = 0; m < dp.size(); ++m) col[m] = dp[m][right[b]];
                            if (!col.empty()) col[0] = 0.0;
                            return col;
                          };
                          o.eval = [&](const std::vector<int>& sub, int b) {
                            std::vector<PointId> terms;
                            for (int i : sub) terms.push_back(left[i]);
                            return gamma_st(closure, terms, right[b]);
                          };
                          return solve_cover(static_cast<int>(left.size()),
                                             static_cast<int>(right.size()), kk, o);
                        });
}

CoverReport lambda_k_sf(const GraphInput& g, const std::vector<NodePair>& actual,
                        const std::vector<NodePair>& predicted, int k) {
  return network_report(actual, predicted, k,
                        [&](const std::vector<NodePair>& left, const std::vector<NodePair>& right,
                            int kk) {
                          CostOracle o;
                          o.monotone = true;
                          o.eval = [&g, left, right](const std::vector<int>& sub, int b) {
                            std::vector<NodePair> pairs;
                            for (int i : sub) pairs.push_back(left[i]);
                            return gamma_sf(g, pairs, right[b]);
                          };
                          return solve_cover(static_cast<int>(left.size()),
                                             static_cast<int>(right.size()), kk, o);
                        });
}

CoverReport lambda_k_fl(const MetricSpace& space, const std::vector<double>& opening,
                        const std::vector<PointId>& actual,
                        const std::vector<PointId>& predicted, int k) {
  return network_report(actual, predicted, k,
                        [&](const std::vector<PointId>& left, const std::vector<PointId>& right,
                            int kk) { return gamma_k_fl(space, opening, left, right, kk); });
}

}  // namespace covertour
