#include "covertour/cover.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "covertour/tour.hpp"

namespace covertour {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> mask_bits(unsigned mask) {
  std::vector<int> out;
  for (int i = 0; mask; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

std::vector<std::vector<double>> build_tables(int left_count, int right_count,
                                              const CostOracle& oracle) {
  std::vector<std::vector<double>> t(right_count);
  for (int b = 0; b < right_count; ++b) {
    if (oracle.batch) {
      t[b] = oracle.batch(b, left_count);
    } else {
      t[b].assign(1u << left_count, 0.0);
      for (unsigned mask = 1; mask < (1u << left_count); ++mask)
        t[b][mask] = oracle.eval(mask_bits(mask), b);
    }
  }
  return t;
}

}  // namespace

CoverResult solve_cover(int left_count, int right_count, int k, const CostOracle& oracle) {
  if (k < 1) throw std::invalid_argument("cover edge size bound must be positive");
  CoverResult out;
  if (left_count == 0) return out;
  if (right_count == 0) {
    out.cost = kInf;
    return out;
  }
  k = std::min(k, left_count);
  const int cap = oracle.monotone ? kCoverDpCap : kCoverNonMonotoneCap;
  if (left_count > cap)
    throw std::invalid_argument("cover error set exceeds the exact cap of " + std::to_string(cap) +
                                "; use k=1 or reduce the instance");

  auto table = build_tables(left_count, right_count, oracle);

  if (k == 1) {
    // closed form: each left element takes its cheapest anchor
    for (int a = 0; a < left_count; ++a) {
      int best_b = 0;
      for (int b = 1; b < right_count; ++b)
        if (table[b][1u << a] < table[best_b][1u << a]) best_b = b;
      out.edges.push_back({{a}, best_b, table[best_b][1u << a]});
      out.cost += table[best_b][1u << a];
    }
    return out;
  }

  const unsigned full = (1u << left_count) - 1;
  // cheapest anchor per left subset of size <= k
  std::vector<double> best(full + 1, kInf);
  std::vector<int> best_b(full + 1, -1);
  for (unsigned s = 1; s <= full; ++s) {
    if (std::popcount(s) > k) continue;
    for (int b = 0; b < right_count; ++b)
      if (table[b][s] < best[s]) {
        best[s] = table[b][s];
        best_b[s] = b;
      }
  }

  std::vector<double> f(full + 1, kInf);
  std::vector<unsigned> choice(full + 1, 0);
  f[0] = 0.0;
  if (oracle.monotone) {
    // partition DP: an overlapping cover is never cheaper under monotone costs
    for (unsigned t = 1; t <= full; ++t) {
      unsigned low = t & (~t + 1);
      for (unsigned s = t; s; s = (s - 1) & t) {
        if (!(s & low) || best[s] == kInf) continue;
        double c = best[s] + f[t ^ s];
        if (c < f[t]) {
          f[t] = c;
          choice[t] = s;
        }
      }
    }
  } else {
    // edges may reach outside the still-uncovered set; enumerate all of them
    std::vector<std::vector<unsigned>> by_low(left_count);
    for (unsigned s = 1; s <= full; ++s)
      if (best[s] != kInf)
        for (int a = 0; a < left_count; ++a)
          if (s & (1u << a)) by_low[a].push_back(s);
    for (unsigned t = 1; t <= full; ++t) {
      int low = std::countr_zero(t);
      for (unsigned s : by_low[low]) {
        double c = best[s] + f[t & ~s];
        if (c < f[t]) {
          f[t] = c;
          choice[t] = s;
        }
      }
    }
  }

  out.cost = f[full];
  if (out.cost == kInf) return out;
  for (unsigned t = full; t;) {
    unsigned s = choice[t];
    out.edges.push_back({mask_bits(s), best_b[s], best[s]});
    t = oracle.monotone ? (t ^ s) : (t & ~s);
  }
  std::reverse(out.edges.begin(), out.edges.end());
  return out;
}

namespace {

using detail::multiset_difference;

CostOracle tsp_oracle(const MetricSpace& space, const std::vector<Request>& left,
                      const std::vector<Request>& anchors) {
  CostOracle o;
  o.monotone = true;
  o.eval = [&space, left, anchors](const std::vector<int>& sub, int b) {
    std::vector<Request> reqs;
    for (int i : sub) reqs.push_back(left[i]);
    return gamma_tsp(space, reqs, anchors[b]);
  };
  o.batch = [&space, left, anchors](int b, int) {
    return subset_tour_costs(space, left, anchors[b].loc, anchors[b].release);
  };
  return o;
}

CostOracle darp_oracle(const MetricSpace& space, const std::vector<RideRequest>& left,
                       const std::vector<RideRequest>& anchors, double D) {
  CostOracle o;
  o.monotone = true;
  o.eval = [&space, left, anchors, D](const std::vector<int>& sub, int b) {
    std::vector<RideRequest> rides;
    for (int i : sub) rides.push_back(left[i]);
    return gamma_darp(space, rides, anchors[b], D);
  };
  o.batch = [&space, left, anchors, D](int b, int n) {
    const RideRequest& a = anchors[b];
    double len = space.dist(a.pickup, a.dropoff);
    auto t1 = subset_ride_costs(space, left, a.pickup, a.release);
    auto t2 = subset_ride_costs(space, left, a.dropoff, a.release + len);
    std::vector<double> t(1u << n, 0.0);
    for (unsigned m = 1; m < (1u << n); ++m) t[m] = std::min(t1[m], t2[m]) + D;
    return t;
  };
  return o;
}

template <typename T, typename MakeOracle>
CoverResult gamma_k_impl(const std::vector<T>& A, const std::vector<T>& B, int k,
                         MakeOracle&& make) {
  std::vector<int> left_idx = multiset_difference(A, B);
  std::vector<T> left;
  for (int i : left_idx) left.push_back(A[i]);
  CoverResult r = solve_cover(static_cast<int>(left.size()), static_cast<int>(B.size()), k,
                              make(left));
  for (auto& e : r.edges)
    for (int& a : e.left) a = left_idx[a];
  return r;
}

}  // namespace

CoverResult gamma_k(const MetricSpace& space, const std::vector<Request>& A,
                    const std::vector<Request>& B, int k) {
  return gamma_k_impl(A, B, k, [&](const std::vector<Request>& left) {
    return tsp_oracle(space, left, B);
  });
}

CoverResult gamma_k(const MetricSpace& space, const std::vector<RideRequest>& A,
                    const std::vector<RideRequest>& B, int k, double max_shared_distance) {
  return gamma_k_impl(A, B, k, [&](const std::vector<RideRequest>& left) {
    return darp_oracle(space, left, B, max_shared_distance);
  });
}

CoverReport lambda_k(const MetricSpace& space, const Instance& actual,
                     const PredictionSet& predicted, int k) {
  CoverReport rep;
  rep.k = k;
  if (actual.kind == ProblemKind::Tsp) {
    CoverResult fwd = gamma_k(space, predicted.requests, actual.requests, kUnboundedK);
    CoverResult bwd = gamma_k(space, actual.requests, predicted.requests, k);
    rep.gamma_inf_pred = fwd.cost;
    rep.gamma_k_actual = bwd.cost;
    rep.pred_edges = std::move(fwd.edges);
    rep.actual_edges = std::move(bwd.edges);
  } else {
    // D enters only when covering unexpected actual requests
    double D = max_shared_ride_distance(space, actual, predicted);
    CoverResult fwd = gamma_k(space, predicted.rides, actual.rides, kUnboundedK, 0.0);
    CoverResult bwd = gamma_k(space, actual.rides, predicted.rides, k, D);
    rep.gamma_inf_pred = fwd.cost;
    rep.gamma_k_actual = bwd.cost;
    rep.pred_edges = std::move(fwd.edges);
    rep.actual_edges = std::move(bwd.edges);
  }
  rep.lambda_k = rep.gamma_inf_pred + rep.gamma_k_actual;
  return rep;
}

double lambda_halfline(const MetricSpace& space, const Instance& actual, double chat) {
  return std::abs(chat - half_line_optimum(space, actual));
}

double lambda_halfline_cover(const MetricSpace& space, const Instance& actual, double chat) {
  double cstar = half_line_optimum(space, actual);
  // reduced one-request instances; f(x, r) = max(r + x, 2x)
  auto side = [](double left_coord, double right_coord) {
    if (left_coord == right_coord) return 0.0;  // identical pair self-covers
    CostOracle o;
    o.monotone = true;
    o.eval = [=](const std::vector<int>&, int) {
      return std::max(0.0, 2 * left_coord - 2 * right_coord);
    };
    return solve_cover(1, 1, 1, o).cost;
  };
  return side(cstar / 2, chat / 2) + side(chat / 2, cstar / 2);
}

namespace {

// Successive shortest augmenting paths; the matching is min-cost at every
// cardinality, giving the whole (m -> D_m) curve in one sweep.
std::vector<double> matching_curve(const std::vector<std::vector<double>>& cost) {
  const int nA = static_cast<int>(cost.size());
  const int nB = nA ? static_cast<int>(cost[0].size()) : 0;
  const int mmax = std::min(nA, nB);
  std::vector<int> match_a(nA, -1), match_b(nB, -1);
  std::vector<double> curve = {0.0};
  double total = 0.0;
  for (int round = 0; round < mmax; ++round) {
    // Bellman-Ford over the residual graph
    std::vector<double> da(nA, kInf), db(nB, kInf);
    std::vector<int> pa(nA, -1), pb(nB, -1);
    for (int i = 0; i < nA; ++i)
      if (match_a[i] < 0) da[i] = 0.0;
    for (int it = 0; it < nA + nB; ++it) {
      bool changed = false;
      for (int i = 0; i < nA; ++i) {
        if (da[i] == kInf) continue;
        for (int j = 0; j < nB; ++j)
          if (match_a[i] != j && da[i] + cost[i][j] < db[j] - 1e-15) {
            db[j] = da[i] + cost[i][j];
            pb[j] = i;
            changed = true;
          }
      }
      for (int j = 0; j < nB; ++j) {
        if (db[j] == kInf || match_b[j] < 0) continue;
        int i = match_b[j];
        if (db[j] - cost[i][j] < da[i] - 1e-15) {
          da[i] = db[j] - cost[i][j];
          pa[i] = j;
          changed = true;
        }
      }
      if (!changed) break;
    }
    int end = -1;
    for (int j = 0; j < nB; ++j)
      if (match_b[j] < 0 && db[j] < kInf && (end < 0 || db[j] < db[end])) end = j;
    total += db[end];
    for (int j = end; j >= 0;) {
      int i = pb[j];
      int next_j = pa[i];
      match_a[i] = j;
      match_b[j] = i;
      j = next_j;
    }
    curve.push_back(total);
  }
  return curve;
}

}  // namespace

PriorErrors prior_errors(const MetricSpace& space, const Instance& actual,
                         const PredictionSet& predicted) {
  ErrorSplit s = split_errors(actual, predicted);
  PriorErrors out;
  const int nA = actual.count();
  const int nB = predicted.count();
  if (nA > 64 || nB > 64) throw std::invalid_argument("prior-error matching capped at 64 requests");
  out.eta = std::max(nA, nB) - static_cast<int>(s.correct.size());

  std::vector<std::vector<double>> cost(nA, std::vector<double>(nB, 0.0));
  for (int i = 0; i < nA; ++i)
    for (int j = 0; j < nB; ++j)
      cost[i][j] = actual.kind == ProblemKind::Tsp
                       ? space.dist(actual.requests[i].loc, predicted.requests[j].loc)
                       : space.dist(actual.rides[i].pickup, predicted.rides[j].pickup) +
                             space.dist(actual.rides[i].dropoff, predicted.rides[j].dropoff);
  out.curve = matching_curve(cost);
  int mmax = static_cast<int>(out.curve.size()) - 1;
  out.delta = nA + nB - 2 * mmax;
  out.d_matching = out.curve[mmax];
  return out;
}

}  // namespace covertour
