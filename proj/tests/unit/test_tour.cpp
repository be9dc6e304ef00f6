#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "covertour/generate.hpp"
#include "covertour/tour.hpp"

using namespace covertour;

namespace {

TourProblem line_problem(const MetricSpace& space, std::vector<Request> reqs, double t0 = 0.0) {
  TourProblem p;
  p.space = &space;
  p.start = space.origin();
  p.terminal = space.origin();
  p.start_time = t0;
  p.requests = std::move(reqs);
  return p;
}

// reference: try every service order
double brute_force_tsp(const TourProblem& p) {
  const int n = p.count();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  double best = p.start_time + p.dist_from_start(p.terminal);
  if (n == 0) return best;
  best = 1e300;
  do {
    double t = p.start_time;
    PointId at = -1;
    for (int idx = 0; idx < n; ++idx) {
      const Request& r = p.requests[order[idx]];
      t += idx == 0 ? p.dist_from_start(r.loc) : p.space->dist(at, r.loc);
      t = std::max(t, r.release);
      at = r.loc;
    }
    t += p.space->dist(at, p.terminal);
    best = std::min(best, t);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace

TEST_CASE("exact tour picks the release-aware order") {
  auto space = MetricSpace::line({0, 1, 2}, 0.0);
  auto p = line_problem(space, {{2, 0.0}, {1, 3.0}});
  Tour t = exact_tour(p);
  CHECK(t.completion == doctest::Approx(4.0));
  CHECK(t.order == std::vector<int>{0, 1});
}

TEST_CASE("exact tour degenerate cases") {
  auto space = MetricSpace::line({0, 3}, 0.0);
  auto empty = line_problem(space, {}, 5.0);
  CHECK(exact_tour(empty).completion == doctest::Approx(5.0));

  auto single = line_problem(space, {{1, 0.0}});
  CHECK(exact_tour(single).completion == doctest::Approx(6.0));
}

TEST_CASE("half-line single request closed form") {
  auto space = MetricSpace::half_line({0, 2, 6});
  for (double r : {0.0, 1.0, 5.0, 9.0}) {
    Instance inst;
    inst.requests = {{2, r}};
    double cstar = optimal_makespan(space, inst);
    CHECK(cstar == doctest::Approx(std::max(r + 6.0, 12.0)));
    CHECK(half_line_optimum(space, inst) == doctest::Approx(cstar));
  }
}

TEST_CASE("exact tour equals brute force on random instances") {
  auto space = metric_closure(grid_graph(4, 4));
  auto instances = synth_instances(space, ProblemKind::Tsp, 60, 6, 8.0, 17);
  for (const auto& inst : instances) {
    auto p = line_problem(space, inst.requests);
    p.start = space.origin();
    CHECK(exact_tour(p).completion == doctest::Approx(brute_force_tsp(p)).epsilon(1e-12));
  }
  // and a few larger ones at the permutation-oracle cap
  for (auto& inst : synth_instances(space, ProblemKind::Tsp, 5, 8, 8.0, 23)) {
    auto p = line_problem(space, inst.requests);
    CHECK(exact_tour(p).completion == doctest::Approx(brute_force_tsp(p)).epsilon(1e-12));
  }
}

TEST_CASE("approx tour waits at early arrivals") {
  auto space = MetricSpace::line({0, 3}, 0.0);
  auto single = line_problem(space, {{1, 0.0}});
  CHECK(approx_tour(single).completion == doctest::Approx(6.0));

  // co-located requests, start on their point, terminal the same point
  TourProblem co;
  co.space = &space;
  co.start = 1;
  co.terminal = 1;
  co.requests = {{1, 0.0}, {1, 1.0}, {1, 2.0}, {1, 3.0}};
  CHECK(approx_tour(co).completion == doctest::Approx(3.0));
}

TEST_CASE("approx tour within the (1+nu) factor") {
  auto space = metric_closure(grid_graph(5, 5));
  for (auto& inst : synth_instances(space, ProblemKind::Tsp, 100, 10, 10.0, 99)) {
    auto p = line_problem(space, inst.requests);
    double exact = brute_force_tsp(p);
    double approx = approx_tour(p, 2.0).completion;
    CHECK(approx <= 3.0 * exact + 1e-9);
    CHECK(approx + 1e-9 >= exact);
  }
}

TEST_CASE("virtual start distances override the start point") {
  auto space = MetricSpace::line({0, 2, 4}, 0.0);
  TourProblem p = line_problem(space, {{2, 0.0}});
  // server halfway between coords 0 and 2, i.e. at 1
  p.start_dist = {1.0, 1.0, 3.0};
  CHECK(exact_tour(p).completion == doctest::Approx(3.0 + 4.0));
  CHECK(approx_tour(p).completion == doctest::Approx(3.0 + 4.0));
}

TEST_CASE("gamma_tsp oracle values") {
  auto space = MetricSpace::half_line({0, 4, 5});
  CHECK(gamma_tsp(space, {{2, 0.0}}, {1, 0.0}) == doctest::Approx(2.0));
  CHECK(gamma_tsp(space, {{1, 0.0}}, {1, 0.0}) == 0.0);
  // late release: wait dominates, cost = (r - anchor.release) + d
  CHECK(gamma_tsp(space, {{2, 10.0}}, {1, 0.0}) == doctest::Approx(10.0 + 1.0));
}

TEST_CASE("gamma_darp oracle values") {
  auto space = MetricSpace::line({0, 2, 3}, 0.0);
  RideRequest anchor{0, 1, 0.0};  // ride 0 -> 2 in coordinates
  CHECK(gamma_darp(space, {anchor}, anchor, 0.0) == 0.0);
  CHECK(gamma_darp(space, {}, anchor, 2.0) == doctest::Approx(2.0));

  RideRequest other{1, 2, 0.0};  // ride 2 -> 3
  // branch 1: from pickup coord 0 at the release; branch 2: from dropoff
  // coord 2 after the ride. The cheaper branch serves from 2 at cost 2.
  CHECK(gamma_darp(space, {other}, anchor, 0.0) == doctest::Approx(2.0));
}

TEST_CASE("exact tour rejects oversized instances") {
  auto space = metric_closure(grid_graph(5, 5));
  auto inst = synth_instances(space, ProblemKind::Tsp, 1, kExactTourCap + 1, 5.0, 3)[0];
  auto p = line_problem(space, inst.requests);
  CHECK_THROWS(exact_tour(p));
}
