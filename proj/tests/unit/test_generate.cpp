#include <doctest.h>

#include "covertour/generate.hpp"

using namespace covertour;

TEST_CASE("zero noise reproduces the instance") {
  auto space = metric_closure(grid_graph(4, 4));
  auto inst = synth_instances(space, ProblemKind::Tsp, 1, 8, 5.0, 11)[0];
  NoiseSpec n;
  n.seed = 2;
  auto pred = perturb(space, inst, n);
  CHECK(pred.requests == inst.requests);
}

TEST_CASE("location-only noise keeps releases") {
  auto space = metric_closure(grid_graph(4, 4));
  auto inst = synth_instances(space, ProblemKind::Tsp, 1, 8, 5.0, 11)[0];
  NoiseSpec n;
  n.sigma_location = 2.0;
  n.seed = 3;
  auto pred = perturb(space, inst, n);
  REQUIRE(pred.count() == inst.count());
  for (int i = 0; i < inst.count(); ++i) {
    CHECK(pred.requests[i].release == inst.requests[i].release);
    CHECK(pred.requests[i].loc >= 0);
    CHECK(pred.requests[i].loc < space.size());
  }
}

TEST_CASE("perturb is deterministic and keeps releases non-negative") {
  auto space = metric_closure(grid_graph(4, 4));
  auto inst = synth_instances(space, ProblemKind::Tsp, 1, 10, 2.0, 5)[0];
  NoiseSpec n;
  n.sigma_release = 5.0;
  n.sigma_location = 1.0;
  n.seed = 42;
  auto a = perturb(space, inst, n);
  auto b = perturb(space, inst, n);
  CHECK(a.requests == b.requests);
  for (const auto& r : a.requests) CHECK(r.release >= 0.0);
}

TEST_CASE("perturb handles rides") {
  auto space = metric_closure(grid_graph(4, 4));
  auto inst = synth_instances(space, ProblemKind::Darp, 1, 5, 5.0, 9)[0];
  NoiseSpec n;
  n.sigma_location = 1.0;
  n.seed = 8;
  auto pred = perturb(space, inst, n);
  CHECK(pred.kind == ProblemKind::Darp);
  CHECK(pred.count() == inst.count());
}

TEST_CASE("partial predictions sample the stated fraction") {
  auto space = metric_closure(grid_graph(4, 4));
  auto inst = synth_instances(space, ProblemKind::Tsp, 1, 10, 5.0, 13)[0];
  CHECK(partial(inst, 1.0, 1).requests == inst.requests);
  CHECK(partial(inst, 0.0, 1).count() == 0);
  auto half = partial(inst, 0.5, 1);
  CHECK(half.count() == 5);
  // every sampled request is an actual one
  for (const auto& r : half.requests)
    CHECK(std::count(inst.requests.begin(), inst.requests.end(), r) >= 1);
  CHECK(partial(inst, 0.5, 1).requests == half.requests);
}

TEST_CASE("synthetic instances are deterministic and well-formed") {
  auto space = metric_closure(grid_graph(20, 20));
  auto a = synth_instances(space, ProblemKind::Tsp, 100, 10, 7.0, 77);
  auto b = synth_instances(space, ProblemKind::Tsp, 100, 10, 7.0, 77);
  REQUIRE(a.size() == 100);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].requests == b[i].requests);
    CHECK(a[i].count() == 10);
    for (const auto& r : a[i].requests) {
      CHECK(r.loc >= 0);
      CHECK(r.loc < space.size());
      CHECK(r.release >= 0.0);
      CHECK(r.release <= 7.0);
    }
  }
  auto zero = synth_instances(space, ProblemKind::Tsp, 2, 4, 0.0, 1);
  for (const auto& inst : zero)
    for (const auto& r : inst.requests) CHECK(r.release == 0.0);
}

TEST_CASE("normal draws keep the stream aligned at sigma zero") {
  std::mt19937_64 g1(5), g2(5);
  rng::normal(g1, 0.0);
  rng::normal(g2, 1.0);
  CHECK(rng::uniform(g1) == rng::uniform(g2));
}

TEST_CASE("invalid generator arguments are rejected") {
  auto space = metric_closure(grid_graph(3, 3));
  auto inst = synth_instances(space, ProblemKind::Tsp, 1, 3, 1.0, 2)[0];
  NoiseSpec bad;
  bad.sigma_release = -1.0;
  CHECK_THROWS(perturb(space, inst, bad));
  CHECK_THROWS(partial(inst, 1.5, 0));
}
