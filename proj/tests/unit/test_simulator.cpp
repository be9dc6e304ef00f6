#include <doctest.h>

#include "covertour/classic.hpp"
#include "covertour/simulator.hpp"

using namespace covertour;

namespace {

Instance line_inst(std::vector<Request> rs) {
  Instance i;
  i.requests = std::move(rs);
  return i;
}

}  // namespace

TEST_CASE("traces are contiguous unit-speed paths ending at the origin") {
  auto space = metric_closure(grid_graph(3, 3));
  Instance inst;
  inst.requests = {{4, 0.0}, {8, 1.0}, {2, 3.0}};
  auto pol = make_replan();
  Trace tr = run(space, inst, *pol);
  CHECK_NOTHROW(validate_trace(space, inst, tr));
  CHECK(replay_makespan(tr) == doctest::Approx(tr.makespan));
  for (int i = 0; i < inst.count(); ++i) {
    CHECK(tr.service[i] >= inst.requests[i].release);
    CHECK(tr.service[i] <= tr.makespan);
  }
}

TEST_CASE("empirical ratio of an optimal run is one") {
  auto space = MetricSpace::line({0, 1}, 0.0);
  Instance inst = line_inst({{1, 0.0}});
  auto pol = make_replan();
  Trace tr = run(space, inst, *pol);
  CHECK(empirical_cr(tr, space, inst, true) == doctest::Approx(1.0));

  auto ss = make_smartstart();
  Trace tr2 = run(space, inst, *ss);
  CHECK(empirical_cr(tr2, space, inst, true) == doctest::Approx(2.0));
}

TEST_CASE("end signal fires only at event boundaries at the origin") {
  // one request at the origin released late: the server must idle, not finish
  auto space = MetricSpace::line({0, 1}, 0.0);
  Instance inst = line_inst({{0, 5.0}});
  auto pol = make_replan();
  Trace tr = run(space, inst, *pol);
  CHECK(tr.makespan == doctest::Approx(5.0));
}

TEST_CASE("en-route releases on a line are served in passing") {
  // replan heads to coord 2; the request at 1 releases while passing over it
  auto space = MetricSpace::line({0, 1, 2}, 0.0);
  Instance inst = line_inst({{2, 0.0}, {1, 1.0}});
  auto pol = make_replan();
  Trace tr = run(space, inst, *pol);
  CHECK(tr.service[1] == doctest::Approx(1.0));
  CHECK(tr.makespan == doctest::Approx(4.0));
}

TEST_CASE("plan timeline and boundary violation") {
  auto space = MetricSpace::line({0, 1, 3}, 0.0);
  Instance inst = line_inst({{2, 0.0}});
  Plan plan;
  plan.steps.push_back({PlanStep::Kind::MovePoint, 2, 0.0, 0.0, -1, -1});
  plan.steps.push_back({PlanStep::Kind::Wait, -1, 0.0, 4.0, -1, -1});
  plan.steps.push_back({PlanStep::Kind::MovePoint, 0, 0.0, 0.0, -1, -1});
  Position start;
  start.a = start.b = 0;
  start.coord = 0.0;
  auto legs = plan_timeline(space, inst, start, 0.0, plan);
  REQUIRE(!legs.empty());
  CHECK(legs.back().t0 == doctest::Approx(7.0));  // trailing idle leg start

  auto ends = plan_step_ends(space, inst, start, 0.0, plan);
  REQUIRE(ends.size() == 3);
  CHECK(ends[0] == doctest::Approx(3.0));
  CHECK(ends[1] == doctest::Approx(4.0));
  CHECK(ends[2] == doctest::Approx(7.0));

  // outbound leg has t + d(p(t), o) = 2t, so the bound 5 is crossed at 2.5
  CHECK(earliest_boundary_violation(space, legs, 5.0) == doctest::Approx(2.5));
  // the whole motion keeps t + d <= 7; only the trailing idle crosses 8 at t=8
  CHECK(earliest_boundary_violation(space, legs, 8.0) == doctest::Approx(8.0));
}

TEST_CASE("infeasible ride plans are rejected") {
  auto space = MetricSpace::line({0, 1}, 0.0);
  Instance inst;
  inst.kind = ProblemKind::Darp;
  inst.rides = {{0, 1, 0.0}};
  struct BadPolicy : OnlinePolicy {
    std::string name() const override { return "bad"; }
    void start(Controller& c) override {
      Plan p;
      // dropoff without a pickup
      p.steps.push_back({PlanStep::Kind::Dropoff, 1, 0.0, 0.0, 0, -1});
      c.set_plan(std::move(p));
    }
    void on_release(Controller&, int) override {}
  } bad;
  CHECK_THROWS(run(space, inst, bad));
}
