#include <doctest.h>

#include <algorithm>

#include "covertour/augmented.hpp"
#include "covertour/cover.hpp"
#include "covertour/simulator.hpp"
#include "covertour/tour.hpp"

using namespace covertour;

namespace {

Instance line_inst(std::vector<Request> rs) {
  Instance i;
  i.requests = std::move(rs);
  return i;
}

PredictionSet pred_of(std::vector<Request> rs) {
  PredictionSet p;
  p.requests = std::move(rs);
  return p;
}

bool logged(const Trace& tr, const std::string& needle) {
  return std::any_of(tr.decision_log.begin(), tr.decision_log.end(),
                     [&](const auto& e) { return e.second.rfind(needle, 0) == 0; });
}

}  // namespace

TEST_CASE("predict_replan with a perfect prediction follows the optimum") {
  auto space = metric_closure(grid_graph(3, 3));
  Instance inst;
  inst.requests = {{4, 0.0}, {8, 1.0}, {6, 2.0}};
  PredictReplanPolicy pol(PredictionSet::perfect(inst));
  Trace tr = run(space, inst, pol);
  CHECK(tr.makespan == doctest::Approx(optimal_makespan(space, inst)));
}

TEST_CASE("predict_replan with an empty prediction degrades to replan") {
  auto space = MetricSpace::line({0, 1}, 0.0);
  PredictReplanPolicy pol(pred_of({}));
  Trace tr = run(space, line_inst({{1, 0.0}}), pol);
  CHECK(tr.makespan == doctest::Approx(2.0));
}

TEST_CASE("predict_replan error dependence on the half-line") {
  auto space = MetricSpace::half_line({0, 4, 5});
  Instance inst = line_inst({{2, 0.0}, {1, 6.0}});  // (5, 0) and (4, 6)
  PredictionSet pred = pred_of({{2, 0.0}});         // only (5, 0) predicted
  double chat = optimal_makespan(space, Instance{ProblemKind::Tsp, pred.requests, {}});
  double g1 = lambda_k(space, inst, pred, 1).gamma_k_actual;
  PredictReplanPolicy pol(pred);
  Trace tr = run(space, inst, pol);
  CHECK(tr.makespan <= chat + 3.0 * g1 + 1e-9);
  CHECK(tr.service[0] <= 5.0 + 1e-9);
}

TEST_CASE("delay_trust on an empty instance ends at zero") {
  auto space = MetricSpace::line({0, 1}, 0.0);
  DelayTrustPolicy pol(pred_of({}), 0.5, make_smartstart());
  Trace tr = run(space, line_inst({}), pol);
  CHECK(tr.makespan == 0.0);
}

TEST_CASE("delay_trust consistency on a small perfect-prediction case") {
  auto space = metric_closure(grid_graph(4, 4));
  Instance inst;
  inst.requests = {{5, 0.0}, {10, 1.0}, {15, 2.0}, {3, 4.0}};
  double cstar = optimal_makespan(space, inst);
  for (double alpha : {0.1, 0.25, 1.0}) {
    DelayTrustPolicy pol(PredictionSet::perfect(inst), alpha, make_smartstart());
    Trace tr = run(space, inst, pol);
    CHECK(tr.makespan <= (1.0 + alpha) * cstar + 1e-9);
    CHECK(pol.chat() == doctest::Approx(cstar));
  }
}

TEST_CASE("delay_trust logs its three phases") {
  auto space = MetricSpace::line({0, 1}, 0.0);
  Instance inst = line_inst({{1, 0.0}});
  DelayTrustPolicy pol(pred_of({{1, 0.0}}), 0.5, make_smartstart());
  Trace tr = run(space, inst, pol);
  std::vector<std::string> phases;
  for (const auto& [t, label] : tr.phase_log) phases.push_back(label);
  CHECK(phases == std::vector<std::string>{"i", "ii", "iii"});
  CHECK(tr.makespan <= 1.5 * 2.0 + 1e-9);
}

TEST_CASE("smart_trust consistency and emptiness") {
  auto space = metric_closure(grid_graph(4, 4));
  Instance inst;
  inst.requests = {{5, 0.0}, {10, 1.0}, {15, 2.0}};
  double cstar = optimal_makespan(space, inst);
  for (double alpha : {0.25, 0.5, 1.0}) {
    SmartTrustPolicy pol(PredictionSet::perfect(inst), alpha);
    Trace tr = run(space, inst, pol);
    CHECK(tr.makespan <= (1.0 + alpha) * cstar + 1e-9);
  }
  SmartTrustPolicy none(pred_of({{1, 0.0}}), 0.5);
  Trace tr = run(space, line_inst({}), none);
  CHECK(tr.makespan == 0.0);
}

TEST_CASE("poly predict_replan follows the approximate tour under perfection") {
  auto space = metric_closure(grid_graph(4, 4));
  Instance inst;
  inst.requests = {{5, 0.0}, {10, 0.0}, {15, 1.0}};
  PolyPredictReplanPolicy pol(PredictionSet::perfect(inst), 2.0);
  Trace tr = run(space, inst, pol);
  CHECK(tr.makespan <= 3.0 * optimal_makespan(space, inst) + 1e-9);
  CHECK(pol.excursions().empty());
}

TEST_CASE("poly predict_replan switches to the fresh tour when cheaper") {
  auto space = MetricSpace::line({0, 10, 0.5}, 0.0);
  Instance inst = line_inst({{1, 0.0}, {2, 1.0}});
  PolyPredictReplanPolicy pol(pred_of({{1, 0.0}}), 2.0);
  Trace tr = run(space, inst, pol);
  REQUIRE(pol.excursions().size() == 1);
  const auto& rec = pol.excursions()[0];
  CHECK(rec.request == 1);
  CHECK(rec.anchor == 0);
  if (!rec.took_t2) CHECK(rec.added <= rec.bound + 1e-9);
  CHECK(logged(tr, rec.took_t2 ? "t2" : "t1"));
}

TEST_CASE("poly predict_replan excursion stays within the 3 gamma bound") {
  auto space = MetricSpace::line({0, 4, 5}, 0.0);
  Instance inst = line_inst({{1, 0.0}, {2, 3.0}});
  PolyPredictReplanPolicy pol(pred_of({{1, 0.0}}), 2.0);
  Trace tr = run(space, inst, pol);
  REQUIRE(pol.excursions().size() == 1);
  const auto& rec = pol.excursions()[0];
  if (!rec.took_t2) CHECK(rec.added <= rec.bound + 1e-9);
  CHECK(tr.makespan >= optimal_makespan(space, inst) - 1e-9);
}

TEST_CASE("algohl with a zero prediction degenerates to mrin") {
  auto space = MetricSpace::half_line({0, 1});
  Instance inst = line_inst({{1, 1.0}});
  AlgoHlPolicy pol(0.0, 0.5);
  Trace tr = run(space, inst, pol);
  CHECK(tr.makespan == doctest::Approx(3.0));
}

TEST_CASE("algohl consistency with a perfect scalar prediction") {
  auto space = MetricSpace::half_line({0, 2, 3});
  Instance inst = line_inst({{2, 1.0}, {1, 0.0}});
  double cstar = optimal_makespan(space, inst);
  for (double alpha : {0.1, 0.3, 0.5}) {
    AlgoHlPolicy pol(cstar, alpha);
    Trace tr = run(space, inst, pol);
    CHECK(tr.makespan <= (1.0 + alpha) * cstar + 1e-9);
  }
  CHECK_THROWS(AlgoHlPolicy(1.0, 0.75));
  CHECK_THROWS(AlgoHlPolicy(-1.0, 0.5));
}

TEST_CASE("darp predict_replan defers recomputation while loaded") {
  auto space = MetricSpace::line({0, 2, 1}, 0.0);
  Instance inst;
  inst.kind = ProblemKind::Darp;
  inst.rides = {{0, 1, 0.0}, {2, 0, 1.0}};  // second ride releases mid-ride
  PredictionSet pred;
  pred.kind = ProblemKind::Darp;
  pred.rides = {{0, 1, 0.0}};
  PredictReplanPolicy pol(pred);
  Trace tr = run(space, inst, pol);
  CHECK(logged(tr, "defer_recompute"));
  CHECK(tr.service[0] == doctest::Approx(2.0));  // the carried ride finishes first
}

TEST_CASE("darp delay_trust blocks rides that cannot return in time") {
  auto space = MetricSpace::line({0, 1}, 0.0);
  Instance inst;
  inst.kind = ProblemKind::Darp;
  inst.rides = {{0, 1, 0.0}, {1, 0, 0.0}};
  PredictionSet pred = PredictionSet::perfect(inst);
  // replan as the subroutine so phase (i) actually issues a ride plan
  DelayTrustPolicy pol(pred, 0.6, make_replan());
  Trace tr = run(space, inst, pol);
  CHECK(logged(tr, "block_ride_"));
  double cstar = optimal_makespan(space, inst);
  CHECK(tr.makespan <= 1.6 * cstar + 1e-9);
}

TEST_CASE("scalar predictions are rejected outside the half-line policies") {
  PredictionSet scalar = PredictionSet::scalar(4.0);
  CHECK_THROWS(PredictReplanPolicy(scalar));
  CHECK_THROWS(SmartTrustPolicy(scalar, 0.5));
  CHECK_THROWS(PolyPredictReplanPolicy(scalar));
}
