#include <doctest.h>

#include "covertour/instance.hpp"

using namespace covertour;

namespace {

Instance tsp(std::vector<Request> rs) {
  Instance i;
  i.requests = std::move(rs);
  return i;
}

PredictionSet pred_of(std::vector<Request> rs) {
  PredictionSet p;
  p.requests = std::move(rs);
  return p;
}

}  // namespace

TEST_CASE("split_errors on matching multisets") {
  auto split = split_errors(tsp({{3, 1.0}}), pred_of({{3, 1.0}}));
  CHECK(split.unexpected.empty());
  CHECK(split.absent.empty());
  CHECK(split.correct == std::vector<int>{0});
}

TEST_CASE("split_errors on disjoint sets") {
  auto split = split_errors(tsp({{3, 1.0}}), pred_of({{4, 1.0}}));
  CHECK(split.unexpected == std::vector<int>{0});
  CHECK(split.absent == std::vector<int>{0});
  CHECK(split.correct.empty());
}

TEST_CASE("split_errors matches duplicates one-to-one") {
  auto split = split_errors(tsp({{3, 1.0}, {3, 1.0}}), pred_of({{3, 1.0}}));
  CHECK(split.unexpected.size() == 1);
  CHECK(split.absent.empty());
  CHECK(split.correct.size() == 1);
}

TEST_CASE("split_errors cardinality identity") {
  // |unexpected| - |absent| = |R| - |R-hat|
  auto split = split_errors(tsp({{0, 0}, {1, 0}, {2, 3}}), pred_of({{1, 0}, {5, 5}}));
  CHECK(static_cast<int>(split.unexpected.size()) - static_cast<int>(split.absent.size()) == 1);
}

TEST_CASE("shared ride distance") {
  auto space = MetricSpace::line({0, 1, 4}, 0.0);
  Instance a;
  a.kind = ProblemKind::Darp;
  a.rides = {{0, 2, 0.0}, {1, 2, 1.0}};
  PredictionSet p;
  p.kind = ProblemKind::Darp;
  p.rides = {{0, 2, 0.0}};
  CHECK(max_shared_ride_distance(space, a, p) == doctest::Approx(4.0));
  p.rides = {{2, 0, 5.0}};  // no exact match
  CHECK(max_shared_ride_distance(space, a, p) == 0.0);
}

TEST_CASE("instance validation") {
  auto space = MetricSpace::line({0, 1}, 0.0);
  Instance bad;
  bad.requests = {{7, 0.0}};
  CHECK_THROWS(bad.validate(space));
  Instance neg;
  neg.requests = {{1, -1.0}};
  CHECK_THROWS(neg.validate(space));
}
