#include <doctest.h>

#include <stdexcept>

#include "covertour/metric.hpp"

using namespace covertour;

TEST_CASE("explicit matrix construction") {
  auto m = MetricSpace::from_matrix({{0, 1}, {1, 0}}, 0);
  CHECK(m.size() == 2);
  CHECK(m.origin() == 0);
  CHECK(m.dist(0, 1) == 1.0);

  CHECK_THROWS_AS(MetricSpace::from_matrix({{0, 1}, {2, 0}}, 0), std::invalid_argument);
  CHECK_THROWS_AS(MetricSpace::from_matrix({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}, 0),
                  std::invalid_argument);
}

TEST_CASE("metric closure of a path graph") {
  GraphInput g;
  g.edges = {{0, 1, 2.0}, {1, 2, 3.0}};
  auto m = metric_closure(g);
  CHECK(m.dist(0, 2) == doctest::Approx(5.0));
}

TEST_CASE("metric closure shortcuts a heavy edge") {
  GraphInput g;
  g.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 5.0}};
  auto m = metric_closure(g);
  CHECK(m.dist(0, 2) == doctest::Approx(2.0));
}

TEST_CASE("single vertex graph") {
  GraphInput g;
  g.node_count = 1;
  auto m = metric_closure(g);
  CHECK(m.size() == 1);
  CHECK(m.dist(0, 0) == 0.0);
}

TEST_CASE("disconnected graph rejected") {
  GraphInput g;
  g.edges = {{0, 1, 1.0}};
  g.node_count = 3;
  CHECK_THROWS(metric_closure(g));
}

TEST_CASE("line spaces") {
  auto m = MetricSpace::line({0, 1, 5}, 0.0);
  CHECK(m.dist(1, 2) == doctest::Approx(4.0));
  CHECK(m.is_line());
  CHECK_FALSE(m.is_half_line());

  auto f = MetricSpace::line({-0.5, 0, 0.3}, 0.0);
  CHECK(f.dist(0, 2) == doctest::Approx(0.8));

  CHECK_THROWS_AS(MetricSpace::half_line({-1.0}), std::invalid_argument);
  auto h = MetricSpace::half_line({0, 2, 7});
  CHECK(h.is_half_line());
  CHECK(h.origin_coord() == 0.0);
}

TEST_CASE("grid graph and axioms") {
  auto m = metric_closure(grid_graph(4, 5));
  CHECK(m.size() == 20);
  CHECK_NOTHROW(m.verify_axioms());
  CHECK(m.diameter() == doctest::Approx(3 + 4));
}
