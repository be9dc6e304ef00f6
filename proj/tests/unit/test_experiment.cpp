#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "covertour/experiment.hpp"
#include "covertour/svgplot.hpp"
#include "covertour/tour.hpp"

using namespace covertour;

namespace {

ExperimentSpec tiny_spec() {
  ExperimentSpec spec;
  spec.algorithms = {{"replan", {0.0}, "smartstart", SolverKind::Exact, 2.0, true},
                     {"smart_trust", {0.1, 0.5}, "smartstart", SolverKind::Exact, 2.0, true}};
  spec.grid_rows = spec.grid_cols = 4;
  spec.instances = 3;
  spec.requests_per = 4;
  spec.release_horizon = 5.0;
  spec.seed = 21;
  spec.sweep = SweepKind::LocationNoise;
  spec.sweep_values = {0.0, 1.0};
  return spec;
}

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() {
    std::remove(path.c_str());
    std::remove((path + ".timing.csv").c_str());
    std::remove((path + ".summary.csv").c_str());
  }
};

}  // namespace

TEST_CASE("matrix rows are sorted and ratios valid") {
  auto rows = run_matrix(tiny_spec());
  // replan has one (implicit) alpha cell, smart_trust has two
  CHECK(rows.size() == (1 + 2) * 2 * 3);
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    auto ka = std::tuple{a.algo, a.alpha, a.sweep_param, a.instance_id};
    auto kb = std::tuple{b.algo, b.alpha, b.sweep_param, b.instance_id};
    CHECK(ka < kb);
  }
  for (const auto& r : rows) {
    CHECK(r.ratio == doctest::Approx(r.makespan / r.opt_est));
    CHECK(r.ratio >= 1.0 - 1e-9);  // exact opt mode
    REQUIRE(r.lambda1.has_value());
    CHECK(*r.lambda1 >= 0.0);
  }
}

TEST_CASE("matrix is deterministic across thread counts") {
  auto spec = tiny_spec();
  spec.jobs = 1;
  auto serial = run_matrix(spec);
  spec.jobs = 4;
  auto parallel = run_matrix(spec);
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].algo == parallel[i].algo);
    CHECK(serial[i].makespan == parallel[i].makespan);
    CHECK(serial[i].ratio == parallel[i].ratio);
  }
}

TEST_CASE("empty specs are rejected") {
  auto spec = tiny_spec();
  spec.algorithms.clear();
  CHECK_THROWS(run_matrix(spec));
  spec = tiny_spec();
  spec.sweep_values.clear();
  CHECK_THROWS(run_matrix(spec));
}

TEST_CASE("summaries use the normal-approximation interval") {
  std::vector<ResultRow> rows;
  for (double v : {1.0, 2.0, 3.0}) rows.push_back({"a", 0.0, 0.0, 0, v, 1.0, v, {}, 0.0});
  rows.push_back({"a", 0.0, 1.0, 0, 5.0, 1.0, 5.0, {}, 0.0});
  auto cells = summarize(rows);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].mean_ratio == doctest::Approx(2.0));
  CHECK(cells[0].n == 3);
  // sample sd = 1, stderr = 1/sqrt(3)
  CHECK(cells[0].ci_half == doctest::Approx(1.96 / std::sqrt(3.0)));
  CHECK(cells[1].ci_half == 0.0);  // single instance: zero-width whiskers
}

TEST_CASE("csv roundtrip preserves rows") {
  TempFile tmp("test_matrix_roundtrip.csv");
  auto rows = run_matrix(tiny_spec());
  write_matrix_csv(tmp.path, rows);
  auto back = read_matrix_csv(tmp.path);
  REQUIRE(back.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].algo == rows[i].algo);
    CHECK(back[i].makespan == rows[i].makespan);
    CHECK(back[i].ratio == rows[i].ratio);
    CHECK(back[i].lambda1.has_value() == rows[i].lambda1.has_value());
  }
}

TEST_CASE("adversarial constructions match the stated coordinates") {
  auto tr = adversarial("tradeoff", 0.25, 0.1);
  REQUIRE(tr.instance.requests.size() == 2);
  CHECK(tr.space.coord(tr.instance.requests[0].loc) == doctest::Approx(0.0));
  CHECK(tr.instance.requests[0].release == doctest::Approx(0.6));
  CHECK(tr.space.coord(tr.instance.requests[1].loc) == doctest::Approx(1.0));
  CHECK(tr.instance.requests[1].release == doctest::Approx(1.0));
  CHECK_FALSE(tr.prediction.is_scalar());

  auto st = adversarial("smarttrust", 0.5, 1e-3);
  REQUIRE(st.instance.requests.size() == 1);
  CHECK(st.space.coord(st.instance.requests[0].loc) == doctest::Approx(0.126));
  CHECK(st.instance.requests[0].release == doctest::Approx(0.125));
  // the predicted request's fastest tour has length 1
  Instance predicted;
  predicted.requests = st.prediction.requests;
  CHECK(optimal_makespan(st.space, predicted) == doctest::Approx(1.0));

  auto hl = adversarial("algohl", 0.3, 1e-4);
  CHECK(hl.space.is_half_line());
  CHECK(hl.space.coord(hl.instance.requests[0].loc) == doctest::Approx(0.1));
  CHECK(hl.instance.requests[0].release == doctest::Approx(0.1001));
  CHECK(hl.prediction.is_scalar());

  CHECK_THROWS(adversarial("tradeoff", 0.6, 0.1));
  CHECK_THROWS(adversarial("tradeoff", 0.25, 0.9));
  CHECK_THROWS(adversarial("algohl", 0.7, 0.1));
  CHECK_THROWS(adversarial("nope", 0.3, 0.1));
}

TEST_CASE("svg chart contains series, whiskers, legend and axes") {
  std::vector<PlotSeries> series = {
      {"alg_one", {1.0, 2.0, 3.0}, {1.5, 1.2, 1.4}, {0.1, 0.2, 0.1}},
      {"alg_two", {1.0, 2.0, 3.0}, {1.1, 1.05, 1.3}, {0.0, 0.1, 0.2}},
  };
  std::string svg = render_line_chart(series, "noise", "ratio");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("alg_one") != std::string::npos);
  CHECK(svg.find("alg_two") != std::string::npos);
  CHECK(svg.find("noise") != std::string::npos);
  CHECK(svg.find("ratio") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("log scale") == std::string::npos);

  std::vector<PlotSeries> wide = {{"a", {0.01, 1.0, 100.0}, {1, 1, 1}, {0, 0, 0}}};
  CHECK(render_line_chart(wide, "x", "y").find("log scale") != std::string::npos);

  CHECK_THROWS(render_line_chart({}, "x", "y"));
}

TEST_CASE("plotting an empty csv fails") {
  TempFile tmp("test_matrix_empty.csv");
  {
    std::ofstream f(tmp.path);
    f << "algo,alpha,sweep_param,instance_id,makespan,opt_est,ratio,lambda1\n";
  }
  CHECK_THROWS(plot_matrix_csv(tmp.path, "never_written.svg"));
}
