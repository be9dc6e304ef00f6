#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "covertour/augmented.hpp"
#include "covertour/classic.hpp"
#include "covertour/generate.hpp"

namespace covertour {

/// One algorithm column of the experiment matrix.
struct AlgoSpec {
  std::string algo;  // replan|ignore|smartstart|mrin|predict_replan|poly_pr|
                     // delay_trust|smart_trust|algohl
  std::vector<double> alphas;  // {0} for the alpha-free algorithms
  std::string sub = "smartstart";
  SolverKind solver = SolverKind::Exact;
  double nu = 2.0;
  bool practical = true;
};

enum class SweepKind { ReleaseNoise, LocationNoise, Fraction };

struct ExperimentSpec {
  std::vector<AlgoSpec> algorithms;
  // instance source: a grid city or a half-line
  std::string space = "grid";  // grid | halfline
  int grid_rows = 20, grid_cols = 20;
  int halfline_points = 50;
  double halfline_length = 10.0;
  ProblemKind kind = ProblemKind::Tsp;
  int instances = 20;
  int requests_per = 8;
  double release_horizon = 10.0;
  std::uint64_t seed = 1;

  SweepKind sweep = SweepKind::LocationNoise;
  std::vector<double> sweep_values;

  bool exact_opt = true;
  int jobs = 1;
  std::string out = "matrix.csv";
};

struct ResultRow {
  std::string algo;
  double alpha = 0.0;
  double sweep_param = 0.0;
  int instance_id = 0;
  double makespan = 0.0;
  double opt_est = 0.0;
  double ratio = 0.0;  // makespan / opt_est
  std::optional<double> lambda1;  // only when within the cover caps
  double runtime_ms = 0.0;
};

struct SummaryCell {
  std::string algo;
  double alpha = 0.0;
  double sweep_param = 0.0;
  double mean_ratio = 0.0;
  double ci_half = 0.0;  // 1.96 * stderr
  int n = 0;
};

ExperimentSpec read_experiment_spec(const std::string& path);

/// Builds the metric space named by the experiment config.
MetricSpace experiment_space(const ExperimentSpec& spec);

/// Policy factory shared by the matrix runner and the CLI. `alpha` is ignored
/// by the alpha-free algorithms; prediction-augmented algorithms take `pred`.
std::unique_ptr<OnlinePolicy> make_policy(const AlgoSpec& spec, double alpha,
                                          const PredictionSet& pred);

/// Runs the full matrix. Rows come back sorted by
/// (algo, alpha, sweep_param, instance_id) regardless of the job count.
std::vector<ResultRow> run_matrix(const ExperimentSpec& spec);

std::vector<SummaryCell> summarize(const std::vector<ResultRow>& rows);

/// Main CSV omits runtime_ms so reruns are byte-identical; timings go to the
/// sidecar `<path>.timing.csv`. The summary lands in `<path>.summary.csv`.
void write_matrix_csv(const std::string& path, const std::vector<ResultRow>& rows);

std::vector<ResultRow> read_matrix_csv(const std::string& path);

/// Lower-bound instances. tradeoff: R = {(0, 2a+e), (1, 1)} on the line with
/// its own perfect prediction, a in (0, 1/2), e <= 1-2a. smarttrust:
/// sigma = (a/4+e, a/4), predicted request (-1/2, 1/2). algohl:
/// sigma = (a/3, a/3+e) on the half-line, scalar prediction 1.
struct AdversarialCase {
  MetricSpace space;
  Instance instance;
  PredictionSet prediction;
};

AdversarialCase adversarial(const std::string& kind, double alpha, double eps);

}  // namespace covertour
