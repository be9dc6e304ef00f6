#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "covertour/cover.hpp"
#include "covertour/experiment.hpp"
#include "covertour/generate.hpp"
#include "covertour/io.hpp"
#include "covertour/network_oracles.hpp"
#include "covertour/simulator.hpp"
#include "covertour/svgplot.hpp"
#include "covertour/tour.hpp"

namespace {

using namespace covertour;
using nlohmann::json;

struct SpaceArgs {
  std::string graph, matrix, line, half_line;
  int origin = 0;

  void attach(CLI::App* app) {
    auto* g = app->add_option("--graph", graph, "edge-list CSV (header u,v,w)");
    auto* m = app->add_option("--matrix", matrix, "distance matrix CSV");
    auto* l = app->add_option("--line", line, "line coordinates CSV, one per row");
    auto* h = app->add_option("--half-line", half_line, "half-line coordinates CSV");
    g->excludes(m)->excludes(l)->excludes(h);
    m->excludes(l)->excludes(h);
    l->excludes(h);
    app->add_option("--origin", origin, "origin point id (graph/matrix/line)");
  }

  MetricSpace load() const {
    if (!graph.empty()) {
      GraphInput g = read_graph_csv(graph);
      g.origin = origin;
      return metric_closure(g);
    }
    if (!matrix.empty()) return read_matrix_csv(matrix, origin);
    if (!line.empty()) return read_line_csv(line, origin, false);
    if (!half_line.empty()) return read_line_csv(half_line, 0, true);
    throw CLI::ValidationError("one of --graph/--matrix/--line/--half-line is required");
  }
};

struct AlgoArgs {
  std::string algo = "replan";
  double alpha = 0.5;
  std::string sub = "smartstart";
  double nu = 2.0;
  std::string practical = "on";
  bool approx = false;

  void attach(CLI::App* app) {
    app->add_option("--algo", algo,
                    "replan|ignore|smartstart|mrin|predict-replan|delay-trust|"
                    "smart-trust|poly-pr|algohl");
    app->add_option("--alpha", alpha, "trust parameter");
    app->add_option("--sub", sub, "delay-trust subroutine");
    app->add_option("--nu", nu, "tour approximation factor");
    app->add_option("--practical", practical, "on|off: drop known-absent predictions")
        ->check(CLI::IsMember({"on", "off"}));
    app->add_flag("--approx", approx, "use the approximate tour solver");
  }

  AlgoSpec spec() const {
    AlgoSpec s;
    s.algo = algo;
    std::replace(s.algo.begin(), s.algo.end(), '-', '_');
    s.alphas = {alpha};
    s.sub = sub;
    s.solver = approx ? SolverKind::Approx : SolverKind::Exact;
    s.nu = nu;
    s.practical = practical == "on";
    return s;
  }
};

json report_json(const CoverReport& rep) {
  auto edges = [](const std::vector<Hyperedge>& es) {
    json a = json::array();
    for (const auto& e : es) a.push_back({{"left", e.left}, {"right", e.right}, {"cost", e.cost}});
    return a;
  };
  return json{{"gamma_inf_pred", rep.gamma_inf_pred},
              {"gamma_k_actual", rep.gamma_k_actual},
              {"k", rep.k},
              {"lambda_k", rep.lambda_k},
              {"pred_edges", edges(rep.pred_edges)},
              {"actual_edges", edges(rep.actual_edges)}};
}

double opt_estimate(const MetricSpace& space, const Instance& inst, double nu) {
  if (inst.count() <= kExactTourCap) return optimal_makespan(space, inst);
  TourProblem p;
  p.space = &space;
  p.kind = inst.kind;
  p.start = space.origin();
  p.terminal = space.origin();
  p.requests = inst.requests;
  p.rides = inst.rides;
  return approx_tour(p, nu).completion;
}

int cmd_gen(const SpaceArgs& sa, const std::string& kind, int count, int per, double horizon,
            std::uint64_t seed, double sigma_release, double sigma_location, double fraction,
            const std::string& instance_in, const std::string& out) {
  MetricSpace space = sa.load();
  const bool want_pred = sigma_release > 0 || sigma_location > 0 || fraction < 1.0;
  auto predict = [&](const Instance& inst, std::uint64_t s) {
    if (fraction < 1.0) return partial(inst, fraction, s);
    NoiseSpec n;
    n.sigma_release = sigma_release;
    n.sigma_location = sigma_location;
    n.seed = s;
    return perturb(space, inst, n);
  };
  if (!instance_in.empty()) {
    InstanceFile f = read_instance_json(instance_in);
    write_prediction_json(out, predict(f.instance, seed));
    std::cout << "wrote " << out << "\n";
    return 0;
  }
  ProblemKind k = kind == "darp" ? ProblemKind::Darp : ProblemKind::Tsp;
  auto instances = synth_instances(space, k, count, per, horizon, seed);
  for (int i = 0; i < count; ++i) {
    std::string base = count == 1 ? out : out + "." + std::to_string(i);
    write_instance_json(base + ".instance.json", instances[i], space.origin());
    if (want_pred)
      write_prediction_json(base + ".prediction.json", predict(instances[i], seed + 1 + i));
  }
  std::cout << "wrote " << count << " instance file(s) under " << out << "\n";
  return 0;
}

int cmd_simulate(const SpaceArgs& sa, const AlgoArgs& aa, const std::string& instance_path,
                 const std::string& prediction_path, const std::string& trace_path) {
  MetricSpace space = sa.load();
  InstanceFile f = read_instance_json(instance_path);
  f.instance.validate(space);
  PredictionSet pred;
  if (!prediction_path.empty()) pred = read_prediction_json(prediction_path);
  auto policy = make_policy(aa.spec(), aa.alpha, pred);
  Trace tr = run(space, f.instance, *policy);
  double opt = opt_estimate(space, f.instance, aa.nu);
  std::cout << "makespan=" << tr.makespan << "\n";
  std::cout << "opt_est=" << opt << "\n";
  std::cout << "ratio=" << (opt > 0 ? tr.makespan / opt : 1.0) << "\n";
  for (const auto& [t, label] : tr.phase_log) std::cout << "phase " << label << " at t=" << t << "\n";
  if (!trace_path.empty()) {
    write_trace_json(trace_path, tr);
    std::cout << "trace written to " << trace_path << "\n";
  }
  return 0;
}

int cmd_opt(const SpaceArgs& sa, const std::string& instance_path, double nu) {
  MetricSpace space = sa.load();
  InstanceFile f = read_instance_json(instance_path);
  f.instance.validate(space);
  TourProblem p;
  p.space = &space;
  p.kind = f.instance.kind;
  p.start = space.origin();
  p.terminal = space.origin();
  p.requests = f.instance.requests;
  p.rides = f.instance.rides;
  if (f.instance.count() <= kExactTourCap)
    std::cout << "exact=" << exact_tour(p).completion << "\n";
  else
    std::cout << "exact=unavailable (instance above the exact solver cap)\n";
  std::cout << "approx=" << approx_tour(p, nu).completion << "\n";
  return 0;
}

int cmd_error(const SpaceArgs& sa, const std::string& oracle, int k,
              const std::string& instance_path, const std::string& prediction_path,
              const std::string& opening_path) {
  InstanceFile f = read_instance_json(instance_path);
  PredictionSet pred = read_prediction_json(prediction_path);
  CoverReport rep;
  if (oracle == "tsp" || oracle == "darp") {
    MetricSpace space = sa.load();
    f.instance.validate(space);
    rep = lambda_k(space, f.instance, pred, k);
  } else if (oracle == "st" || oracle == "sf") {
    if (sa.graph.empty()) throw CLI::ValidationError("--oracle " + oracle + " needs --graph");
    GraphInput g = read_graph_csv(sa.graph);
    g.origin = sa.origin;
    if (oracle == "st") {
      // terminal multisets ride in the `loc` field of TSP requests
      std::vector<PointId> actual, predicted;
      for (const auto& r : f.instance.requests) actual.push_back(r.loc);
      for (const auto& r : pred.requests) predicted.push_back(r.loc);
      rep = lambda_k_st(g, actual, predicted, k);
    } else {
      // node pairs ride in the pickup/dropoff fields of ride requests
      std::vector<NodePair> actual, predicted;
      for (const auto& r : f.instance.rides) actual.push_back({r.pickup, r.dropoff});
      for (const auto& r : pred.rides) predicted.push_back({r.pickup, r.dropoff});
      rep = lambda_k_sf(g, actual, predicted, k);
    }
  } else if (oracle == "fl") {
    MetricSpace space = sa.load();
    if (opening_path.empty()) throw CLI::ValidationError("--oracle fl needs --opening");
    std::ifstream of(opening_path);
    if (!of) throw CLI::ValidationError("cannot open " + opening_path);
    std::vector<double> opening;
    for (double v; of >> v;) opening.push_back(v);
    std::vector<PointId> actual, predicted;
    for (const auto& r : f.instance.requests) actual.push_back(r.loc);
    for (const auto& r : pred.requests) predicted.push_back(r.loc);
    rep = lambda_k_fl(space, opening, actual, predicted, k);
  } else {
    throw CLI::ValidationError("--oracle must be tsp|darp|st|sf|fl");
  }
  std::cout << report_json(rep).dump(2) << "\n";
  std::cout << "lambda_k=" << rep.lambda_k << "\n";
  return 0;
}

int cmd_matrix(const std::string& config, std::optional<std::uint64_t> seed,
               std::optional<int> jobs, std::string out) {
  ExperimentSpec spec = read_experiment_spec(config);
  if (seed) spec.seed = *seed;
  if (jobs) spec.jobs = *jobs;
  if (!out.empty()) spec.out = out;
  auto rows = run_matrix(spec);
  write_matrix_csv(spec.out, rows);
  std::cout << "wrote " << spec.out << " (" << rows.size() << " rows), " << spec.out
            << ".summary.csv, " << spec.out << ".timing.csv\n";
  return 0;
}

int cmd_adversarial(const std::string& kind, double alpha, double eps, const std::string& out) {
  AdversarialCase c = adversarial(kind, alpha, eps);
  write_instance_json(out + ".instance.json", c.instance, c.space.origin());
  write_prediction_json(out + ".prediction.json", c.prediction);
  std::ofstream sf(out + ".space.csv");
  for (PointId p = 0; p < c.space.size(); ++p) sf << c.space.coord(p) << "\n";
  std::cout << "wrote " << out << ".instance.json, " << out << ".prediction.json and " << out
            << ".space.csv (" << (c.space.is_half_line() ? "half-line" : "line")
            << " coordinates)\n";
  return 0;
}

int cmd_plot(const std::string& csv, const std::string& out) {
  plot_matrix_csv(csv, out);
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online routing with untrusted predictions"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate instances and predictions");
  SpaceArgs gen_space;
  gen_space.attach(gen);
  std::string gen_kind = "tsp", gen_instance, gen_out = "gen";
  int gen_count = 1, gen_per = 8;
  double gen_horizon = 10.0;
  std::uint64_t gen_seed = 1;
  double gen_sr = 0.0, gen_sl = 0.0, gen_fraction = 1.0;
  gen->add_option("--kind", gen_kind)->check(CLI::IsMember({"tsp", "darp"}));
  gen->add_option("--count", gen_count, "number of instances");
  gen->add_option("--requests", gen_per, "requests per instance");
  gen->add_option("--horizon", gen_horizon, "release horizon");
  gen->add_option("--seed", gen_seed);
  gen->add_option("--sigma-release", gen_sr, "release noise std dev");
  gen->add_option("--sigma-location", gen_sl, "location noise std dev");
  gen->add_option("--fraction", gen_fraction, "kept fraction for partial predictions");
  gen->add_option("--instance", gen_instance, "perturb this instance file instead of sampling");
  gen->add_option("--out", gen_out, "output path or prefix");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a policy on an instance");
  SpaceArgs sim_space;
  sim_space.attach(sim);
  AlgoArgs sim_algo;
  sim_algo.attach(sim);
  std::string sim_instance, sim_prediction, sim_trace;
  sim->add_option("--instance", sim_instance)->required();
  sim->add_option("--prediction", sim_prediction);
  sim->add_option("--trace", sim_trace, "write the full trace JSON here");

  // opt
  auto* opt = app.add_subcommand("opt", "offline optimum of an instance");
  SpaceArgs opt_space;
  opt_space.attach(opt);
  std::string opt_instance;
  double opt_nu = 2.0;
  opt->add_option("--instance", opt_instance)->required();
  opt->add_option("--nu", opt_nu);

  // error
  auto* err = app.add_subcommand("error", "cover error between instance and prediction");
  SpaceArgs err_space;
  err_space.attach(err);
  std::string err_oracle = "tsp", err_instance, err_prediction, err_opening;
  int err_k = 1;
  err->add_option("--oracle", err_oracle)->check(CLI::IsMember({"tsp", "darp", "st", "sf", "fl"}));
  err->add_option("--k", err_k, "max left elements per hyperedge (0 = unbounded)");
  err->add_option("--instance", err_instance)->required();
  err->add_option("--prediction", err_prediction)->required();
  err->add_option("--opening", err_opening, "facility opening costs, one float per row");

  // matrix
  auto* mat = app.add_subcommand("matrix", "run an experiment matrix from a JSON config");
  std::string mat_config, mat_out;
  std::optional<std::uint64_t> mat_seed;
  std::optional<int> mat_jobs;
  mat->add_option("--config", mat_config)->required();
  mat->add_option("--seed", mat_seed, "override the config seed");
  mat->add_option("--jobs", mat_jobs, "worker threads");
  mat->add_option("--out", mat_out, "override the output CSV path");

  // adversarial
  auto* adv = app.add_subcommand("adversarial", "lower-bound instance generators");
  std::string adv_kind, adv_out = "adversarial";
  double adv_alpha = 0.25, adv_eps = 1e-3;
  adv->add_option("--kind", adv_kind)->required()->check(
      CLI::IsMember({"tradeoff", "smarttrust", "algohl"}));
  adv->add_option("--alpha", adv_alpha);
  adv->add_option("--eps", adv_eps);
  adv->add_option("--out", adv_out, "output prefix");

  // plot
  auto* plot = app.add_subcommand("plot", "SVG chart from a matrix CSV");
  std::string plot_csv, plot_out = "plot.svg";
  plot->add_option("--csv", plot_csv)->required();
  plot->add_option("--out", plot_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen(gen_space, gen_kind, gen_count, gen_per, gen_horizon, gen_seed, gen_sr,
                     gen_sl, gen_fraction, gen_instance, gen_out);
    if (sim->parsed()) return cmd_simulate(sim_space, sim_algo, sim_instance, sim_prediction, sim_trace);
    if (opt->parsed()) return cmd_opt(opt_space, opt_instance, opt_nu);
    if (err->parsed())
      return cmd_error(err_space, err_oracle, err_k == 0 ? kUnboundedK : err_k, err_instance,
                       err_prediction, err_opening);
    if (mat->parsed()) return cmd_matrix(mat_config, mat_seed, mat_jobs, mat_out);
    if (adv->parsed()) return cmd_adversarial(adv_kind, adv_alpha, adv_eps, adv_out);
    if (plot->parsed()) return cmd_plot(plot_csv, plot_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
