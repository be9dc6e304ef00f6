#include "covertour/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "covertour/cover.hpp"
#include "covertour/simulator.hpp"
#include "covertour/tour.hpp"

namespace covertour {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

SolverKind parse_solver(const std::string& s) {
  if (s == "exact") return SolverKind::Exact;
  if (s == "approx") return SolverKind::Approx;
  throw std::invalid_argument("solver must be exact or approx");
}

SweepKind parse_sweep(const std::string& s) {
  if (s == "release_noise") return SweepKind::ReleaseNoise;
  if (s == "location_noise") return SweepKind::LocationNoise;
  if (s == "fraction") return SweepKind::Fraction;
  throw std::invalid_argument("sweep must be release_noise, location_noise or fraction");
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = seed ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xbf58476d1ce4e5b9ULL);
  h ^= h >> 31;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 29;
  return h;
}

PredictionSet sweep_prediction(const MetricSpace& space, const Instance& inst, SweepKind kind,
                               double value, std::uint64_t seed) {
  switch (kind) {
    case SweepKind::ReleaseNoise: {
      NoiseSpec n;
      n.sigma_release = value;
      n.seed = seed;
      return perturb(space, inst, n);
    }
    case SweepKind::LocationNoise: {
      NoiseSpec n;
      n.sigma_location = value;
      n.seed = seed;
      return perturb(space, inst, n);
    }
    case SweepKind::Fraction:
      return partial(inst, value, seed);
  }
  throw std::logic_error("unreachable");
}

double estimate_opt(const MetricSpace& space, const Instance& inst, bool exact) {
  if (exact) return optimal_makespan(space, inst);
  TourProblem p;
  p.space = &space;
  p.kind = inst.kind;
  p.start = space.origin();
  p.terminal = space.origin();
  p.requests = inst.requests;
  p.rides = inst.rides;
  return approx_tour(p).completion;
}

std::optional<double> try_lambda1(const MetricSpace& space, const Instance& inst,
                                  const PredictionSet& pred) {
  if (pred.is_scalar()) {
    if (!space.is_half_line()) return std::nullopt;
    return lambda_halfline(space, inst, *pred.makespan_prediction);
  }
  ErrorSplit split = split_errors(inst, pred);
  if (static_cast<int>(split.unexpected.size()) > kCoverDpCap) return std::nullopt;
  if (static_cast<int>(split.absent.size()) > kCoverDpCap) return std::nullopt;
  return lambda_k(space, inst, pred, 1).lambda_k;
}

bool uses_alpha(const std::string& algo) {
  return algo == "delay_trust" || algo == "smart_trust" || algo == "algohl";
}

struct RowKey {
  bool operator()(const ResultRow& a, const ResultRow& b) const {
    if (a.algo != b.algo) return a.algo < b.algo;
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    if (a.sweep_param != b.sweep_param) return a.sweep_param < b.sweep_param;
    return a.instance_id < b.instance_id;
  }
};

}  // namespace

ExperimentSpec read_experiment_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  json j = json::parse(f);
  ExperimentSpec spec;
  for (const auto& a : j.at("algorithms")) {
    AlgoSpec as;
    as.algo = a.at("algo");
    as.alphas = a.value("alphas", std::vector<double>{0.0});
    as.sub = a.value("sub", std::string("smartstart"));
    as.solver = parse_solver(a.value("solver", std::string("exact")));
    as.nu = a.value("nu", 2.0);
    as.practical = a.value("practical", true);
    if (as.alphas.empty()) throw std::invalid_argument("empty alpha grid for " + as.algo);
    spec.algorithms.push_back(std::move(as));
  }
  spec.space = j.value("space", std::string("grid"));
  spec.grid_rows = j.value("grid_rows", 20);
  spec.grid_cols = j.value("grid_cols", 20);
  spec.halfline_points = j.value("halfline_points", 50);
  spec.halfline_length = j.value("halfline_length", 10.0);
  spec.kind = j.value("kind", std::string("tsp")) == "darp" ? ProblemKind::Darp : ProblemKind::Tsp;
  spec.instances = j.value("instances", 20);
  spec.requests_per = j.value("requests_per", 8);
  spec.release_horizon = j.value("release_horizon", 10.0);
  spec.seed = j.value("seed", std::uint64_t{1});
  spec.sweep = parse_sweep(j.value("sweep", std::string("location_noise")));
  spec.sweep_values = j.at("sweep_values").get<std::vector<double>>();
  spec.exact_opt = j.value("exact_opt", true);
  spec.jobs = j.value("jobs", 1);
  spec.out = j.value("out", std::string("matrix.csv"));
  if (spec.algorithms.empty()) throw std::invalid_argument("no algorithms in the experiment config");
  if (spec.sweep_values.empty()) throw std::invalid_argument("empty sweep grid");
  return spec;
}

MetricSpace experiment_space(const ExperimentSpec& spec) {
  if (spec.space == "grid") return metric_closure(grid_graph(spec.grid_rows, spec.grid_cols));
  if (spec.space == "halfline") {
    std::vector<double> coords(spec.halfline_points);
    for (int i = 0; i < spec.halfline_points; ++i)
      coords[i] = spec.halfline_length * i / std::max(1, spec.halfline_points - 1);
    return MetricSpace::half_line(std::move(coords));
  }
  throw std::invalid_argument("space must be grid or halfline");
}

std::unique_ptr<OnlinePolicy> make_policy(const AlgoSpec& spec, double alpha,
                                          const PredictionSet& pred) {
  const auto& a = spec.algo;
  if (a == "replan") return make_replan(spec.solver, spec.nu);
  if (a == "ignore") return make_ignore(spec.solver, spec.nu);
  if (a == "smartstart") return make_smartstart(spec.solver, spec.nu);
  if (a == "mrin") return make_mrin();
  if (a == "predict_replan")
    return std::make_unique<PredictReplanPolicy>(pred, spec.practical, spec.solver, spec.nu);
  if (a == "poly_pr") return std::make_unique<PolyPredictReplanPolicy>(pred, spec.nu, spec.practical);
  if (a == "smart_trust")
    return std::make_unique<SmartTrustPolicy>(pred, alpha, spec.solver, spec.nu, spec.practical);
  if (a == "delay_trust") {
    std::unique_ptr<OnlinePolicy> sub;
    if (spec.sub == "smartstart")
      sub = make_smartstart(spec.solver, spec.nu);
    else if (spec.sub == "replan")
      sub = make_replan(spec.solver, spec.nu);
    else if (spec.sub == "ignore")
      sub = make_ignore(spec.solver, spec.nu);
    else
      throw std::invalid_argument("unknown subroutine " + spec.sub);
    return std::make_unique<DelayTrustPolicy>(pred, alpha, std::move(sub), spec.solver, spec.nu,
                                              spec.practical);
  }
  if (a == "algohl") {
    if (!pred.is_scalar()) throw std::invalid_argument("algohl takes a scalar prediction");
    return std::make_unique<AlgoHlPolicy>(*pred.makespan_prediction, alpha);
  }
  throw std::invalid_argument("unknown algorithm " + a);
}

std::vector<ResultRow> run_matrix(const ExperimentSpec& spec) {
  if (spec.algorithms.empty()) throw std::invalid_argument("no algorithms in the experiment config");
  if (spec.sweep_values.empty()) throw std::invalid_argument("empty sweep grid");
  const MetricSpace space = experiment_space(spec);
  const std::vector<Instance> instances = synth_instances(
      space, spec.kind, spec.instances, spec.requests_per, spec.release_horizon, spec.seed);

  // opt is per (sweep value, instance) independent of the algorithm
  std::vector<double> opt(spec.instances);
  for (int i = 0; i < spec.instances; ++i) opt[i] = estimate_opt(space, instances[i], spec.exact_opt);

  struct Task {
    const AlgoSpec* algo;
    double alpha;
    int sweep_idx;
    int instance_id;
  };
  std::vector<Task> tasks;
  for (const auto& a : spec.algorithms)
    for (double alpha : (uses_alpha(a.algo) ? a.alphas : std::vector<double>{0.0}))
      for (int s = 0; s < static_cast<int>(spec.sweep_values.size()); ++s)
        for (int i = 0; i < spec.instances; ++i) tasks.push_back({&a, alpha, s, i});

  std::vector<ResultRow> rows(tasks.size());
  std::atomic<size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    for (;;) {
      size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      try {
        const Task& task = tasks[t];
        const Instance& inst = instances[task.instance_id];
        const double value = spec.sweep_values[task.sweep_idx];
        PredictionSet pred = sweep_prediction(space, inst, spec.sweep, value,
                                              mix(spec.seed, task.sweep_idx, task.instance_id));
        auto policy = make_policy(*task.algo, task.alpha, pred);
        auto tic = std::chrono::steady_clock::now();
        Trace tr = run(space, inst, *policy);
        auto toc = std::chrono::steady_clock::now();
        ResultRow& r = rows[t];
        r.algo = task.algo->algo;
        r.alpha = uses_alpha(task.algo->algo) ? task.alpha : 0.0;
        r.sweep_param = value;
        r.instance_id = task.instance_id;
        r.makespan = tr.makespan;
        r.opt_est = opt[task.instance_id];
        r.ratio = r.makespan / r.opt_est;
        r.lambda1 = try_lambda1(space, inst, pred);
        r.runtime_ms = std::chrono::duration<double, std::milli>(toc - tic).count();
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        next.store(tasks.size());
        return;
      }
    }
  };
  int jobs = std::max(1, spec.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (err) std::rethrow_exception(err);
  std::stable_sort(rows.begin(), rows.end(), RowKey{});
  return rows;
}

std::vector<SummaryCell> summarize(const std::vector<ResultRow>& rows) {
  std::vector<ResultRow> sorted = rows;
  std::stable_sort(sorted.begin(), sorted.end(), RowKey{});
  std::vector<SummaryCell> cells;
  size_t i = 0;
  while (i < sorted.size()) {
    size_t j = i;
    double sum = 0.0;
    while (j < sorted.size() && sorted[j].algo == sorted[i].algo &&
           sorted[j].alpha == sorted[i].alpha && sorted[j].sweep_param == sorted[i].sweep_param) {
      sum += sorted[j].ratio;
      ++j;
    }
    SummaryCell c;
    c.algo = sorted[i].algo;
    c.alpha = sorted[i].alpha;
    c.sweep_param = sorted[i].sweep_param;
    c.n = static_cast<int>(j - i);
    c.mean_ratio = sum / c.n;
    if (c.n > 1) {
      double ss = 0.0;
      for (size_t k = i; k < j; ++k) {
        double d = sorted[k].ratio - c.mean_ratio;
        ss += d * d;
      }
      c.ci_half = 1.96 * std::sqrt(ss / (c.n - 1)) / std::sqrt(static_cast<double>(c.n));
    }
    cells.push_back(std::move(c));
    i = j;
  }
  return cells;
}

void write_matrix_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "algo,alpha,sweep_param,instance_id,makespan,opt_est,ratio,lambda1\n";
  for (const auto& r : rows) {
    f << r.algo << ',' << fmt(r.alpha) << ',' << fmt(r.sweep_param) << ',' << r.instance_id << ','
      << fmt(r.makespan) << ',' << fmt(r.opt_est) << ',' << fmt(r.ratio) << ','
      << (r.lambda1 ? fmt(*r.lambda1) : "") << '\n';
  }
  std::ofstream t(path + ".timing.csv");
  if (!t) throw std::runtime_error("cannot write " + path + ".timing.csv");
  t << "algo,alpha,sweep_param,instance_id,runtime_ms\n";
  for (const auto& r : rows)
    t << r.algo << ',' << fmt(r.alpha) << ',' << fmt(r.sweep_param) << ',' << r.instance_id << ','
      << fmt(r.runtime_ms) << '\n';
  std::ofstream s(path + ".summary.csv");
  if (!s) throw std::runtime_error("cannot write " + path + ".summary.csv");
  s << "algo,alpha,sweep_param,n,mean_ratio,ci_half\n";
  for (const auto& c : summarize(rows))
    s << c.algo << ',' << fmt(c.alpha) << ',' << fmt(c.sweep_param) << ',' << c.n << ','
      << fmt(c.mean_ratio) << ',' << fmt(c.ci_half) << '\n';
}

std::vector<ResultRow> read_matrix_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("algo,", 0) != 0)
    throw std::runtime_error("not a matrix CSV: " + path);
  std::vector<ResultRow> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    // a trailing empty lambda1 column drops the last cell
    if (cells.size() == 7) cells.push_back("");
    if (cells.size() != 8) throw std::runtime_error("bad matrix CSV row: " + line);
    ResultRow r;
    r.algo = cells[0];
    r.alpha = std::stod(cells[1]);
    r.sweep_param = std::stod(cells[2]);
    r.instance_id = std::stoi(cells[3]);
    r.makespan = std::stod(cells[4]);
    r.opt_est = std::stod(cells[5]);
    r.ratio = std::stod(cells[6]);
    if (!cells[7].empty()) r.lambda1 = std::stod(cells[7]);
    rows.push_back(std::move(r));
  }
  return rows;
}

AdversarialCase adversarial(const std::string& kind, double alpha, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
  if (kind == "tradeoff") {
    if (alpha <= 0.0 || alpha >= 0.5) throw std::invalid_argument("tradeoff needs alpha in (0, 1/2)");
    if (eps > 1.0 - 2.0 * alpha) throw std::invalid_argument("tradeoff needs eps <= 1 - 2*alpha");
    Instance inst;
    inst.kind = ProblemKind::Tsp;
    inst.requests = {{0, 2.0 * alpha + eps}, {1, 1.0}};
    return {MetricSpace::line({0.0, 1.0}, 0.0), inst, PredictionSet::perfect(inst)};
  }
  if (kind == "smarttrust") {
    if (alpha <= 0.0) throw std::invalid_argument("smarttrust needs alpha > 0");
    Instance inst;
    inst.kind = ProblemKind::Tsp;
    inst.requests = {{2, alpha / 4.0}};
    PredictionSet pred;
    pred.kind = ProblemKind::Tsp;
    pred.requests = {{1, 0.5}};  // its fastest tour has length 1
    return {MetricSpace::line({0.0, -0.5, alpha / 4.0 + eps}, 0.0), inst, pred};
  }
  if (kind == "algohl") {
    if (alpha <= 0.0 || alpha > 0.5)
      throw std::invalid_argument("algohl needs alpha in (0, 1/2]");
    Instance inst;
    inst.kind = ProblemKind::Tsp;
    inst.requests = {{1, alpha / 3.0 + eps}};
    return {MetricSpace::half_line({0.0, alpha / 3.0}), inst, PredictionSet::scalar(1.0)};
  }
  throw std::invalid_argument("kind must be tradeoff, smarttrust or algohl");
}

}  // namespace covertour
