#include "covertour/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace covertour {

namespace rng {

double uniform(std::mt19937_64& g) { return std::ldexp(static_cast<double>(g() >> 11), -53); }

double normal(std::mt19937_64& g, double sigma) {
  if (sigma == 0.0) {
    uniform(g);  // keep the stream aligned across sigma settings
    return 0.0;
  }
  // Acklam's inverse-CDF approximation, |relative error| < 1.15e-9
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  double p = uniform(g);
  // avoid the exact tails of the open interval
  p = std::min(std::max(p, 1e-15), 1.0 - 1e-15);
  const double plow = 0.02425, phigh = 1.0 - plow;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= phigh) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  return sigma * x;
}

}  // namespace rng

namespace {

PointId displaced(const MetricSpace& space, PointId loc, double sigma, std::mt19937_64& g) {
  double draw = std::abs(rng::normal(g, sigma));
  if (sigma == 0.0) return loc;
  PointId best = 0;
  double bestv = std::abs(space.dist(0, loc) - draw);
  for (PointId p = 1; p < space.size(); ++p) {
    double v = std::abs(space.dist(p, loc) - draw);
    if (v < bestv) {
      bestv = v;
      best = p;
    }
  }
  return best;
}

int bounded(std::mt19937_64& g, int n) {
  return std::min(n - 1, static_cast<int>(rng::uniform(g) * n));
}

}  // namespace

PredictionSet perturb(const MetricSpace& space, const Instance& actual, const NoiseSpec& spec) {
  if (spec.sigma_release < 0 || spec.sigma_location < 0)
    throw std::invalid_argument("noise standard deviations must be nonnegative");
  std::mt19937_64 g(spec.seed);
  PredictionSet out;
  out.kind = actual.kind;
  if (actual.kind == ProblemKind::Tsp) {
    for (const auto& r : actual.requests) {
      double rel = std::max(0.0, r.release + rng::normal(g, spec.sigma_release));
      out.requests.push_back({displaced(space, r.loc, spec.sigma_location, g), rel});
    }
  } else {
    for (const auto& r : actual.rides) {
      double rel = std::max(0.0, r.release + rng::normal(g, spec.sigma_release));
      PointId pu = displaced(space, r.pickup, spec.sigma_location, g);
      PointId dr = displaced(space, r.dropoff, spec.sigma_location, g);
      out.rides.push_back({pu, dr, rel});
    }
  }
  return out;
}

PredictionSet partial(const Instance& actual, double fraction, std::uint64_t seed) {
  if (fraction < 0.0 || fraction > 1.0)
    throw std::invalid_argument("fraction must lie in [0, 1]");
  const int n = actual.count();
  const int k = static_cast<int>(std::ceil(fraction * n));
  std::mt19937_64 g(seed);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  // explicit Fisher-Yates so the subset is platform-independent
  for (int i = n - 1; i > 0; --i) std::swap(idx[i], idx[bounded(g, i + 1)]);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  PredictionSet out;
  out.kind = actual.kind;
  for (int i : idx) {
    if (actual.kind == ProblemKind::Tsp)
      out.requests.push_back(actual.requests[i]);
    else
      out.rides.push_back(actual.rides[i]);
  }
  return out;
}

std::vector<Instance> synth_instances(const MetricSpace& space, ProblemKind kind, int count,
                                      int per_instance, double release_horizon,
                                      std::uint64_t seed) {
  if (count < 0 || per_instance < 0) throw std::invalid_argument("counts must be nonnegative");
  if (release_horizon < 0) throw std::invalid_argument("release horizon must be nonnegative");
  std::mt19937_64 g(seed);
  std::vector<Instance> out;
  out.reserve(count);
  for (int c = 0; c < count; ++c) {
    Instance inst;
    inst.kind = kind;
    for (int i = 0; i < per_instance; ++i) {
      if (kind == ProblemKind::Tsp) {
        PointId loc = bounded(g, space.size());
        inst.requests.push_back({loc, rng::uniform(g) * release_horizon});
      } else {
        PointId pu = bounded(g, space.size());
        PointId dr = bounded(g, space.size());
        inst.rides.push_back({pu, dr, rng::uniform(g) * release_horizon});
      }
    }
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace covertour
