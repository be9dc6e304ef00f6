#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "covertour/instance.hpp"

namespace covertour {

struct NoiseSpec {
  double sigma_release = 0.0;  // std dev of Gaussian release noise, >= 0
  double sigma_location = 0.0; // std dev of the location displacement draw, >= 0
  double fraction = 1.0;       // kept fraction for partial predictions
  std::uint64_t seed = 0;
};

namespace rng {

/// Uniform in [0, 1) from the top 53 bits; identical across platforms.
double uniform(std::mt19937_64& g);

/// N(0, sigma) via the inverse CDF (Acklam's rational approximation), so the
/// stream is reproducible without relying on library distributions.
double normal(std::mt19937_64& g, double sigma);

}  // namespace rng

/// Gaussian-noised prediction: releases get additive noise clamped at 0;
/// locations move to the point whose distance from the true location is
/// closest to the absolute value of a fresh draw (ties to the lowest id).
PredictionSet perturb(const MetricSpace& space, const Instance& actual, const NoiseSpec& spec);

/// Uniform subset of ceil(fraction * |R|) requests, unchanged otherwise.
PredictionSet partial(const Instance& actual, double fraction, std::uint64_t seed);

/// Synthetic instances: uniform locations over the space, uniform releases in
/// [0, release_horizon].
std::vector<Instance> synth_instances(const MetricSpace& space, ProblemKind kind, int count,
                                      int per_instance, double release_horizon,
                                      std::uint64_t seed);

}  // namespace covertour
