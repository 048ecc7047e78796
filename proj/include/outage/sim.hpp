#pragma once

// Synthetic feeders, Monte Carlo outage simulation and parameter sweeps.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "outage/detector.hpp"
#include "outage/forecast.hpp"
#include "outage/placement.hpp"

namespace outage {

struct RandomTreeConfig {
  int max_children = 3;  // per non-root vertex
  double mean_lo = 0.5;  // load means are uniform on [mean_lo, mean_hi]
  double mean_hi = 1.5;
  ForecastModel forecast = ForecastModel::fixed(0.02);
};

// Random recursive tree with n vertices (root included). Vertex 1 hangs off
// the root; every later vertex attaches to a uniformly chosen earlier
// non-root vertex that still has room for a child.
Tree random_tree(int n, const RandomTreeConfig& config, std::uint64_t seed);

// Draws true loads from N(mean, variance) of the tree and reports the exact
// flow at every sensor under the outage `truth`. Forecasts are the tree means.
Observation simulate_outage(const Tree& tree, std::span<const int> sensors, const Hypothesis& truth,
                            std::uint64_t seed);

struct RateEstimate {
  double rate = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

// Fraction of simulated trials in which the detected global hypothesis
// differs from the truth. Trial i uses the seed sequence (seed, i).
RateEstimate empirical_detection_rate(const Tree& tree, std::span<const int> sensors, const Hypothesis& truth,
                                      std::size_t n_trials, std::uint64_t seed, const DetectOptions& options = {},
                                      unsigned threads = 1);

struct SweepConfig {
  int n_vertices = 100;
  RandomTreeConfig tree;
  std::vector<double> kappas{0.01, 0.3};
  std::vector<double> targets{0.05, 0.1, 0.2};
  std::uint64_t seed = 0;
  EnumerationLimits limits = EnumerationLimits::at_most(1);
  TreeActionMode mode = TreeActionMode::greedy;
  unsigned threads = 1;
};

struct SweepPoint {
  double kappa = 0.0;
  double target = 0.0;
  std::size_t n_sensors = 0;  // root edge included
  double density = 0.0;      // n_sensors / |E|
  double mean_error = 0.0;
  double max_error = 0.0;
  std::vector<double> errors;  // every local hypothesis of every area and flow pattern
};

struct SweepResult {
  std::vector<SweepPoint> points;  // kappa-major order
};

// Tree topology and means depend only on the seed; variances follow each kappa.
SweepResult sweep(const SweepConfig& config);

// Placement-wide error distribution for a tree and sensor set.
std::vector<double> placement_error_profile(const Tree& tree, std::span<const int> sensors,
                                            const AreaErrorOptions& options = {});

std::string sweep_csv(const SweepResult& result);

}  // namespace outage
