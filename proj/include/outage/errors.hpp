#pragma once

// Missed-detection probabilities of the scalar Gaussian MAP test run in each
// area, computed from exact acceptance regions.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "outage/area.hpp"
#include "outage/hypotheses.hpp"

namespace outage {

struct ScalarHypothesis {
  double mu = 0.0;
  double sigma2 = 1.0;
  double log_prior = 0.0;
};

// Earlier entries win exact likelihood ties.
using ScalarHypothesisSet = std::vector<ScalarHypothesis>;

struct Interval {
  double lo;
  double hi;
};

struct AcceptanceRegions {
  std::vector<std::vector<Interval>> regions;  // per hypothesis, disjoint and sorted
};

// Throws InvalidInput for an empty set or sigma2 <= 0, Indistinguishable when
// two entries share mean, variance and prior.
AcceptanceRegions acceptance_regions(const ScalarHypothesisSet& set);

// Probability that N(mu, sigma2) falls inside the intervals.
double gaussian_mass(const std::vector<Interval>& intervals, double mu, double sigma2);

double missed_detection(const ScalarHypothesisSet& set, std::size_t k);
std::vector<double> missed_detection_all(const ScalarHypothesisSet& set);

struct AreaErrorOptions {
  EnumerationLimits limits;
  std::optional<double> prior_rho;
};

// Missed-detection probability of every local hypothesis of the area over
// every flow pattern. Among hypotheses with identical statistics, the one the
// detector prefers keeps the region and the others are never detected.
std::vector<double> area_error_profile(const Tree& tree, const Area& area, const CumulativeStats& stats,
                                       const AreaErrorOptions& options = {});

double area_max_error(const Tree& tree, const Area& area, const CumulativeStats& stats,
                      const AreaErrorOptions& options = {});
double area_min_correct(const Tree& tree, const Area& area, const CumulativeStats& stats,
                        const AreaErrorOptions& options = {});

// Scalar set of the area for one flow pattern, in detector tie-break order,
// together with the hypotheses it was built from.
struct AreaScalarSet {
  std::vector<Hypothesis> hypotheses;
  ScalarHypothesisSet set;
};
AreaScalarSet area_scalar_set(const Tree& tree, const Area& area, const FlowPattern& pattern,
                              const CumulativeStats& stats, const AreaErrorOptions& options = {});

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Draws n samples under hypothesis k and classifies each by the MAP rule.
MonteCarloEstimate monte_carlo_error(const ScalarHypothesisSet& set, std::size_t k, std::size_t n_samples,
                                     std::uint64_t seed);

}  // namespace outage
