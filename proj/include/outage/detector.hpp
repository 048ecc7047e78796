#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "outage/area.hpp"
#include "outage/hypotheses.hpp"
#include "outage/network.hpp"

namespace outage {

struct Observation {
  std::map<int, double> flows;   // sensor edge -> measured flow
  std::vector<double> forecasts;  // per vertex; empty means the tree's means
};

struct DetectOptions {
  EnumerationLimits limits;  // max_outages applies per area
  std::optional<double> prior_rho;
};

struct AreaDecision {
  int root = 0;
  Hypothesis hypothesis;
  double loglik = 0.0;
  bool pruned = false;  // root sensor reads zero
};

struct Detection {
  Hypothesis global;
  std::vector<AreaDecision> areas;
};

// Flows with magnitude at or below this are treated as zero.
double zero_flow_threshold(const Tree& tree);

// Root flow minus the child sensor flows. Throws InvalidInput on a missing reading.
double effective_measurement(const Area& area, const Observation& obs);

// Decoupled MAP detector: one scalar test per positive-flow area.
Detection detect(const Tree& tree, std::span<const int> sensors, const Observation& obs,
                 const DetectOptions& options = {});

// Joint MAP over every unique hypothesis using the multivariate Gaussian
// likelihood of all positive sensor readings. Reference implementation for
// small trees.
Detection detect_centralized_oracle(const Tree& tree, std::span<const int> sensors,
                                    const Observation& obs, const DetectOptions& options = {});

}  // namespace outage
