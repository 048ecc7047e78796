#pragma once

// Bottom-up sensor placement meeting a per-area missed-detection target, and
// a bisection on the target for a fixed sensor budget.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "outage/errors.hpp"
#include "outage/network.hpp"

namespace outage {

enum class TreeActionMode { greedy, optimal };

struct PlacementConfig {
  double target = 0.1;
  EnumerationLimits limits;
  std::optional<double> prior_rho;
  TreeActionMode mode = TreeActionMode::greedy;
  double tolerance = 1e-4;       // bisection tolerance on the target
  std::size_t max_scenarios = 100000;  // optimal mode
};

struct AreaError {
  int root = 0;
  double error = 0.0;
};

struct Placement {
  std::vector<int> sensors;  // sorted, root edge included
  std::vector<AreaError> areas;
  double target = 0.0;
  TreeActionMode mode = TreeActionMode::greedy;

  std::size_t added() const { return sensors.empty() ? 0 : sensors.size() - 1; }
  double max_error() const;
};

// Memoised P_E^max keyed by area root and child sensors.
class AreaEvaluator {
 public:
  AreaEvaluator(const Tree& tree, const CumulativeStats& stats, AreaErrorOptions options);
  double error(int root, const std::vector<char>& sensed);
  double error(const Area& area);
  std::size_t evaluations() const { return cache_.size(); }

 private:
  const Tree& tree_;
  const CumulativeStats& stats_;
  AreaErrorOptions options_;
  std::map<std::pair<int, std::vector<int>>, double> cache_;
};

// Edges grouped by branch, branches ordered by the depth of their deepest edge
// (deepest first, ties by branch id), edges within a branch bottom-up.
std::vector<int> generate_edge_order(const Tree& tree);

// Every induced area meets config.target. Infeasible is thrown only when the
// target cannot be met even with every edge sensed.
Placement solve_feasibility(const Tree& tree, const CumulativeStats& stats, const PlacementConfig& config);

struct BudgetResult {
  Placement placement;
  double target = 0.0;    // smallest feasible target found by bisection
  double achieved = 0.0;  // largest area error of the returned placement
};

// Bisects the target until the feasibility solution uses at most `budget`
// sensors besides the root edge.
BudgetResult solve_budget(const Tree& tree, const CumulativeStats& stats, std::size_t budget,
                          const PlacementConfig& config);

// Per-area P_E^max of an arbitrary placement.
std::vector<AreaError> evaluate_placement(const Tree& tree, const CumulativeStats& stats,
                                          std::span<const int> sensors, const AreaErrorOptions& options = {});

enum class PlacementObjective { max_area_error, product_correct };

struct PlacementScore {
  std::vector<int> sensors;  // root edge included
  double max_area_error = 0.0;
  double product_correct = 0.0;
};

// All placements of `budget` sensors besides the root edge.
std::vector<PlacementScore> enumerate_placements(const Tree& tree, const CumulativeStats& stats,
                                                 std::size_t budget, const AreaErrorOptions& options = {});

// Exhaustive optimum for one objective. Ties go to the better value of the
// other objective, then to the lexicographically smaller placement.
PlacementScore brute_force_placement_oracle(const Tree& tree, const CumulativeStats& stats, std::size_t budget,
                                            PlacementObjective objective,
                                            const AreaErrorOptions& options = {});
PlacementScore best_placement(const std::vector<PlacementScore>& all, PlacementObjective objective);

}  // namespace outage
