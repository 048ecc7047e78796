#pragma once

// Areas are the cells a sensor placement cuts the feeder into: one root
// sensor and the nearest sensed edges below it.

#include <span>
#include <vector>

#include "outage/hypothesis.hpp"
#include "outage/network.hpp"

namespace outage {

struct Area {
  int id = 0;
  int root_sensor = 0;
  std::vector<int> child_sensors;    // sorted
  std::vector<int> vertices;         // preorder, starting at the root sensor's child vertex
  std::vector<int> candidate_edges;  // sorted; every edge that can be out while the root reads positive
  BranchGraph branches;              // over candidate_edges
};

// Sorted, de-duplicated placement with the root edge added.
std::vector<int> normalize_placement(const Tree& tree, std::span<const int> sensors);

// Area rooted at root_sensor given the set of sensed edges.
Area construct_area(const Tree& tree, int root_sensor, const std::vector<char>& sensed);

// One area per sensor, in increasing root-edge order. The root edge is added
// to the placement when missing.
std::vector<Area> build_areas(const Tree& tree, std::span<const int> sensors);

struct ScalarStats {
  double mu = 0.0;
  double sigma2 = 0.0;
};

// Distribution of the effective measurement of the area under h, given that
// every child sensor not covered by h reads its subtree.
ScalarStats hypothesis_stats(const Tree& tree, const Area& area, const Hypothesis& h,
                             const CumulativeStats& stats);

}  // namespace outage
