#include "outage/area.hpp"

#include <algorithm>
#include <cmath>

#include "outage/error.hpp"

namespace outage {

std::vector<int> normalize_placement(const Tree& tree, std::span<const int> sensors) {
  std::vector<int> out(sensors.begin(), sensors.end());
  for (int e : out)
    if (e <= 0 || e >= static_cast<int>(tree.vertex_count()))
      throw InvalidInput("placement edge " + std::to_string(e) + " not in tree");
  out.push_back(tree.root_edge());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Area construct_area(const Tree& tree, int root_sensor, const std::vector<char>& sensed) {
  if (root_sensor <= 0 || root_sensor >= static_cast<int>(tree.vertex_count()))
    throw InvalidInput("area root edge " + std::to_string(root_sensor) + " not in tree");
  Area a;
  a.root_sensor = root_sensor;
  std::vector<char> in_scope(tree.vertex_count(), 0);
  std::vector<int> stack{root_sensor};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    a.vertices.push_back(v);
    const auto& ch = tree.children(v);
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
      const int c = *it;
      in_scope[c] = 1;
      if (sensed[c])
        a.child_sensors.push_back(c);
      else
        stack.push_back(c);
    }
  }
  std::sort(a.child_sensors.begin(), a.child_sensors.end());
  for (std::size_t e = 0; e < in_scope.size(); ++e)
    if (in_scope[e]) a.candidate_edges.push_back(static_cast<int>(e));
  a.branches = build_branches(tree, in_scope, edge_mask(tree, a.child_sensors));
  return a;
}

std::vector<Area> build_areas(const Tree& tree, std::span<const int> sensors) {
  const std::vector<int> placement = normalize_placement(tree, sensors);
  const std::vector<char> sensed = edge_mask(tree, placement);
  std::vector<Area> areas;
  areas.reserve(placement.size());
  for (int s : placement) {
    areas.push_back(construct_area(tree, s, sensed));
    areas.back().id = static_cast<int>(areas.size()) - 1;
  }
  return areas;
}

ScalarStats hypothesis_stats(const Tree& tree, const Area& area, const Hypothesis& h,
                             const CumulativeStats& stats) {
  double mu = stats.wmu[area.root_sensor];
  double s2 = stats.wsigma[area.root_sensor];
  for (int e : h.edges) {
    mu -= stats.wmu[e];
    s2 -= stats.wsigma[e];
  }
  for (int c : area.child_sensors) {
    if (covers(tree, h, c)) continue;
    mu -= stats.wmu[c];
    s2 -= stats.wsigma[c];
  }
  const double scale = stats.wsigma[area.root_sensor];
  if (s2 < 0.0) {
    if (s2 < -1e-9 * std::max(scale, 1.0))
      throw InvalidInput("negative variance for hypothesis " + to_string(tree, h) +
                         "; it does not belong to this area");
    s2 = 0.0;
  }
  if (s2 <= 1e-12 * scale) s2 = 0.0;
  return {mu, s2};
}

}  // namespace outage
