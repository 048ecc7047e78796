#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "outage/error.hpp"
#include "outage/placement.hpp"
#include "outage/sim.hpp"

using namespace outage;

namespace {

Tree line(int n_edges, double kappa) {
  std::vector<int> parent{-1};
  std::vector<Load> loads{{0, 0}};
  for (int i = 1; i <= n_edges; ++i) {
    parent.push_back(i - 1);
    loads.push_back({1.0, kappa * kappa});
  }
  return Tree::from_parents(parent, loads);
}

double max_error_of(const Tree& t, const std::vector<int>& sensors, const EnumerationLimits& lim) {
  double m = 0;
  for (const auto& a : evaluate_placement(t, cumulative_stats(t), sensors, {lim, std::nullopt}))
    m = std::max(m, a.error);
  return m;
}

}  // namespace

TEST_CASE("edge order of T1 visits the deepest branches first") {
  const Tree t = fixture("t1.json");
  const auto order = generate_edge_order(t);
  const std::vector<int> expect{15, 14, 13, 18, 17, 16, 12, 11, 10, 9, 8, 7, 6, 5, 4, 3, 2, 1};
  CHECK(order == expect);
  CHECK(generate_edge_order(line(4, 0.1)) == std::vector<int>{4, 3, 2, 1});
  // star: leaves by id, then the root edge
  const Tree star = Tree::from_parents({-1, 0, 1, 1, 1}, {{0, 0}, {1, 1}, {1, 1}, {1, 1}, {1, 1}});
  CHECK(generate_edge_order(star) == std::vector<int>{2, 3, 4, 1});
}

TEST_CASE("a target at the whole-feeder error needs no extra sensors") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RandomTreeConfig rc;
    rc.forecast = ForecastModel::fixed(0.05);
    const Tree t = random_tree(19, rc, seed);
    const auto s = cumulative_stats(t);
    PlacementConfig cfg;
    std::vector<char> none(t.vertex_count(), 0);
    cfg.target = area_max_error(t, construct_area(t, t.root_edge(), none), s, {cfg.limits, {}});
    const auto p = solve_feasibility(t, s, cfg);
    CHECK(p.sensors == std::vector<int>{1});
  }
  // A short line has no dominated hypothesis, so 0.99 is loose.
  std::vector<Load> loads{{0, 0}, {1.0, 0.01}, {2.0, 0.02}, {0.5, 0.01}};
  const Tree small = Tree::from_parents({-1, 0, 1, 2}, loads);
  PlacementConfig cfg;
  cfg.target = 0.99;
  CHECK(solve_feasibility(small, cumulative_stats(small), cfg).added() == 0);
}

TEST_CASE("greedy and optimal on the greedy counterexample") {
  const Tree t = fixture("greedy_counterexample.json");
  const auto s = cumulative_stats(t);
  PlacementConfig cfg;
  cfg.target = 0.1923;
  cfg.limits = EnumerationLimits::unbounded();
  const auto greedy = solve_feasibility(t, s, cfg);
  cfg.mode = TreeActionMode::optimal;
  const auto optimal = solve_feasibility(t, s, cfg);
  CHECK(greedy.sensors == std::vector<int>{1, 2, 3});
  CHECK(optimal.sensors == std::vector<int>{1, 5});
  CHECK(optimal.max_error() <= cfg.target);
  CHECK(greedy.max_error() <= cfg.target);
}

TEST_CASE("line networks need few sensors at low kappa") {
  const Tree t = line(99, 0.01);
  PlacementConfig cfg;
  cfg.limits = EnumerationLimits::at_most(1);
  for (double target : {1e-3, 1e-2, 0.05}) {
    cfg.target = target;
    const auto p = solve_feasibility(t, cumulative_stats(t), cfg);
    CHECK(p.added() <= 2);
  }
}

TEST_CASE("feasible, maximal on lines, and optimal never worse than greedy") {
  std::mt19937_64 rng(21);
  int disagreements = 0, runs = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    RandomTreeConfig cfg;
    cfg.forecast = ForecastModel::fixed(0.1 + 0.05 * static_cast<double>(seed % 5));
    cfg.max_children = 2 + static_cast<int>(seed % 2);
    const Tree t = random_tree(12 + static_cast<int>(seed % 10), cfg, seed);
    const auto s = cumulative_stats(t);
    PlacementConfig pc;
    pc.target = 0.02 + 0.01 * static_cast<double>(rng() % 20);
    pc.limits = EnumerationLimits::at_most(2);
    const auto g = solve_feasibility(t, s, pc);
    pc.mode = TreeActionMode::optimal;
    const auto o = solve_feasibility(t, s, pc);
    REQUIRE(o.added() <= g.added());
    REQUIRE(max_error_of(t, g.sensors, pc.limits) <= pc.target);
    REQUIRE(max_error_of(t, o.sensors, pc.limits) <= pc.target);
    ++runs;
    if (o.added() != g.added()) ++disagreements;
  }
  CHECK(disagreements * 10 <= runs);

  for (double kappa : {0.05, 0.1, 0.2}) {
    const Tree t = line(30, kappa);
    PlacementConfig pc;
    pc.target = 0.05;
    const auto p = solve_feasibility(t, cumulative_stats(t), pc);
    REQUIRE(max_error_of(t, p.sensors, pc.limits) <= pc.target);
    for (int sensor : p.sensors) {
      if (sensor == t.root_edge()) continue;
      auto moved = p.sensors;
      std::replace(moved.begin(), moved.end(), sensor, t.parent(sensor));
      if (std::count(moved.begin(), moved.end(), t.parent(sensor)) > 1) continue;
      CHECK(max_error_of(t, moved, pc.limits) > pc.target);
    }
  }
}

TEST_CASE("budget bisection brackets the feasibility threshold") {
  RandomTreeConfig cfg;
  cfg.forecast = ForecastModel::fixed(0.2);
  const Tree t = random_tree(30, cfg, 8);
  const auto s = cumulative_stats(t);
  PlacementConfig pc;
  pc.limits = EnumerationLimits::at_most(1);
  const auto r = solve_budget(t, s, 5, pc);
  CHECK(r.placement.added() <= 5);
  CHECK(r.achieved <= r.target + 1e-12);
  PlacementConfig below = pc;
  below.target = r.target - pc.tolerance;
  if (below.target >= 0.0) CHECK(solve_feasibility(t, s, below).added() > 5);

  const auto none = solve_budget(t, s, 0, pc);
  std::vector<char> unsensed(t.vertex_count(), 0);
  CHECK(none.placement.added() == 0);
  CHECK(none.target == doctest::Approx(area_max_error(t, construct_area(t, 1, unsensed), s, {pc.limits, {}})));

  const auto all = solve_budget(t, s, t.edge_count(), pc);
  CHECK(all.achieved <= pc.tolerance);
}

TEST_CASE("brute force placement oracle") {
  RandomTreeConfig cfg;
  cfg.forecast = ForecastModel::fixed(0.05);
  const Tree t = random_tree(8, cfg, 4);
  const auto s = cumulative_stats(t);
  const auto all = enumerate_placements(t, s, 2);
  CHECK(all.size() == 15);  // C(6, 2): the root edge is always sensed
  const auto best = brute_force_placement_oracle(t, s, 2, PlacementObjective::max_area_error);
  for (const auto& p : all) CHECK(best.max_area_error <= p.max_area_error);
  const auto prod = brute_force_placement_oracle(t, s, 2, PlacementObjective::product_correct);
  for (const auto& p : all) CHECK(prod.product_correct >= p.product_correct);

  const auto full = enumerate_placements(t, s, t.edge_count());
  CHECK(full.size() == 1);
  CHECK(full[0].max_area_error == 0.0);
  const auto zero = enumerate_placements(t, s, 0);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].sensors == std::vector<int>{1});
}

TEST_CASE("negative targets are infeasible") {
  const Tree t = fixture("t2.json");
  PlacementConfig pc;
  pc.target = -0.1;
  CHECK_THROWS_AS(solve_feasibility(t, cumulative_stats(t), pc), Infeasible);
}
