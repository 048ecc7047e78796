#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "outage/error.hpp"
#include "outage/errors.hpp"
#include "outage/sim.hpp"

using namespace outage;

TEST_CASE("forecast scaling law") {
  CHECK(kappa_of_load(1e12) == doctest::Approx(std::sqrt(41.9) / 100).epsilon(1e-6));
  CHECK(kappa_of_load(3562.0 / (100.0 - 41.9)) == doctest::Approx(0.10));
  CHECK(kappa_of_load(1.0) == doctest::Approx(0.6003).epsilon(1e-4));
  CHECK_THROWS_AS(kappa_of_load(0.0), InvalidInput);
  CHECK_THROWS_AS(kappa_of_load(-3.0), InvalidInput);
  CHECK(kappa_of_load(10.0) > kappa_of_load(100.0));
  CHECK(ForecastModel::fixed(0.02).sigma(50.0) == doctest::Approx(1.0));
}

TEST_CASE("random trees are reproducible and respect the branching limit") {
  const Tree a = random_tree(2, {}, 3);
  CHECK(a.edge_count() == 1);
  RandomTreeConfig cfg;
  cfg.max_children = 2;
  const Tree x = random_tree(100, cfg, 42), y = random_tree(100, cfg, 42);
  for (int v = 0; v < 100; ++v) {
    REQUIRE(x.parent(v) == y.parent(v));
    REQUIRE(x.load(v).mean == y.load(v).mean);
    REQUIRE(x.children(v).size() <= 2);
  }
  double mean_depth = 0, mean_branching = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Tree t = random_tree(100, cfg, seed);
    int deepest = 0, junctions = 0;
    for (int v = 1; v < 100; ++v) {
      deepest = std::max(deepest, t.depth(v));
      if (t.children(v).size() > 1) ++junctions;
    }
    mean_depth += deepest / 1000.0;
    mean_branching += junctions / 1000.0;
  }
  CHECK(mean_depth > 8);
  CHECK(mean_depth < 40);
  CHECK(mean_branching > 10);
  CHECK(mean_branching < 60);
}

TEST_CASE("simulated flows") {
  const Tree t = fixture("t2.json");
  std::vector<Load> loads(t.vertex_count(), {1.0, 0.0});
  loads[0] = {0, 0};
  const Tree quiet = t.with_loads(loads);
  const auto all = std::vector<int>{1, 2, 3, 4, 5};
  const auto none = simulate_outage(quiet, all, {}, 1);
  const auto s = cumulative_stats(quiet);
  for (int e : all) CHECK(none.flows.at(e) == s.wmu[e]);
  const auto dark = simulate_outage(quiet, all, Hypothesis{{1}}, 1);
  for (int e : all) CHECK(dark.flows.at(e) == 0.0);
  CHECK(simulate_outage(quiet, {}, Hypothesis{{5}}, 1).flows.at(1) == 4.0);
  CHECK_THROWS_AS(simulate_outage(quiet, {}, Hypothesis{{2, 3}}, 1), InvalidInput);
  CHECK_THROWS_AS(simulate_outage(quiet, {}, Hypothesis{{9}}, 1), InvalidInput);

  RandomTreeConfig cfg;
  cfg.forecast = ForecastModel::fixed(0.3);
  const Tree r = random_tree(40, cfg, 2);
  std::vector<int> sensors{5, 9, 17, 30};
  const auto hyps = enumerate_unique(r, EnumerationLimits::at_most(2));
  for (std::size_t i = 0; i < hyps.size(); i += 37) {
    const auto o1 = simulate_outage(r, sensors, hyps[i], 77);
    const auto o2 = simulate_outage(r, sensors, hyps[i], 77);
    CHECK(o1.flows == o2.flows);
    for (const auto& [e, f] : o1.flows) REQUIRE((f == 0.0) == covers(r, hyps[i], e));
  }
}

TEST_CASE("empirical detection rate matches the analytic area error") {
  // One area, no child sensors: the global error equals the local error.
  const Tree t = fixture("greedy_counterexample.json");
  const auto s = cumulative_stats(t);
  const std::vector<int> sensors{2, 5, 6};
  const auto area = build_areas(t, sensors)[1];
  const auto set = area_scalar_set(t, area, {1}, s, {EnumerationLimits::unbounded(), std::nullopt});
  const auto analytic = missed_detection_all(set.set);
  for (std::size_t k = 0; k < set.hypotheses.size(); ++k) {
    const auto r = empirical_detection_rate(t, sensors, set.hypotheses[k], 20000, 3 + k,
                                            {EnumerationLimits::unbounded(), std::nullopt}, 4);
    // Every other area has a single hypothesis per pattern, so it never errs.
    CHECK(std::abs(r.rate - analytic[k]) <= 4 * std::max(r.std_error, 1e-3));
  }
  const Tree one = Tree::from_parents({-1, 0}, {{0, 0}, {1, 0.1}});
  CHECK(empirical_detection_rate(one, {}, {}, 100, 1).rate == 0.0);
}

TEST_CASE("sweep is reproducible and density falls with the target") {
  SweepConfig cfg;
  cfg.n_vertices = 40;
  cfg.kappas = {0.05, 0.3};
  cfg.targets = {0.02, 0.1, 0.3};
  cfg.threads = 2;
  const auto a = sweep(cfg), b = sweep(cfg);
  REQUIRE(a.points.size() == 6);
  CHECK(sweep_csv(a) == sweep_csv(b));
  for (const auto& p : a.points) {
    CHECK(p.density >= 0.0);
    CHECK(p.density <= 1.0);
    CHECK(p.max_error <= p.target + 1e-12);
  }
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(a.points[3 * i].n_sensors >= a.points[3 * i + 1].n_sensors);
    CHECK(a.points[3 * i + 1].n_sensors >= a.points[3 * i + 2].n_sensors);
  }
  CHECK(sweep_csv(a).rfind("kappa,target,n_sensors,density,mean_err,max_err\n", 0) == 0);
}
