#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "outage/error.hpp"
#include "outage/hypotheses.hpp"
#include "outage/sim.hpp"

using namespace outage;

namespace {

std::vector<std::vector<int>> edges_of(const std::vector<Hypothesis>& hs) {
  std::vector<std::vector<int>> out;
  for (const auto& h : hs) out.push_back(h.edges);
  return out;
}

// Full K-ary tree of single-edge branches below a root chain: every junction
// vertex has K children, leaves sit at branch depth d.
Tree full_branch_tree(int k, int depth) {
  std::vector<int> parent{-1, 0};
  std::vector<int> frontier{1};
  for (int level = 0; level < depth; ++level) {
    std::vector<int> next;
    for (int v : frontier)
      for (int c = 0; c < k; ++c) {
        parent.push_back(v);
        next.push_back(static_cast<int>(parent.size()) - 1);
      }
    frontier = next;
  }
  std::vector<Load> loads(parent.size(), {1.0, 1.0});
  loads[0] = {0, 0};
  return Tree::from_parents(parent, loads);
}

Area area_of(const Tree& t, const std::vector<int>& sensors, int root) {
  for (const auto& a : build_areas(t, sensors))
    if (a.root_sensor == root) return a;
  FAIL("no such area");
  return {};
}

}  // namespace

TEST_CASE("T2 unique hypotheses") {
  const Tree t = fixture("t2.json");
  const auto all = enumerate_unique(t, EnumerationLimits::unbounded());
  const std::vector<std::vector<int>> expected{{}, {1}, {2}, {3}, {3, 5}, {4}, {4, 5}, {5}};
  CHECK(edges_of(all) == expected);
  const auto single = enumerate_unique(t, EnumerationLimits::at_most(1));
  CHECK(edges_of(single) == std::vector<std::vector<int>>{{}, {1}, {2}, {3}, {4}, {5}});
  CHECK(edges_of(enumerate_unique(t, EnumerationLimits::at_most(0))) == std::vector<std::vector<int>>{{}});
}

TEST_CASE("a line yields the empty hypothesis and each edge") {
  const Tree t = Tree::from_parents({-1, 0, 1}, {{0, 0}, {1, 1}, {1, 1}});
  CHECK(edges_of(enumerate_unique(t, EnumerationLimits::unbounded())) ==
        std::vector<std::vector<int>>{{}, {1}, {2}});
}

TEST_CASE("enumeration cap is enforced") {
  const Tree t = full_branch_tree(2, 3);
  EnumerationLimits lim = EnumerationLimits::unbounded();
  lim.cap = 50;
  CHECK_THROWS_AS(enumerate_unique(t, lim), CapExceeded);
}

TEST_CASE("full branch trees follow the exact count recursion") {
  // With the empty hypothesis counted, a branch of m edges whose K child
  // subtrees admit N hypotheses each admits m + N^K.
  for (int k : {2, 3}) {
    std::size_t expect = 2;
    for (int d = 0; d <= 3; ++d) {
      if (k == 3 && d == 3) break;  // 730^3 hypotheses, far above the cap
      if (d > 0) {
        std::size_t p = 1;
        for (int i = 0; i < k; ++i) p *= expect;
        expect = 1 + p;
      }
      const Tree t = full_branch_tree(k, d);
      const std::size_t n = enumerate_unique(t, EnumerationLimits::unbounded()).size();
      CHECK(n == expect);
      if (t.edge_count() <= 16) CHECK(n == oracle::antichains(t, oracle::all_edges(t)).size());
    }
  }
}

TEST_CASE("enumeration matches brute-force antichains on random trees") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    RandomTreeConfig cfg;
    cfg.max_children = 2 + static_cast<int>(seed % 2);
    const Tree t = random_tree(2 + static_cast<int>(seed % 14), cfg, seed);
    for (int k : {1, 2, 3, 99}) {
      const auto got = enumerate_unique(t, EnumerationLimits::at_most(k));
      REQUIRE(edges_of(got) == oracle::antichains(t, oracle::all_edges(t), k));
      for (const auto& h : got) REQUIRE(oracle::antichain(t, h.edges));
      REQUIRE(edges_of(enumerate_unique(t, EnumerationLimits::at_most(k))) == edges_of(got));
    }
  }
}

TEST_CASE("branch labels and local hypotheses on the two-sensor area") {
  const Tree t = fixture("labeled_area.json");
  const auto a = area_of(t, t.declared_sensors(), t.root_edge());
  REQUIRE(a.child_sensors == std::vector<int>{3, 6});
  REQUIRE(a.branches.size() == 5);
  for (int b = 0; b < 5; ++b) REQUIRE(a.branches.branches[b].edges == std::vector<int>{b + 2});

  auto labels = [&](FlowPattern f) {
    std::string s;
    for (auto l : label_branches(a, f)) s += static_cast<char>(l);
    return s;
  };
  CHECK(labels({0, 1}) == "PZPUP");
  CHECK(labels({1, 1}) == "PPPUP");
  CHECK(labels({1, 0}) == "PPUUZ");
  CHECK(labels({0, 0}) == "UZUUZ");

  const auto unbounded = EnumerationLimits::unbounded();
  auto local = [&](FlowPattern f) { return edges_of(local_hypotheses(a, f, unbounded).hypotheses); };
  CHECK(local({1, 1}) == std::vector<std::vector<int>>{{}, {5}});
  CHECK(local({0, 1}) == std::vector<std::vector<int>>{{3}, {3, 5}});
  CHECK(local({1, 0}) == std::vector<std::vector<int>>{{4}, {5, 6}, {6}});
  CHECK(local({0, 0}) == std::vector<std::vector<int>>{{2}, {3, 4}, {3, 5, 6}, {3, 6}});
  CHECK(conserve_check(a));
}

TEST_CASE("no child sensors: all labels undetermined and conservation is trivial") {
  const Tree t = fixture("t2.json");
  const auto a = area_of(t, {}, 1);
  for (auto l : label_branches(a, {})) CHECK(l == BranchLabel::U);
  CHECK(conserve_check(a));
  CHECK(label_branches(a, {}).size() == a.branches.size());
  CHECK_THROWS_AS(label_branches(a, {1}), InvalidInput);
}

TEST_CASE("a single positive child below a line reduces to the upper branch") {
  // root sensor e1, line e2-e3 then a junction with a sensed and an unsensed leaf
  std::vector<Load> loads(6, {1, 1});
  loads[0] = {0, 0};
  const Tree tt = Tree::from_parents({-1, 0, 1, 2, 3, 3}, loads);
  const auto a = area_of(tt, {4}, 1);
  const auto zero = edges_of(local_hypotheses(a, {0}, EnumerationLimits::unbounded()).hypotheses);
  // a zero reading at e4 is explained by e2, e3 or e4 itself, alone or with e5
  CHECK(zero == std::vector<std::vector<int>>{{2}, {3}, {4}, {4, 5}});
}

TEST_CASE("local sets equal brute-force flow filtering and conserve the search space") {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const Tree t = random_tree(11, {}, seed);
    std::vector<int> sensors;
    const int n_sensors = 1 + static_cast<int>(rng() % 2);
    while (static_cast<int>(sensors.size()) < n_sensors) {
      const int e = 2 + static_cast<int>(rng() % 9);
      if (std::find(sensors.begin(), sensors.end(), e) == sensors.end()) sensors.push_back(e);
    }
    for (const auto& a : build_areas(t, sensors)) {
      REQUIRE(conserve_check(a));
      for (int k : {1, 2, 99}) {
        const auto lim = EnumerationLimits::at_most(k);
        const auto pool = oracle::antichains(t, a.candidate_edges, k);
        for (const auto& f : all_flow_patterns(a)) {
          std::vector<std::vector<int>> expect;
          for (const auto& h : pool)
            if (oracle::consistent(t, a, f, h)) expect.push_back(h);
          REQUIRE(edges_of(enumerate_local(a, f, lim)) == expect);
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("an unsatisfiable pattern is reported") {
  const Tree t = fixture("labeled_area.json");
  const auto a = area_of(t, t.declared_sensors(), 1);
  CHECK_THROWS_AS(local_hypotheses(a, {0, 0}, EnumerationLimits::at_most(0)), InvalidInput);
}
