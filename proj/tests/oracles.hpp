#pragma once

// Independent brute-force references used by the tests. They rely only on
// parent links and never call the enumeration or error code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "outage/area.hpp"
#include "outage/errors.hpp"
#include "outage/network.hpp"

namespace oracle {

inline bool ancestor_or_self(const outage::Tree& t, int a, int b) {
  for (int v = b; v >= 0; v = t.parent(v))
    if (v == a) return true;
  return false;
}

inline double subtree_sum(const outage::Tree& t, int v, bool variance) {
  double s = 0.0;
  for (int u = 0; u < static_cast<int>(t.vertex_count()); ++u)
    if (ancestor_or_self(t, v, u)) s += variance ? t.load(u).variance : t.load(u).mean;
  return s;
}

inline bool antichain(const outage::Tree& t, const std::vector<int>& edges) {
  for (int a : edges)
    for (int b : edges)
      if (a != b && ancestor_or_self(t, a, b)) return false;
  return true;
}

// Every antichain drawn from `pool` with at most max_size edges, sorted.
inline std::vector<std::vector<int>> antichains(const outage::Tree& t, const std::vector<int>& pool,
                                                int max_size = 1 << 30) {
  std::vector<std::vector<int>> out;
  const std::size_t n = pool.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<int> pick;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1U) pick.push_back(pool[i]);
    if (static_cast<int>(pick.size()) > max_size) continue;
    std::sort(pick.begin(), pick.end());
    if (antichain(t, pick)) out.push_back(pick);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<int> all_edges(const outage::Tree& t) {
  std::vector<int> e;
  for (int i = 1; i < static_cast<int>(t.vertex_count()); ++i) e.push_back(i);
  return e;
}

inline bool covered(const outage::Tree& t, const std::vector<int>& h, int e) {
  return std::any_of(h.begin(), h.end(), [&](int o) { return ancestor_or_self(t, o, e); });
}

// Flow consistency of h with a child-sensor pattern of an area.
inline bool consistent(const outage::Tree& t, const outage::Area& a, const std::vector<char>& pattern,
                       const std::vector<int>& h) {
  for (std::size_t i = 0; i < a.child_sensors.size(); ++i)
    if (covered(t, h, a.child_sensors[i]) == static_cast<bool>(pattern[i])) return false;
  return true;
}

// Missed detection by midpoint-rule quadrature of the MAP decision on a fine grid.
inline double quadrature_error(const outage::ScalarHypothesisSet& set, std::size_t k, int steps = 400000) {
  auto score = [&](std::size_t i, double s) {
    const auto& h = set[i];
    return h.log_prior - 0.5 * std::log(2 * std::numbers::pi * h.sigma2) - 0.5 * (s - h.mu) * (s - h.mu) / h.sigma2;
  };
  const double sd = std::sqrt(set[k].sigma2);
  const double lo = set[k].mu - 12 * sd, hi = set[k].mu + 12 * sd;
  const double dx = (hi - lo) / steps;
  double miss = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double s = lo + (i + 0.5) * dx;
    std::size_t best = 0;
    for (std::size_t j = 1; j < set.size(); ++j)
      if (score(j, s) > score(best, s)) best = j;
    if (best != k) miss += std::exp(score(k, s) - set[k].log_prior) * dx;
  }
  return miss;
}

}  // namespace oracle
