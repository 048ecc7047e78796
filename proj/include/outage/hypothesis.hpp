#pragma once

#include <compare>
#include <string>
#include <vector>

namespace outage {

class Tree;

// A set of simultaneously disconnected edges, kept sorted. The empty set is
// the non-outage hypothesis.
struct Hypothesis {
  std::vector<int> edges;

  Hypothesis() = default;
  explicit Hypothesis(std::vector<int> e);

  bool empty() const { return edges.empty(); }
  std::size_t size() const { return edges.size(); }
  bool contains(int e) const;

  auto operator<=>(const Hypothesis&) const = default;
  bool operator==(const Hypothesis&) const = default;
};

// Tie-break order used throughout: fewer edges first, then lexicographic.
bool simpler(const Hypothesis& a, const Hypothesis& b);

// True when no edge of h lies on the root path of another edge of h.
bool is_antichain(const Tree& tree, const Hypothesis& h);

// True when some edge of h lies on the path from e to the root (e included).
bool covers(const Tree& tree, const Hypothesis& h, int e);

// Union of hypotheses from disjoint parts of the tree.
Hypothesis merge(const Hypothesis& a, const Hypothesis& b);

std::string to_string(const Tree& tree, const Hypothesis& h);

}  // namespace outage
