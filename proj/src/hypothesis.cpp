#include "outage/hypothesis.hpp"

#include <algorithm>
#include <iterator>

#include "outage/network.hpp"

namespace outage {

Hypothesis::Hypothesis(std::vector<int> e) : edges(std::move(e)) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

bool Hypothesis::contains(int e) const { return std::binary_search(edges.begin(), edges.end(), e); }

bool simpler(const Hypothesis& a, const Hypothesis& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.edges < b.edges;
}

bool is_antichain(const Tree& tree, const Hypothesis& h) {
  for (int a : h.edges)
    for (int b : h.edges)
      if (a != b && tree.is_ancestor_or_self(a, b)) return false;
  return true;
}

bool covers(const Tree& tree, const Hypothesis& h, int e) {
  return std::any_of(h.edges.begin(), h.edges.end(),
                     [&](int o) { return tree.is_ancestor_or_self(o, e); });
}

Hypothesis merge(const Hypothesis& a, const Hypothesis& b) {
  Hypothesis out;
  out.edges.reserve(a.size() + b.size());
  std::merge(a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(),
             std::back_inserter(out.edges));
  return out;
}

std::string to_string(const Tree& tree, const Hypothesis& h) {
  std::string s = "{";
  for (std::size_t i = 0; i < h.edges.size(); ++i) {
    if (i) s += ",";
    s += tree.edge_name(h.edges[i]);
  }
  return s + "}";
}

}  // namespace outage
