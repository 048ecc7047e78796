#pragma once

// Enumeration of unique outage hypotheses over a branch graph, and their
// reduction by the binary flow pattern observed at an area's child sensors.

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "outage/area.hpp"
#include "outage/hypothesis.hpp"
#include "outage/network.hpp"

namespace outage {

struct EnumerationLimits {
  std::optional<int> max_outages = 2;  // nullopt: unbounded
  std::size_t cap = 1'000'000;

  static EnumerationLimits unbounded() { return {std::nullopt, 1'000'000}; }
  static EnumerationLimits at_most(int k) { return {k, 1'000'000}; }
};

// Every antichain of edges in the graph (including the empty one), optionally
// restricted in size, sorted lexicographically. Throws CapExceeded.
std::vector<Hypothesis> enumerate_unique(const BranchGraph& graph, const EnumerationLimits& limits = {});
std::vector<Hypothesis> enumerate_unique(const Tree& tree, const EnumerationLimits& limits = {});

enum class BranchLabel : char { P = 'P', Z = 'Z', U = 'U' };

// One entry per child sensor of an area, in child_sensors order: nonzero
// means the sensor reads positive flow.
using FlowPattern = std::vector<char>;

// Labels indexed by branch id of area.branches.
std::vector<BranchLabel> label_branches(const Area& area, const FlowPattern& pattern);

struct LocalHypothesisSet {
  int area = 0;
  FlowPattern flow_pattern;
  std::vector<Hypothesis> hypotheses;  // lexicographic
};

// Hypotheses of the area consistent with the pattern: nothing out above a
// positive child sensor, every zero child sensor covered. May be empty when
// max_outages is too small for the pattern.
std::vector<Hypothesis> enumerate_local(const Area& area, const FlowPattern& pattern,
                                        const EnumerationLimits& limits = {});

// Same as enumerate_local but throws InvalidInput on an empty result.
LocalHypothesisSet local_hypotheses(const Area& area, const FlowPattern& pattern,
                                    const EnumerationLimits& limits = {});

// All 2^c patterns of an area with c child sensors, pattern i having bit j
// set when child j is positive.
std::vector<FlowPattern> all_flow_patterns(const Area& area);

// True iff the local sets over all flow patterns are pairwise disjoint and
// their union is the full unique set of the area.
bool conserve_check(const Area& area, const EnumerationLimits& limits = EnumerationLimits::unbounded());

}  // namespace outage
