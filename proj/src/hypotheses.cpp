#include "outage/hypotheses.hpp"

#include <algorithm>
#include <set>

#include "outage/error.hpp"

namespace outage {

namespace {

using Options = std::vector<Hypothesis>;

struct BranchRule {
  bool allow_single = true;  // edges of the branch may be out on their own
  bool needs_cover = false;  // the branch ends at a zero sensor
};

Options combine(const Options& a, const Options& b, const EnumerationLimits& limits) {
  Options out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) {
      if (limits.max_outages && static_cast<int>(x.size() + y.size()) > *limits.max_outages) continue;
      out.push_back(merge(x, y));
      if (out.size() > limits.cap)
        throw CapExceeded("hypothesis enumeration exceeded the cap of " + std::to_string(limits.cap));
    }
  return out;
}

// Options for the subtree of every branch, children before parents. A
// branch's options hold the empty hypothesis only when its subtree has no
// zero sensor.
std::vector<Hypothesis> enumerate_with_rules(const BranchGraph& g, const std::vector<BranchRule>& rules,
                                             const EnumerationLimits& limits) {
  if (limits.max_outages && *limits.max_outages < 0) throw InvalidInput("max_outages must be >= 0");
  const bool singles_allowed = !limits.max_outages || *limits.max_outages >= 1;
  std::vector<Options> opts(g.size());
  // Branch ids are a preorder, so children have larger ids than parents.
  for (int b = static_cast<int>(g.size()) - 1; b >= 0; --b) {
    const Branch& br = g.branches[b];
    Options prod{Hypothesis{}};
    for (int c : br.children) prod = combine(prod, opts[c], limits);
    if (rules[b].needs_cover)
      prod.erase(std::remove_if(prod.begin(), prod.end(), [](const Hypothesis& h) { return h.empty(); }),
                 prod.end());
    Options mine;
    if (rules[b].allow_single && singles_allowed)
      for (int e : br.edges) mine.push_back(Hypothesis{{e}});
    mine.insert(mine.end(), prod.begin(), prod.end());
    if (mine.size() > limits.cap)
      throw CapExceeded("hypothesis enumeration exceeded the cap of " + std::to_string(limits.cap));
    opts[b] = std::move(mine);
    for (int c : br.children) Options{}.swap(opts[c]);
  }
  Options all{Hypothesis{}};
  for (int r : g.roots) all = combine(all, opts[r], limits);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

std::vector<Hypothesis> enumerate_unique(const BranchGraph& graph, const EnumerationLimits& limits) {
  return enumerate_with_rules(graph, std::vector<BranchRule>(graph.size()), limits);
}

std::vector<Hypothesis> enumerate_unique(const Tree& tree, const EnumerationLimits& limits) {
  return enumerate_unique(branch_decompose(tree), limits);
}

std::vector<BranchLabel> label_branches(const Area& area, const FlowPattern& pattern) {
  if (pattern.size() != area.child_sensors.size())
    throw InvalidInput("flow pattern has " + std::to_string(pattern.size()) + " entries, area has " +
                       std::to_string(area.child_sensors.size()) + " child sensors");
  const BranchGraph& g = area.branches;
  std::vector<int> sensor_of_branch(g.size(), -1);
  for (std::size_t i = 0; i < area.child_sensors.size(); ++i)
    sensor_of_branch[g.branch_of_edge[area.child_sensors[i]]] = static_cast<int>(i);

  std::vector<BranchLabel> label(g.size(), BranchLabel::U);
  for (int b = static_cast<int>(g.size()) - 1; b >= 0; --b) {
    if (sensor_of_branch[b] >= 0) {
      label[b] = pattern[sensor_of_branch[b]] ? BranchLabel::P : BranchLabel::Z;
      continue;
    }
    const auto& ch = g.branches[b].children;
    label[b] = std::any_of(ch.begin(), ch.end(), [&](int c) { return label[c] == BranchLabel::P; })
                   ? BranchLabel::P
                   : BranchLabel::U;
  }
  return label;
}

std::vector<Hypothesis> enumerate_local(const Area& area, const FlowPattern& pattern,
                                        const EnumerationLimits& limits) {
  const std::vector<BranchLabel> label = label_branches(area, pattern);
  std::vector<BranchRule> rules(area.branches.size());
  for (std::size_t b = 0; b < rules.size(); ++b) {
    rules[b].allow_single = label[b] != BranchLabel::P;
    rules[b].needs_cover = label[b] == BranchLabel::Z;
  }
  return enumerate_with_rules(area.branches, rules, limits);
}

LocalHypothesisSet local_hypotheses(const Area& area, const FlowPattern& pattern,
                                    const EnumerationLimits& limits) {
  LocalHypothesisSet out{area.id, pattern, enumerate_local(area, pattern, limits)};
  if (out.hypotheses.empty())
    throw InvalidInput("no hypothesis of area " + std::to_string(area.id) +
                       " explains the observed flow pattern");
  return out;
}

std::vector<FlowPattern> all_flow_patterns(const Area& area) {
  const std::size_t c = area.child_sensors.size();
  if (c >= 20) throw CapExceeded("too many child sensors to enumerate flow patterns");
  std::vector<FlowPattern> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << c); ++mask) {
    FlowPattern f(c);
    for (std::size_t j = 0; j < c; ++j) f[j] = (mask >> j) & 1U;
    out.push_back(std::move(f));
  }
  return out;
}

bool conserve_check(const Area& area, const EnumerationLimits& limits) {
  std::set<Hypothesis> seen;
  std::size_t total = 0;
  for (const auto& f : all_flow_patterns(area)) {
    for (auto& h : enumerate_local(area, f, limits)) {
      ++total;
      seen.insert(std::move(h));
    }
  }
  if (seen.size() != total) return false;
  const auto full = enumerate_unique(area.branches, limits);
  return std::equal(seen.begin(), seen.end(), full.begin(), full.end());
}

}  // namespace outage
