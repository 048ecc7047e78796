#include "outage/placement.hpp"

#include <algorithm>
#include <cmath>

#include "outage/error.hpp"

namespace outage {

namespace {

struct Scenario {
  std::vector<char> sensed;
  std::size_t count = 0;
};

std::vector<int> sensed_list(const std::vector<char>& sensed) {
  std::vector<int> out;
  for (std::size_t e = 0; e < sensed.size(); ++e)
    if (sensed[e]) out.push_back(static_cast<int>(e));
  return out;
}

std::size_t area_edge_count(const Tree& tree, int root, const std::vector<char>& sensed) {
  std::size_t n = 0;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int c : tree.children(v)) {
      ++n;
      if (!sensed[c]) stack.push_back(c);
    }
  }
  return n;
}

class Walker {
 public:
  Walker(const Tree& tree, AreaEvaluator& eval, double target) : tree_(tree), eval_(eval), target_(target) {}

  // Successor scenarios after visiting edge e. Greedy mode returns one.
  std::vector<Scenario> visit(int e, const Scenario& sc, bool all_feasible) {
    if (eval_.error(e, sc.sensed) <= target_) return {sc};
    const auto& kids = tree_.children(e);
    std::vector<int> open;
    for (int c : kids)
      if (!sc.sensed[c]) open.push_back(c);
    if (open.empty()) throw Infeasible("area rooted at edge " + std::string(tree_.edge_name(e)) +
                                       " cannot meet the target");
    if (kids.size() == 1) {
      Scenario next = sc;
      next.sensed[open.front()] = 1;
      ++next.count;
      return {next};
    }

    struct Candidate {
      Scenario sc;
      std::size_t size;
      double error;
      std::size_t edges;
      std::vector<int> added;
    };
    std::vector<Candidate> feasible;
    const std::size_t k = open.size();
    if (k >= 20) throw CapExceeded("junction with too many children for the tree action");
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
      Candidate c{sc, 0, 0.0, 0, {}};
      for (std::size_t j = 0; j < k; ++j)
        if ((mask >> j) & 1U) {
          c.sc.sensed[open[j]] = 1;
          c.added.push_back(open[j]);
        }
      c.size = c.added.size();
      c.sc.count += c.size;
      c.error = eval_.error(e, c.sc.sensed);
      if (c.error > target_) continue;
      c.edges = area_edge_count(tree_, e, c.sc.sensed);
      feasible.push_back(std::move(c));
    }
    if (feasible.empty()) throw Infeasible("no child split of edge " + std::string(tree_.edge_name(e)) +
                                           " meets the target");
    if (all_feasible) {
      std::vector<Scenario> out;
      for (auto& c : feasible) out.push_back(std::move(c.sc));
      return out;
    }
    auto best = std::min_element(feasible.begin(), feasible.end(), [](const Candidate& a, const Candidate& b) {
      if (a.size != b.size) return a.size < b.size;
      if (a.error != b.error) return a.error < b.error;
      if (a.edges != b.edges) return a.edges < b.edges;
      return a.added < b.added;
    });
    return {std::move(best->sc)};
  }

 private:
  const Tree& tree_;
  AreaEvaluator& eval_;
  double target_;
};

// Vertices whose area is still open: processed, and no sensed edge between
// them and the top of the processed region.
std::vector<char> open_vertices(const Tree& tree, const std::vector<char>& processed, const Scenario& sc) {
  std::vector<char> open(tree.vertex_count(), 0);
  for (int v : tree.preorder()) {
    if (v == Tree::kRoot || !processed[v]) continue;
    const int p = tree.parent(v);
    open[v] = !sc.sensed[v] && (p == Tree::kRoot || !processed[p] || open[p]);
  }
  return open;
}

bool subset_of(const std::vector<char>& a, const std::vector<char>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

Placement finish(const Tree& tree, AreaEvaluator& eval, const Scenario& sc, const PlacementConfig& config) {
  Placement p;
  p.sensors = normalize_placement(tree, sensed_list(sc.sensed));
  p.target = config.target;
  p.mode = config.mode;
  const std::vector<char> mask = edge_mask(tree, p.sensors);
  for (int s : p.sensors) p.areas.push_back({s, eval.error(s, mask)});
  for (const auto& a : p.areas)
    if (a.error > config.target)
      throw Infeasible("area at edge " + std::string(tree.edge_name(a.root)) + " misses the target");
  return p;
}

Placement run_greedy(const Tree& tree, const std::vector<int>& order, AreaEvaluator& eval, double target) {
  Walker w(tree, eval, target);
  Scenario sc{std::vector<char>(tree.vertex_count(), 0), 0};
  for (int e : order) sc = w.visit(e, sc, false).front();
  Placement p;
  p.sensors = normalize_placement(tree, sensed_list(sc.sensed));
  return p;
}

}  // namespace

double Placement::max_error() const {
  double m = 0.0;
  for (const auto& a : areas) m = std::max(m, a.error);
  return m;
}

AreaEvaluator::AreaEvaluator(const Tree& tree, const CumulativeStats& stats, AreaErrorOptions options)
    : tree_(tree), stats_(stats), options_(std::move(options)) {}

double AreaEvaluator::error(int root, const std::vector<char>& sensed) {
  std::vector<int> kids;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int c : tree_.children(v)) {
      if (sensed[c])
        kids.push_back(c);
      else
        stack.push_back(c);
    }
  }
  std::sort(kids.begin(), kids.end());
  auto key = std::make_pair(root, std::move(kids));
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  const double err = area_max_error(tree_, construct_area(tree_, root, sensed), stats_, options_);
  cache_.emplace(std::move(key), err);
  return err;
}

double AreaEvaluator::error(const Area& area) {
  auto key = std::make_pair(area.root_sensor, area.child_sensors);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  const double err = area_max_error(tree_, area, stats_, options_);
  cache_.emplace(std::move(key), err);
  return err;
}

std::vector<int> generate_edge_order(const Tree& tree) {
  const BranchGraph g = branch_decompose(tree);
  std::vector<int> ids(g.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  auto deepest = [&](int b) { return tree.depth(g.branches[b].edges.back()); };
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) { return deepest(a) > deepest(b); });
  std::vector<int> order;
  order.reserve(tree.edge_count());
  for (int b : ids) {
    const auto& e = g.branches[b].edges;
    order.insert(order.end(), e.rbegin(), e.rend());
  }
  return order;
}

Placement solve_feasibility(const Tree& tree, const CumulativeStats& stats, const PlacementConfig& config) {
  if (std::isnan(config.target)) throw InvalidInput("target must be a number");
  if (config.target < 0.0)
    throw Infeasible("target " + std::to_string(config.target) +
                     " is below the smallest achievable error 0 (every edge sensed)");
  AreaEvaluator eval(tree, stats, {config.limits, config.prior_rho});
  const std::vector<int> order = generate_edge_order(tree);

  Placement greedy = run_greedy(tree, order, eval, config.target);
  if (config.mode == TreeActionMode::greedy) {
    Scenario sc{edge_mask(tree, greedy.sensors), 0};
    return finish(tree, eval, sc, config);
  }

  const std::size_t bound = greedy.added();
  Walker w(tree, eval, config.target);
  std::vector<char> processed(tree.vertex_count(), 0);
  std::vector<Scenario> scenarios{{std::vector<char>(tree.vertex_count(), 0), 0}};
  for (int e : order) {
    processed[e] = 1;
    std::vector<Scenario> next;
    for (const auto& sc : scenarios)
      for (auto& s : w.visit(e, sc, true))
        if (s.count < bound) next.push_back(std::move(s));
    if (next.size() > config.max_scenarios)
      throw CapExceeded("optimal tree action exceeded " + std::to_string(config.max_scenarios) + " scenarios");

    std::vector<std::vector<char>> open(next.size());
    for (std::size_t i = 0; i < next.size(); ++i) open[i] = open_vertices(tree, processed, next[i]);
    std::vector<char> drop(next.size(), 0);
    for (std::size_t i = 0; i < next.size(); ++i) {
      if (drop[i]) continue;
      for (std::size_t j = 0; j < next.size(); ++j) {
        if (i == j || drop[j]) continue;
        // i dominates j: no more sensors and a smaller open region
        const bool dominates = next[i].count <= next[j].count && subset_of(open[i], open[j]) &&
                               (next[i].count < next[j].count || open[i] != open[j] ||
                                next[i].sensed < next[j].sensed || (next[i].sensed == next[j].sensed && i < j));
        if (dominates) drop[j] = 1;
      }
    }
    scenarios.clear();
    for (std::size_t i = 0; i < next.size(); ++i)
      if (!drop[i]) scenarios.push_back(std::move(next[i]));
    if (scenarios.empty()) break;
  }

  if (scenarios.empty()) {
    Scenario sc{edge_mask(tree, greedy.sensors), 0};
    return finish(tree, eval, sc, config);
  }
  auto best = std::min_element(scenarios.begin(), scenarios.end(), [](const Scenario& a, const Scenario& b) {
    if (a.count != b.count) return a.count < b.count;
    return sensed_list(a.sensed) < sensed_list(b.sensed);
  });
  return finish(tree, eval, *best, config);
}

BudgetResult solve_budget(const Tree& tree, const CumulativeStats& stats, std::size_t budget,
                          const PlacementConfig& config) {
  if (!(config.tolerance > 0.0)) throw InvalidInput("bisection tolerance must be positive");
  AreaErrorOptions opt{config.limits, config.prior_rho};
  std::vector<char> none(tree.vertex_count(), 0);
  const double whole = area_max_error(tree, construct_area(tree, tree.root_edge(), none), stats, opt);

  auto place = [&](double t) {
    PlacementConfig c = config;
    c.target = t;
    return solve_feasibility(tree, stats, c);
  };

  double hi = whole;
  Placement best = place(hi);
  if (budget > 0 && whole > 0.0) {
    double lo = 0.0;
    Placement at_zero = place(0.0);
    if (at_zero.added() <= budget) {
      hi = 0.0;
      best = std::move(at_zero);
    } else {
      while (hi - lo > config.tolerance) {
        const double mid = 0.5 * (lo + hi);
        Placement p = place(mid);
        if (p.added() <= budget) {
          hi = mid;
          best = std::move(p);
        } else {
          lo = mid;
        }
      }
    }
  }
  return {best, hi, best.max_error()};
}

std::vector<AreaError> evaluate_placement(const Tree& tree, const CumulativeStats& stats,
                                          std::span<const int> sensors, const AreaErrorOptions& options) {
  std::vector<AreaError> out;
  for (const auto& a : build_areas(tree, sensors))
    out.push_back({a.root_sensor, area_max_error(tree, a, stats, options)});
  return out;
}

std::vector<PlacementScore> enumerate_placements(const Tree& tree, const CumulativeStats& stats,
                                                 std::size_t budget, const AreaErrorOptions& options) {
  std::vector<int> pool;
  for (int e = 1; e < static_cast<int>(tree.vertex_count()); ++e)
    if (e != tree.root_edge()) pool.push_back(e);
  if (budget > pool.size()) budget = pool.size();
  AreaEvaluator eval(tree, stats, options);
  std::vector<char> pick(pool.size(), 0);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(budget), 1);
  std::vector<PlacementScore> out;
  do {
    std::vector<int> chosen;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (pick[i]) chosen.push_back(pool[i]);
    PlacementScore s;
    s.sensors = normalize_placement(tree, chosen);
    const std::vector<char> mask = edge_mask(tree, s.sensors);
    s.product_correct = 1.0;
    for (int r : s.sensors) {
      const double err = eval.error(r, mask);
      s.max_area_error = std::max(s.max_area_error, err);
      s.product_correct *= 1.0 - err;
    }
    out.push_back(std::move(s));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

PlacementScore best_placement(const std::vector<PlacementScore>& all, PlacementObjective objective) {
  if (all.empty()) throw InvalidInput("no placements to choose from");
  auto better = [objective](const PlacementScore& a, const PlacementScore& b) {
    if (objective == PlacementObjective::max_area_error) {
      if (a.max_area_error != b.max_area_error) return a.max_area_error < b.max_area_error;
      if (a.product_correct != b.product_correct) return a.product_correct > b.product_correct;
    } else {
      if (a.product_correct != b.product_correct) return a.product_correct > b.product_correct;
      if (a.max_area_error != b.max_area_error) return a.max_area_error < b.max_area_error;
    }
    return a.sensors < b.sensors;
  };
  return *std::min_element(all.begin(), all.end(), better);
}

PlacementScore brute_force_placement_oracle(const Tree& tree, const CumulativeStats& stats, std::size_t budget,
                                            PlacementObjective objective, const AreaErrorOptions& options) {
  return best_placement(enumerate_placements(tree, stats, budget, options), objective);
}

}  // namespace outage
