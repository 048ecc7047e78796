#include "outage/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "outage/error.hpp"
#include "outage/parallel.hpp"

namespace outage {

Tree random_tree(int n, const RandomTreeConfig& config, std::uint64_t seed) {
  if (n < 2) throw InvalidInput("a random tree needs at least 2 vertices");
  if (config.max_children < 1) throw InvalidInput("max_children must be at least 1");
  if (!(config.mean_lo <= config.mean_hi)) throw InvalidInput("mean range is empty");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mean(config.mean_lo, config.mean_hi);

  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<int> child_count(static_cast<std::size_t>(n), 0);
  std::vector<int> open;  // non-root vertices with room for a child
  parent[1] = 0;
  open.push_back(1);
  for (int v = 2; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
    const std::size_t slot = pick(rng);
    const int p = open[slot];
    parent[v] = p;
    if (++child_count[p] >= config.max_children) {
      open[slot] = open.back();
      open.pop_back();
    }
    open.push_back(v);
  }
  std::vector<Load> loads(static_cast<std::size_t>(n));
  for (int v = 1; v < n; ++v) loads[v].mean = mean(rng);
  Tree t = Tree::from_parents(std::move(parent), std::move(loads));
  return apply_forecast_model(t, config.forecast);
}

Observation simulate_outage(const Tree& tree, std::span<const int> sensors, const Hypothesis& truth,
                            std::uint64_t seed) {
  for (int e : truth.edges)
    if (e <= 0 || e >= static_cast<int>(tree.vertex_count()))
      throw InvalidInput("outage edge " + std::to_string(e) + " not in tree");
  if (!is_antichain(tree, truth)) throw InvalidInput("outage edges must not lie below one another");

  const std::size_t n = tree.vertex_count();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> x(n, 0.0);
  for (std::size_t v = 1; v < n; ++v) {
    const Load& l = tree.load(static_cast<int>(v));
    x[v] = l.mean + std::sqrt(l.variance) * z(rng);
  }
  std::vector<char> alive(n, 0);
  for (int v : tree.preorder()) {
    if (v == Tree::kRoot) continue;
    const int p = tree.parent(v);
    alive[v] = !truth.contains(v) && (p == Tree::kRoot || alive[p]);
  }
  std::vector<double> flow(n, 0.0);
  for (int v : tree.postorder()) {
    if (v == Tree::kRoot) continue;
    if (alive[v]) flow[v] += x[v];
    flow[tree.parent(v)] += flow[v];
  }
  Observation obs;
  for (int s : normalize_placement(tree, sensors)) obs.flows[s] = alive[s] ? flow[s] : 0.0;
  obs.forecasts.resize(n);
  for (std::size_t v = 0; v < n; ++v) obs.forecasts[v] = tree.load(static_cast<int>(v)).mean;
  return obs;
}

RateEstimate empirical_detection_rate(const Tree& tree, std::span<const int> sensors, const Hypothesis& truth,
                                      std::size_t n_trials, std::uint64_t seed, const DetectOptions& options,
                                      unsigned threads) {
  if (n_trials == 0) throw InvalidInput("need at least one trial");
  const std::vector<int> placement = normalize_placement(tree, sensors);
  std::vector<char> wrong(n_trials, 0);
  parallel_for(n_trials, threads, [&](std::size_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 mix(seq);
    const Observation obs = simulate_outage(tree, placement, truth, mix());
    wrong[i] = detect(tree, placement, obs, options).global != truth;
  });
  const double p = static_cast<double>(std::count(wrong.begin(), wrong.end(), 1)) / static_cast<double>(n_trials);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n_trials)), n_trials};
}

std::vector<double> placement_error_profile(const Tree& tree, std::span<const int> sensors,
                                            const AreaErrorOptions& options) {
  const CumulativeStats stats = cumulative_stats(tree);
  std::vector<double> out;
  for (const auto& a : build_areas(tree, sensors)) {
    const auto p = area_error_profile(tree, a, stats, options);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

SweepResult sweep(const SweepConfig& config) {
  if (config.kappas.empty() || config.targets.empty()) throw InvalidInput("sweep grid is empty");
  RandomTreeConfig base = config.tree;
  base.forecast = ForecastModel::fixed(0.0);
  const Tree topology = random_tree(config.n_vertices, base, config.seed);

  SweepResult result;
  result.points.resize(config.kappas.size() * config.targets.size());
  parallel_for(result.points.size(), config.threads, [&](std::size_t idx) {
    const double kappa = config.kappas[idx / config.targets.size()];
    const double target = config.targets[idx % config.targets.size()];
    const Tree tree = apply_forecast_model(topology, ForecastModel::fixed(kappa));
    const CumulativeStats stats = cumulative_stats(tree);
    PlacementConfig pc;
    pc.target = target;
    pc.limits = config.limits;
    pc.mode = config.mode;
    const Placement p = solve_feasibility(tree, stats, pc);

    SweepPoint& pt = result.points[idx];
    pt.kappa = kappa;
    pt.target = target;
    pt.n_sensors = p.sensors.size();
    pt.density = static_cast<double>(p.sensors.size()) / static_cast<double>(tree.edge_count());
    pt.errors = placement_error_profile(tree, p.sensors, {config.limits, std::nullopt});
    if (!pt.errors.empty()) {
      pt.mean_error = std::accumulate(pt.errors.begin(), pt.errors.end(), 0.0) / static_cast<double>(pt.errors.size());
      pt.max_error = *std::max_element(pt.errors.begin(), pt.errors.end());
    }
  });
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream os;
  os.precision(10);
  os << "kappa,target,n_sensors,density,mean_err,max_err\n";
  for (const auto& p : result.points)
    os << p.kappa << ',' << p.target << ',' << p.n_sensors << ',' << p.density << ',' << p.mean_error << ','
       << p.max_error << '\n';
  return os.str();
}

}  // namespace outage
