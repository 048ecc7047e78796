#include "outage/detector.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "outage/error.hpp"

namespace outage {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Score of a hypothesis: exactly matched degenerate dimensions dominate any
// finite density; -inf marks an impossible hypothesis.
struct Score {
  int deltas = 0;
  double loglik = -kInf;

  bool better_than(const Score& o) const {
    if (std::isinf(loglik) && loglik < 0) return false;
    if (std::isinf(o.loglik) && o.loglik < 0) return true;
    if (deltas != o.deltas) return deltas > o.deltas;
    return loglik > o.loglik;
  }
};

double reading(const Observation& obs, int edge) {
  auto it = obs.flows.find(edge);
  if (it == obs.flows.end()) throw InvalidInput("missing reading for sensor edge " + std::to_string(edge));
  return it->second;
}

std::vector<double> forecasts_of(const Tree& tree, const Observation& obs) {
  if (obs.forecasts.empty()) {
    std::vector<double> f(tree.vertex_count());
    for (std::size_t v = 0; v < f.size(); ++v) f[v] = tree.load(static_cast<int>(v)).mean;
    return f;
  }
  if (obs.forecasts.size() != tree.vertex_count())
    throw InvalidInput("forecast vector does not cover every vertex");
  return obs.forecasts;
}

double log_prior(const Hypothesis& h, const DetectOptions& opt) {
  if (!opt.prior_rho) return 0.0;
  if (!(*opt.prior_rho > 0.0)) throw InvalidInput("prior rho must be positive");
  return static_cast<double>(h.size()) * std::log(*opt.prior_rho);
}

Score scalar_score(double x, const ScalarStats& st, double scale) {
  if (st.sigma2 <= 0.0) {
    if (std::abs(x - st.mu) <= 1e-9 * std::max(scale, 1.0)) return {1, 0.0};
    return {0, -kInf};
  }
  const double r = x - st.mu;
  return {0, -0.5 * (r * r / st.sigma2 + std::log(2.0 * std::numbers::pi * st.sigma2))};
}

}  // namespace

double zero_flow_threshold(const Tree& tree) { return 1e-9 * std::abs(tree.total_mean()); }

double effective_measurement(const Area& area, const Observation& obs) {
  double d = reading(obs, area.root_sensor);
  for (int c : area.child_sensors) d -= reading(obs, c);
  return d;
}

Detection detect(const Tree& tree, std::span<const int> sensors, const Observation& obs,
                 const DetectOptions& options) {
  const auto areas = build_areas(tree, sensors);
  const auto stats = cumulative_stats(tree, forecasts_of(tree, obs));
  const double eps = zero_flow_threshold(tree);
  auto positive = [&](int e) { return std::abs(reading(obs, e)) > eps; };

  std::vector<char> area_positive(tree.vertex_count(), 0), is_sensor(tree.vertex_count(), 0);
  for (const auto& a : areas) {
    area_positive[a.root_sensor] = positive(a.root_sensor);
    is_sensor[a.root_sensor] = 1;
  }

  Detection out;
  for (const auto& a : areas) {
    AreaDecision d;
    d.root = a.root_sensor;
    if (!area_positive[a.root_sensor]) {
      d.pruned = true;
      d.loglik = 0.0;
      if (a.root_sensor == tree.root_edge()) {
        d.hypothesis = Hypothesis{{a.root_sensor}};
        out.global = merge(out.global, d.hypothesis);
      }
      out.areas.push_back(std::move(d));
      continue;
    }
    FlowPattern f(a.child_sensors.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = area_positive[a.child_sensors[i]];
    auto local = local_hypotheses(a, f, options.limits).hypotheses;
    std::sort(local.begin(), local.end(), simpler);

    const double ds = effective_measurement(a, obs);
    Score best;
    const Hypothesis* winner = nullptr;
    for (const auto& h : local) {
      Score s = scalar_score(ds, hypothesis_stats(tree, a, h, stats), stats.wmu[a.root_sensor]);
      s.loglik += log_prior(h, options);
      if (!winner || s.better_than(best)) {
        best = s;
        winner = &h;
      }
    }
    d.hypothesis = *winner;
    d.loglik = best.deltas > 0 ? kInf : best.loglik;
    out.global = merge(out.global, d.hypothesis);
    out.areas.push_back(std::move(d));
  }

  // A positive reading below a zero reading cannot be explained.
  for (const auto& a : areas) {
    if (!area_positive[a.root_sensor]) continue;
    for (int e = tree.parent_edge(a.root_sensor); e > 0; e = tree.parent_edge(e))
      if (obs.flows.count(e) && is_sensor[e] && !area_positive[e])
        throw InvalidInput("sensor " + std::string(tree.edge_name(a.root_sensor)) +
                           " reads positive below a zero reading");
  }
  return out;
}

Detection detect_centralized_oracle(const Tree& tree, std::span<const int> sensors,
                                    const Observation& obs, const DetectOptions& options) {
  const std::vector<int> placement = normalize_placement(tree, sensors);
  const auto areas = build_areas(tree, placement);
  const std::vector<double> xhat = forecasts_of(tree, obs);
  const double eps = zero_flow_threshold(tree);
  const std::size_t n = tree.vertex_count();

  std::vector<int> area_of_edge(n, -1);
  for (std::size_t i = 0; i < areas.size(); ++i)
    for (int e : areas[i].candidate_edges) area_of_edge[e] = static_cast<int>(i);

  std::vector<char> is_pos(placement.size());
  for (std::size_t i = 0; i < placement.size(); ++i) is_pos[i] = std::abs(reading(obs, placement[i])) > eps;

  EnumerationLimits all = options.limits;
  all.max_outages.reset();
  const auto hyps = enumerate_unique(tree, all);

  double scale = 0.0;
  for (int v = 1; v < static_cast<int>(n); ++v) scale += tree.load(v).variance;
  scale = std::max(scale, 1e-300);

  Score best;
  const Hypothesis* winner = nullptr;
  std::vector<char> alive(n);
  for (const auto& h : hyps) {
    if (options.limits.max_outages) {
      std::vector<int> count(areas.size(), 0);
      bool ok = true;
      for (int e : h.edges)
        if (area_of_edge[e] >= 0 && ++count[area_of_edge[e]] > *options.limits.max_outages) ok = false;
      if (!ok) continue;
    }
    bool consistent = true;
    for (std::size_t i = 0; i < placement.size() && consistent; ++i)
      consistent = (covers(tree, h, placement[i]) != static_cast<bool>(is_pos[i]));
    if (!consistent) continue;

    std::fill(alive.begin(), alive.end(), 0);
    for (int v : tree.preorder()) {
      if (v == Tree::kRoot) continue;
      alive[v] = !h.contains(v) && (tree.parent(v) == Tree::kRoot || alive[tree.parent(v)]);
    }

    std::vector<int> pos;
    for (std::size_t i = 0; i < placement.size(); ++i)
      if (is_pos[i]) pos.push_back(placement[i]);
    const auto m = static_cast<Eigen::Index>(pos.size());
    Score s{0, 0.0};
    if (m > 0) {
      Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(n));
      for (Eigen::Index i = 0; i < m; ++i)
        for (int v : tree.descendants(pos[i]))
          if (alive[v]) gamma(i, v) = 1.0;
      Eigen::VectorXd x(static_cast<Eigen::Index>(n)), var(static_cast<Eigen::Index>(n)), sv(m);
      for (std::size_t v = 0; v < n; ++v) {
        x(v) = xhat[v];
        var(v) = tree.load(static_cast<int>(v)).variance;
      }
      for (Eigen::Index i = 0; i < m; ++i) sv(i) = reading(obs, pos[i]);
      const Eigen::VectorXd r = sv - gamma * x;
      const Eigen::MatrixXd cov = gamma * var.asDiagonal() * gamma.transpose();
      Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
      const Eigen::VectorXd pr = ldlt.transpositionsP() * r;
      const Eigen::VectorXd y = ldlt.matrixL().solve(pr);
      const Eigen::VectorXd dvals = ldlt.vectorD();
      double xscale = 0.0;
      for (std::size_t v = 1; v < n; ++v) xscale += std::abs(xhat[v]);
      for (Eigen::Index i = 0; i < m; ++i) {
        if (dvals(i) <= 1e-12 * scale) {
          if (std::abs(y(i)) <= 1e-9 * std::max(xscale, 1.0)) {
            ++s.deltas;
          } else {
            s.loglik = -kInf;
            break;
          }
        } else {
          s.loglik -= 0.5 * (y(i) * y(i) / dvals(i) + std::log(2.0 * std::numbers::pi * dvals(i)));
        }
      }
    }
    s.loglik += log_prior(h, options);
    if (std::isinf(s.loglik) && s.loglik < 0) continue;
    const bool take = !winner || s.better_than(best) ||
                      (!best.better_than(s) && simpler(h, *winner));
    if (take) {
      best = s;
      winner = &h;
    }
  }
  if (!winner) throw InvalidInput("no hypothesis is consistent with the observed flows");

  Detection out;
  out.global = *winner;
  for (const auto& a : areas) {
    AreaDecision d;
    d.root = a.root_sensor;
    const auto it = std::find(placement.begin(), placement.end(), a.root_sensor);
    d.pruned = !is_pos[static_cast<std::size_t>(it - placement.begin())];
    std::vector<int> mine;
    for (int e : winner->edges)
      if (area_of_edge[e] == a.id) mine.push_back(e);
    if (d.pruned && a.root_sensor == tree.root_edge()) mine = {a.root_sensor};
    d.hypothesis = Hypothesis{mine};
    d.loglik = best.deltas > 0 ? kInf : best.loglik;
    out.areas.push_back(std::move(d));
  }
  return out;
}

}  // namespace outage
