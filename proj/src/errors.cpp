#include "outage/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "outage/error.hpp"

namespace outage {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_score(const ScalarHypothesis& h, double s) {
  const double r = s - h.mu;
  return h.log_prior - 0.5 * std::log(2.0 * std::numbers::pi * h.sigma2) - 0.5 * r * r / h.sigma2;
}

std::size_t map_index(const ScalarHypothesisSet& set, double s) {
  std::size_t best = 0;
  double best_score = log_score(set[0], s);
  for (std::size_t i = 1; i < set.size(); ++i) {
    const double v = log_score(set[i], s);
    if (v > best_score) {
      best_score = v;
      best = i;
    }
  }
  return best;
}

bool same_scalar(const ScalarHypothesis& a, const ScalarHypothesis& b) {
  auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)}); };
  return close(a.mu, b.mu) && close(a.sigma2, b.sigma2) && close(a.log_prior, b.log_prior);
}

void validate(const ScalarHypothesisSet& set) {
  if (set.empty()) throw InvalidInput("empty hypothesis set");
  for (const auto& h : set)
    if (!(h.sigma2 > 0.0) || !std::isfinite(h.mu) || !std::isfinite(h.log_prior))
      throw InvalidInput("scalar hypotheses need finite means and positive variances");
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j)
      if (same_scalar(set[i], set[j]))
        throw Indistinguishable("hypotheses " + std::to_string(i) + " and " + std::to_string(j) +
                                " have identical statistics");
}

// Real roots of a x^2 + b x + c = 0, degrading to the linear case.
void add_roots(double a, double b, double c, double scale, std::vector<double>& out) {
  if (std::abs(a) <= 1e-14 * scale) {
    if (b != 0.0) out.push_back(-c / b);
    return;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  if (q != 0.0) {
    out.push_back(q / a);
    out.push_back(c / q);
  } else {
    out.push_back(-b / (2.0 * a));
  }
}

double upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

}  // namespace

AcceptanceRegions acceptance_regions(const ScalarHypothesisSet& set) {
  validate(set);
  std::vector<double> pts;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      const auto& hi = set[i];
      const auto& hj = set[j];
      // log score difference i - j as a quadratic in s
      const double a = -0.5 / hi.sigma2 + 0.5 / hj.sigma2;
      const double b = hi.mu / hi.sigma2 - hj.mu / hj.sigma2;
      const double c = -0.5 * hi.mu * hi.mu / hi.sigma2 + 0.5 * hj.mu * hj.mu / hj.sigma2 +
                       (hi.log_prior - hj.log_prior) - 0.5 * std::log(hi.sigma2 / hj.sigma2);
      add_roots(a, b, c, 0.5 / hi.sigma2 + 0.5 / hj.sigma2, pts);
    }
  pts.erase(std::remove_if(pts.begin(), pts.end(), [](double x) { return !std::isfinite(x); }), pts.end());
  std::sort(pts.begin(), pts.end());
  std::vector<double> merged;
  for (double x : pts)
    if (merged.empty() || x - merged.back() >= 1e-12 * std::max(1.0, std::abs(x))) merged.push_back(x);

  AcceptanceRegions out;
  out.regions.resize(set.size());
  std::vector<double> bounds{-kInf};
  bounds.insert(bounds.end(), merged.begin(), merged.end());
  bounds.push_back(kInf);
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    const double lo = bounds[i], hi = bounds[i + 1];
    double probe;
    if (std::isinf(lo) && std::isinf(hi))
      probe = set[0].mu;
    else if (std::isinf(lo))
      probe = hi - std::max(1.0, std::abs(hi));
    else if (std::isinf(hi))
      probe = lo + std::max(1.0, std::abs(lo));
    else
      probe = 0.5 * (lo + hi);
    auto& r = out.regions[map_index(set, probe)];
    if (!r.empty() && r.back().hi == lo)
      r.back().hi = hi;
    else
      r.push_back({lo, hi});
  }
  return out;
}

double gaussian_mass(const std::vector<Interval>& intervals, double mu, double sigma2) {
  const double sd = std::sqrt(sigma2);
  double total = 0.0;
  for (const auto& iv : intervals) {
    const double zl = (iv.lo - mu) / sd;
    const double zh = (iv.hi - mu) / sd;
    // Work in whichever tail keeps the subtraction well conditioned.
    if (zl >= 0.0)
      total += upper_tail(zl) - upper_tail(zh);
    else if (zh <= 0.0)
      total += upper_tail(-zh) - upper_tail(-zl);
    else
      total += 1.0 - upper_tail(-zl) - upper_tail(zh);
  }
  return total;
}

std::vector<double> missed_detection_all(const ScalarHypothesisSet& set) {
  const auto reg = acceptance_regions(set);
  std::vector<double> out(set.size(), 0.0);
  for (std::size_t k = 0; k < set.size(); ++k) {
    // Sum whichever side is small so that neither end loses precision.
    const double own = gaussian_mass(reg.regions[k], set[k].mu, set[k].sigma2);
    double miss = 0.0;
    if (own < 0.5) {
      miss = 1.0 - own;
    } else {
      for (std::size_t j = 0; j < set.size(); ++j)
        if (j != k) miss += gaussian_mass(reg.regions[j], set[k].mu, set[k].sigma2);
    }
    out[k] = std::clamp(miss, 0.0, 1.0);
  }
  return out;
}

double missed_detection(const ScalarHypothesisSet& set, std::size_t k) {
  if (k >= set.size()) throw InvalidInput("hypothesis index out of range");
  return missed_detection_all(set)[k];
}

namespace {

AreaScalarSet scalar_set_of(const Tree& tree, const Area& area, std::vector<Hypothesis> hypotheses,
                            const CumulativeStats& stats, const AreaErrorOptions& options) {
  AreaScalarSet out;
  out.hypotheses = std::move(hypotheses);
  std::sort(out.hypotheses.begin(), out.hypotheses.end(), simpler);
  const double lp = options.prior_rho ? std::log(*options.prior_rho) : 0.0;
  // A load-free, certain remainder still has to be representable.
  const double floor = 1e-30 * std::max(1.0, stats.wsigma[area.root_sensor]);
  for (const auto& h : out.hypotheses) {
    const ScalarStats st = hypothesis_stats(tree, area, h, stats);
    out.set.push_back({st.mu, std::max(st.sigma2, floor), lp * static_cast<double>(h.size())});
  }
  return out;
}

}  // namespace

AreaScalarSet area_scalar_set(const Tree& tree, const Area& area, const FlowPattern& pattern,
                              const CumulativeStats& stats, const AreaErrorOptions& options) {
  return scalar_set_of(tree, area, enumerate_local(area, pattern, options.limits), stats, options);
}

std::vector<double> area_error_profile(const Tree& tree, const Area& area, const CumulativeStats& stats,
                                       const AreaErrorOptions& options) {
  // Grouping the unique hypotheses by the pattern they induce visits only the
  // patterns that some hypothesis explains.
  std::map<FlowPattern, std::vector<Hypothesis>> groups;
  for (auto& h : enumerate_unique(area.branches, options.limits)) {
    FlowPattern f(area.child_sensors.size());
    for (std::size_t j = 0; j < f.size(); ++j) f[j] = covers(tree, h, area.child_sensors[j]) ? 0 : 1;
    groups[f].push_back(std::move(h));
  }
  std::vector<double> profile;
  for (auto& [f, hyps] : groups) {
    const AreaScalarSet s = scalar_set_of(tree, area, std::move(hyps), stats, options);
    ScalarHypothesisSet distinct;
    std::vector<int> slot(s.set.size(), -1);
    for (std::size_t i = 0; i < s.set.size(); ++i) {
      bool dup = false;
      for (const auto& d : distinct) dup = dup || same_scalar(d, s.set[i]);
      if (!dup) {
        slot[i] = static_cast<int>(distinct.size());
        distinct.push_back(s.set[i]);
      }
    }
    const auto err = missed_detection_all(distinct);
    for (std::size_t i = 0; i < s.set.size(); ++i) profile.push_back(slot[i] >= 0 ? err[slot[i]] : 1.0);
  }
  return profile;
}

double area_max_error(const Tree& tree, const Area& area, const CumulativeStats& stats,
                      const AreaErrorOptions& options) {
  const auto p = area_error_profile(tree, area, stats, options);
  return p.empty() ? 0.0 : *std::max_element(p.begin(), p.end());
}

double area_min_correct(const Tree& tree, const Area& area, const CumulativeStats& stats,
                        const AreaErrorOptions& options) {
  return 1.0 - area_max_error(tree, area, stats, options);
}

MonteCarloEstimate monte_carlo_error(const ScalarHypothesisSet& set, std::size_t k, std::size_t n_samples,
                                     std::uint64_t seed) {
  validate(set);
  if (k >= set.size()) throw InvalidInput("hypothesis index out of range");
  if (n_samples == 0) throw InvalidInput("need at least one sample");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(set[k].mu, std::sqrt(set[k].sigma2));
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < n_samples; ++i)
    if (map_index(set, noise(rng)) != k) ++wrong;
  const double p = static_cast<double>(wrong) / static_cast<double>(n_samples);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples))};
}

}  // namespace outage
