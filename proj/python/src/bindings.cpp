#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "outage/area.hpp"
#include "outage/detector.hpp"
#include "outage/error.hpp"
#include "outage/errors.hpp"
#include "outage/forecast.hpp"
#include "outage/hypotheses.hpp"
#include "outage/io.hpp"
#include "outage/placement.hpp"
#include "outage/sim.hpp"

namespace py = pybind11;
using namespace outage;
using io::json;

namespace {

EnumerationLimits limits(std::optional<int> max_outages) {
  EnumerationLimits l;
  l.max_outages = max_outages;
  return l;
}

std::vector<int> edges(const Tree& tree, const std::vector<std::string>& names) {
  json j = json::array();
  for (const auto& n : names) j.push_back(n);
  return normalize_placement(tree, io::parse_edges(tree, j));
}

Hypothesis hypothesis(const Tree& tree, const std::vector<std::string>& names) {
  json j = json::array();
  for (const auto& n : names) j.push_back(n);
  return io::parse_hypothesis(tree, j);
}

std::string enumerate_json(const Tree& tree, std::optional<int> max_outages) {
  return io::hypotheses_to_json(tree, enumerate_unique(tree, limits(max_outages))).dump();
}

std::string detect_json(const Tree& tree, const std::vector<std::string>& sensors, const std::string& observation,
                        std::optional<int> max_outages, std::optional<double> prior_rho) {
  const Observation obs = io::parse_observation(tree, json::parse(observation));
  return io::detection_to_json(tree, detect(tree, edges(tree, sensors), obs, {limits(max_outages), prior_rho})).dump();
}

std::string evaluate_json(const Tree& tree, const std::vector<std::string>& sensors, std::optional<int> max_outages,
                          std::optional<double> prior_rho) {
  const auto areas =
      evaluate_placement(tree, cumulative_stats(tree), edges(tree, sensors), {limits(max_outages), prior_rho});
  return io::area_errors_to_json(tree, areas).dump();
}

std::string place_json(const Tree& tree, std::optional<double> target, std::optional<std::size_t> budget,
                       const std::string& mode, std::optional<int> max_outages, std::optional<double> prior_rho) {
  if (target.has_value() == budget.has_value()) throw InvalidInput("give exactly one of target and budget");
  if (mode != "greedy" && mode != "optimal") throw InvalidInput("mode must be 'greedy' or 'optimal'");
  PlacementConfig cfg;
  cfg.limits = limits(max_outages);
  cfg.prior_rho = prior_rho;
  cfg.mode = mode == "optimal" ? TreeActionMode::optimal : TreeActionMode::greedy;
  const auto stats = cumulative_stats(tree);
  if (target) {
    cfg.target = *target;
    const Placement p = solve_feasibility(tree, stats, cfg);
    json j = io::placement_to_json(tree, p);
    j["added"] = p.added();
    j["max_error"] = p.max_error();
    return j.dump();
  }
  const BudgetResult r = solve_budget(tree, stats, *budget, cfg);
  json j = io::placement_to_json(tree, r.placement);
  j["added"] = r.placement.added();
  j["target"] = r.target;
  j["max_error"] = r.achieved;
  return j.dump();
}

std::string simulate_json(const Tree& tree, const std::vector<std::string>& sensors,
                          const std::vector<std::string>& outage, std::size_t trials, std::uint64_t seed,
                          std::optional<int> max_outages, unsigned threads) {
  const RateEstimate r = empirical_detection_rate(tree, edges(tree, sensors), hypothesis(tree, outage), trials, seed,
                                                  {limits(max_outages), {}}, threads);
  return json{{"error_rate", r.rate}, {"std_error", r.std_error}, {"trials", r.trials}}.dump();
}

std::vector<double> missed_detection_list(const std::vector<std::tuple<double, double, double>>& set) {
  ScalarHypothesisSet s;
  for (const auto& [mu, sigma2, log_prior] : set) s.push_back({mu, sigma2, log_prior});
  return missed_detection_all(s);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Outage detection and sensor placement on radial feeders";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);
  py::register_exception<Infeasible>(m, "Infeasible", PyExc_RuntimeError);
  py::register_exception<Indistinguishable>(m, "Indistinguishable", PyExc_ValueError);

  py::class_<Tree>(m, "Tree")
      .def_property_readonly("vertex_count", &Tree::vertex_count)
      .def_property_readonly("edge_count", &Tree::edge_count)
      .def_property_readonly("edges",
                             [](const Tree& t) {
                               std::vector<std::string> out;
                               for (std::size_t e = 1; e < t.vertex_count(); ++e)
                                 out.emplace_back(t.edge_name(static_cast<int>(e)));
                               return out;
                             })
      .def_property_readonly("sensors",
                             [](const Tree& t) {
                               std::vector<std::string> out;
                               for (int e : t.declared_sensors()) out.emplace_back(t.edge_name(e));
                               return out;
                             })
      .def("to_json", [](const Tree& t) { return io::feeder_to_json(t, t.declared_sensors()).dump(); });

  m.def("load_feeder", &io::load_feeder, py::arg("path"));
  m.def(
      "parse_feeder", [](const std::string& text) { return Tree::build(io::parse_feeder(json::parse(text))); },
      py::arg("text"));
  m.def(
      "random_tree",
      [](int n, double kappa, std::uint64_t seed, int max_children) {
        RandomTreeConfig cfg;
        cfg.max_children = max_children;
        cfg.forecast = ForecastModel::fixed(kappa);
        return random_tree(n, cfg, seed);
      },
      py::arg("n"), py::arg("kappa") = 0.02, py::arg("seed") = 0, py::arg("max_children") = 3);
  m.def("kappa_of_load", &kappa_of_load, py::arg("mean_load"));

  m.def("_enumerate", &enumerate_json, py::arg("tree"), py::arg("max_outages") = py::none());
  m.def("_detect", &detect_json, py::arg("tree"), py::arg("sensors"), py::arg("observation"),
        py::arg("max_outages") = 2, py::arg("prior_rho") = py::none());
  m.def("_evaluate", &evaluate_json, py::arg("tree"), py::arg("sensors"), py::arg("max_outages") = 2,
        py::arg("prior_rho") = py::none());
  m.def("_place", &place_json, py::arg("tree"), py::arg("target") = py::none(), py::arg("budget") = py::none(),
        py::arg("mode") = "greedy", py::arg("max_outages") = 2, py::arg("prior_rho") = py::none());
  m.def("_simulate", &simulate_json, py::arg("tree"), py::arg("sensors"), py::arg("outage"), py::arg("trials"),
        py::arg("seed") = 0, py::arg("max_outages") = 2, py::arg("threads") = 1);
  m.def("missed_detection", &missed_detection_list, py::arg("hypotheses"),
        "Missed-detection probability of each (mu, sigma2, log_prior) hypothesis under the MAP test.");
}
