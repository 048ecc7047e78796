#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "outage/area.hpp"
#include "outage/detector.hpp"
#include "outage/error.hpp"
#include "outage/errors.hpp"
#include "outage/hypotheses.hpp"
#include "outage/io.hpp"
#include "outage/placement.hpp"
#include "outage/sim.hpp"

namespace {

using namespace outage;
using io::json;

struct Common {
  std::string feeder;
  std::string placement;
  std::optional<int> max_outages;
  std::optional<double> prior_rho;
  std::optional<std::size_t> cap;
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

void emit(const Common& c, const std::string& text) {
  if (c.out.empty())
    std::cout << text << '\n';
  else
    io::write_text_file(c.out, text + "\n");
}

EnumerationLimits limits_of(const Common& c, EnumerationLimits fallback) {
  if (c.max_outages) {
    if (*c.max_outages < 0) throw InvalidInput("--max-outages must be non-negative");
    fallback.max_outages = *c.max_outages;
  }
  if (c.cap) fallback.cap = *c.cap;
  return fallback;
}

std::vector<int> sensors_of(const Tree& tree, const Common& c) {
  if (c.placement.empty()) return normalize_placement(tree, tree.declared_sensors());
  return normalize_placement(tree, io::parse_edges(tree, io::read_json_file(c.placement)));
}

// A path to a JSON file, or a comma-separated list of edge ids ("" for no outage).
Hypothesis outage_of(const Tree& tree, const std::string& arg) {
  if (std::filesystem::is_regular_file(arg)) return io::parse_hypothesis(tree, io::read_json_file(arg));
  json edges = json::array();
  std::stringstream ss(arg);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) edges.push_back(item);
  return io::parse_hypothesis(tree, edges);
}

int run_enumerate(const Common& c) {
  const Tree tree = io::load_feeder(c.feeder);
  const auto hyps = enumerate_unique(tree, limits_of(c, EnumerationLimits::unbounded()));
  emit(c, json{{"count", hyps.size()}, {"hypotheses", io::hypotheses_to_json(tree, hyps)}}.dump(2));
  return 0;
}

int run_detect(const Common& c, const std::string& obs_path) {
  const Tree tree = io::load_feeder(c.feeder);
  const Observation obs = io::parse_observation(tree, io::read_json_file(obs_path));
  const DetectOptions opt{limits_of(c, {}), c.prior_rho};
  emit(c, io::detection_to_json(tree, detect(tree, sensors_of(tree, c), obs, opt)).dump(2));
  return 0;
}

int run_evaluate(const Common& c) {
  const Tree tree = io::load_feeder(c.feeder);
  const auto sensors = sensors_of(tree, c);
  const auto areas = evaluate_placement(tree, cumulative_stats(tree), sensors, {limits_of(c, {}), c.prior_rho});
  double worst = 0.0;
  for (const auto& a : areas) worst = std::max(worst, a.error);
  json s = json::array();
  for (int e : sensors) s.push_back(tree.edge_name(e));
  emit(c, json{{"sensors", s}, {"areas", io::area_errors_to_json(tree, areas)}, {"max_error", worst}}.dump(2));
  return 0;
}

int run_place(const Common& c, std::optional<double> target, std::optional<std::size_t> budget,
              const std::string& mode) {
  const Tree tree = io::load_feeder(c.feeder);
  const auto stats = cumulative_stats(tree);
  PlacementConfig cfg;
  cfg.limits = limits_of(c, {});
  cfg.prior_rho = c.prior_rho;
  cfg.mode = mode == "optimal" ? TreeActionMode::optimal : TreeActionMode::greedy;
  if (target) {
    cfg.target = *target;
    const Placement p = solve_feasibility(tree, stats, cfg);
    json j = io::placement_to_json(tree, p);
    j["added"] = p.added();
    j["max_error"] = p.max_error();
    emit(c, j.dump(2));
  } else {
    const BudgetResult r = solve_budget(tree, stats, *budget, cfg);
    json j = io::placement_to_json(tree, r.placement);
    j["added"] = r.placement.added();
    j["budget"] = *budget;
    j["target"] = r.target;
    j["max_error"] = r.achieved;
    emit(c, j.dump(2));
  }
  return 0;
}

int run_simulate(const Common& c, const std::string& outage, std::size_t trials) {
  const Tree tree = io::load_feeder(c.feeder);
  const auto sensors = sensors_of(tree, c);
  const Hypothesis truth = outage_of(tree, outage);
  const DetectOptions opt{limits_of(c, {}), c.prior_rho};
  const RateEstimate r = empirical_detection_rate(tree, sensors, truth, trials, c.seed, opt, c.threads);
  emit(c, json{{"outage", io::hypothesis_to_json(tree, truth)},
               {"trials", r.trials},
               {"seed", c.seed},
               {"error_rate", r.rate},
               {"std_error", r.std_error}}
              .dump(2));
  return 0;
}

int run_sweep(const Common& c, const std::string& config_path) {
  SweepConfig cfg = io::parse_sweep_config(io::read_json_file(config_path));
  cfg.threads = c.threads;
  const SweepResult res = sweep(cfg);
  const std::string csv = sweep_csv(res);
  if (c.out.empty()) {
    std::cout << csv;
    return 0;
  }
  const std::filesystem::path dir(c.out);
  std::filesystem::create_directories(dir);
  io::write_text_file((dir / "sweep.csv").string(), csv);
  for (std::size_t i = 0; i < res.points.size(); ++i)
    io::write_text_file((dir / ("histogram_" + std::to_string(i) + ".json")).string(),
                        io::histogram_json(res.points[i]).dump(2) + "\n");
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Outage detection and sensor placement on radial feeders"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app.add_option("--out", c.out, "Write output to this file (a directory for sweep)");
  app.add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  auto feeder_opts = [&](CLI::App* sub, bool placement) {
    sub->add_option("--feeder", c.feeder, "Feeder JSON file")->required()->check(CLI::ExistingFile);
    if (placement)
      sub->add_option("--placement", c.placement, "Sensor list or placement JSON (default: feeder sensors)")
          ->check(CLI::ExistingFile);
    sub->add_option("--max-outages", c.max_outages, "Largest number of simultaneous outages per area");
  };

  auto* enumerate_cmd = app.add_subcommand("enumerate", "List the unique outage hypotheses");
  feeder_opts(enumerate_cmd, false);
  enumerate_cmd->add_option("--cap", c.cap, "Largest number of hypotheses to enumerate");

  std::string obs_path;
  auto* detect_cmd = app.add_subcommand("detect", "Run the detector on one observation");
  feeder_opts(detect_cmd, true);
  detect_cmd->add_option("--obs", obs_path, "Observation JSON file")->required()->check(CLI::ExistingFile);
  detect_cmd->add_option("--prior-rho", c.prior_rho, "Per-outage prior weight");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Worst missed-detection error of every area");
  feeder_opts(evaluate_cmd, true);
  evaluate_cmd->add_option("--prior-rho", c.prior_rho, "Per-outage prior weight");

  std::optional<double> target;
  std::optional<std::size_t> budget;
  std::string mode = "greedy";
  auto* place_cmd = app.add_subcommand("place", "Place sensors for an error target or a sensor budget");
  feeder_opts(place_cmd, false);
  auto* target_opt = place_cmd->add_option("--target", target, "Largest allowed area error")->check(CLI::Range(0.0, 1.0));
  auto* budget_opt = place_cmd->add_option("--budget", budget, "Sensors to add besides the root sensor");
  target_opt->excludes(budget_opt);
  place_cmd->add_option("--mode", mode, "Tree action")->check(CLI::IsMember({"greedy", "optimal"}))->capture_default_str();
  place_cmd->add_option("--prior-rho", c.prior_rho, "Per-outage prior weight");

  std::string outage;
  std::size_t trials = 1000;
  auto* simulate_cmd = app.add_subcommand("simulate", "Empirical detection error of one outage");
  feeder_opts(simulate_cmd, true);
  simulate_cmd->add_option("--outage", outage, "Comma-separated edge ids, or a JSON file")->required();
  simulate_cmd->add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber)->capture_default_str();
  simulate_cmd->add_option("--prior-rho", c.prior_rho, "Per-outage prior weight");

  std::string config_path;
  auto* sweep_cmd = app.add_subcommand("sweep", "Density and error sweep over kappa and target grids");
  sweep_cmd->add_option("--config", config_path, "Sweep configuration JSON")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (*enumerate_cmd) return run_enumerate(c);
    if (*detect_cmd) return run_detect(c, obs_path);
    if (*evaluate_cmd) return run_evaluate(c);
    if (*place_cmd) {
      if (!target && !budget) throw InvalidInput("place needs --target or --budget");
      return run_place(c, target, budget, mode);
    }
    if (*simulate_cmd) return run_simulate(c, outage, trials);
    if (*sweep_cmd) return run_sweep(c, config_path);
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 2;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "malformed JSON: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
