#include "outage/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "outage/error.hpp"

namespace outage::io {

namespace {

std::string id_string(const json& j, const char* what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw InvalidInput(std::string(what) + " must be a string id");
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw InvalidInput(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

FeederSpec parse_feeder(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
    throw InvalidInput("feeder must be an object with a 'vertices' array");
  FeederSpec spec;
  for (const auto& v : j["vertices"]) {
    if (!v.is_object() || !v.contains("id")) throw InvalidInput("every vertex needs an 'id'");
    VertexSpec vs;
    vs.id = id_string(v["id"], "vertex id");
    if (v.contains("parent") && !v["parent"].is_null()) vs.parent = id_string(v["parent"], "parent");
    if (v.contains("edge") && !v["edge"].is_null()) vs.edge = id_string(v["edge"], "edge");
    if (v.contains("mean")) vs.mean = number(v["mean"], "mean");
    if (v.contains("sigma2") && !v["sigma2"].is_null()) vs.sigma2 = number(v["sigma2"], "sigma2");
    if (v.contains("kappa_derived")) {
      if (!v["kappa_derived"].is_boolean()) throw InvalidInput("kappa_derived must be a boolean");
      vs.kappa_derived = v["kappa_derived"].get<bool>();
    }
    if (!vs.parent && !vs.sigma2 && !vs.kappa_derived) vs.sigma2 = 0.0;
    spec.vertices.push_back(std::move(vs));
  }
  for (const char* key : {"sensors", "devices"}) {
    if (!j.contains(key)) continue;
    if (!j[key].is_array()) throw InvalidInput(std::string("'") + key + "' must be an array");
    auto& dst = std::string(key) == "sensors" ? spec.sensors : spec.devices;
    for (const auto& s : j[key]) dst.push_back(id_string(s, key));
  }
  return spec;
}

json feeder_to_json(const Tree& tree, const std::vector<int>& sensors) {
  json verts = json::array();
  for (std::size_t v = 0; v < tree.vertex_count(); ++v) {
    const int iv = static_cast<int>(v);
    json o{{"id", tree.vertex_name(iv)}, {"mean", tree.load(iv).mean}, {"sigma2", tree.load(iv).variance}};
    if (v == 0) {
      o["parent"] = nullptr;
    } else {
      o["parent"] = tree.vertex_name(tree.parent(iv));
      o["edge"] = tree.edge_name(iv);
    }
    verts.push_back(std::move(o));
  }
  json s = json::array();
  for (int e : sensors) s.push_back(tree.edge_name(e));
  return {{"vertices", verts}, {"sensors", s}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
}

Tree load_feeder(const std::string& path) { return Tree::build(parse_feeder(read_json_file(path))); }

Observation parse_observation(const Tree& tree, const json& j) {
  if (!j.is_object() || !j.contains("flows") || !j["flows"].is_object())
    throw InvalidInput("observation must be an object with a 'flows' object");
  Observation obs;
  for (auto it = j["flows"].begin(); it != j["flows"].end(); ++it)
    obs.flows[tree.edge(it.key())] = number(it.value(), "flow");
  if (j.contains("forecasts")) {
    if (!j["forecasts"].is_object()) throw InvalidInput("'forecasts' must be an object");
    obs.forecasts.resize(tree.vertex_count());
    for (std::size_t v = 0; v < tree.vertex_count(); ++v) obs.forecasts[v] = tree.load(static_cast<int>(v)).mean;
    for (auto it = j["forecasts"].begin(); it != j["forecasts"].end(); ++it)
      obs.forecasts[tree.vertex(it.key())] = number(it.value(), "forecast");
  }
  return obs;
}

json observation_to_json(const Tree& tree, const Observation& obs) {
  json flows = json::object(), fc = json::object();
  for (const auto& [e, f] : obs.flows) flows[std::string(tree.edge_name(e))] = f;
  for (std::size_t v = 1; v < obs.forecasts.size(); ++v)
    fc[std::string(tree.vertex_name(static_cast<int>(v)))] = obs.forecasts[v];
  return {{"flows", flows}, {"forecasts", fc}};
}

std::vector<int> parse_edges(const Tree& tree, const json& j) {
  const json* arr = &j;
  if (j.is_object()) {
    if (!j.contains("sensors")) throw InvalidInput("expected a 'sensors' array");
    arr = &j["sensors"];
  }
  if (!arr->is_array()) throw InvalidInput("expected an array of edge ids");
  std::vector<int> out;
  for (const auto& e : *arr) out.push_back(tree.edge(id_string(e, "edge id")));
  return out;
}

Hypothesis parse_hypothesis(const Tree& tree, const json& j) {
  Hypothesis h{parse_edges(tree, j)};
  if (!is_antichain(tree, h)) throw InvalidInput("outage edges must not lie below one another");
  return h;
}

json hypothesis_to_json(const Tree& tree, const Hypothesis& h) {
  json a = json::array();
  for (int e : h.edges) a.push_back(tree.edge_name(e));
  return a;
}

json hypotheses_to_json(const Tree& tree, const std::vector<Hypothesis>& hs) {
  json a = json::array();
  for (const auto& h : hs) a.push_back(hypothesis_to_json(tree, h));
  return a;
}

json detection_to_json(const Tree& tree, const Detection& d) {
  json areas = json::array();
  for (const auto& a : d.areas) {
    json o{{"root", tree.edge_name(a.root)}, {"hypothesis", hypothesis_to_json(tree, a.hypothesis)}};
    o["loglik"] = std::isfinite(a.loglik) ? json(a.loglik) : json(nullptr);
    if (a.pruned) o["pruned"] = true;
    areas.push_back(std::move(o));
  }
  return {{"global", hypothesis_to_json(tree, d.global)}, {"areas", areas}};
}

json area_errors_to_json(const Tree& tree, const std::vector<AreaError>& errors) {
  json a = json::array();
  for (const auto& e : errors) a.push_back({{"root", tree.edge_name(e.root)}, {"error", e.error}});
  return a;
}

json placement_to_json(const Tree& tree, const Placement& p) {
  json s = json::array();
  for (int e : p.sensors) s.push_back(tree.edge_name(e));
  return {{"sensors", s},
          {"target", p.target},
          {"areas", area_errors_to_json(tree, p.areas)},
          {"mode", p.mode == TreeActionMode::greedy ? "greedy" : "optimal"}};
}

json histogram_json(const SweepPoint& point) {
  // Bins are decades from 1e-12 up to 1; exact zeros get their own bin.
  std::vector<std::size_t> counts(13, 0);
  std::size_t zeros = 0, below_1e3 = 0;
  for (double e : point.errors) {
    if (e < 1e-3) ++below_1e3;
    if (e <= 0.0) {
      ++zeros;
      continue;
    }
    const int d = std::clamp(static_cast<int>(std::floor(std::log10(e))) + 12, 0, 12);
    ++counts[static_cast<std::size_t>(d)];
  }
  json bins = json::array();
  for (int d = 0; d < 13; ++d)
    bins.push_back({{"lo", std::pow(10.0, d - 12)}, {"hi", std::pow(10.0, d - 11)}, {"count", counts[d]}});
  const double n = static_cast<double>(std::max<std::size_t>(point.errors.size(), 1));
  return {{"kappa", point.kappa},
          {"target", point.target},
          {"n_sensors", point.n_sensors},
          {"density", point.density},
          {"n_hypotheses", point.errors.size()},
          {"mean_err", point.mean_error},
          {"max_err", point.max_error},
          {"fraction_below_1e-3", static_cast<double>(below_1e3) / n},
          {"zero_count", zeros},
          {"bins", bins},
          {"errors", point.errors}};
}

SweepConfig parse_sweep_config(const json& j) {
  if (!j.is_object()) throw InvalidInput("sweep config must be an object");
  SweepConfig c;
  try {
    if (j.contains("n_vertices")) c.n_vertices = j["n_vertices"].get<int>();
    if (j.contains("max_children")) c.tree.max_children = j["max_children"].get<int>();
    if (j.contains("mean_lo")) c.tree.mean_lo = j["mean_lo"].get<double>();
    if (j.contains("mean_hi")) c.tree.mean_hi = j["mean_hi"].get<double>();
    if (j.contains("kappas")) c.kappas = j["kappas"].get<std::vector<double>>();
    if (j.contains("targets")) c.targets = j["targets"].get<std::vector<double>>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("max_outages")) c.limits.max_outages = j["max_outages"].get<int>();
    if (j.contains("mode")) {
      const auto m = j["mode"].get<std::string>();
      if (m == "greedy")
        c.mode = TreeActionMode::greedy;
      else if (m == "optimal")
        c.mode = TreeActionMode::optimal;
      else
        throw InvalidInput("mode must be 'greedy' or 'optimal'");
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed sweep config: ") + e.what());
  }
  return c;
}

}  // namespace outage::io
