#pragma once

// JSON encodings of feeders, observations, detections and placements.
// Edges and vertices are referred to by their string ids.

#include <json.hpp>
#include <string>
#include <vector>

#include "outage/detector.hpp"
#include "outage/placement.hpp"
#include "outage/sim.hpp"

namespace outage::io {

using nlohmann::json;

FeederSpec parse_feeder(const json& j);
json feeder_to_json(const Tree& tree, const std::vector<int>& sensors = {});
Tree load_feeder(const std::string& path);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Observation parse_observation(const Tree& tree, const json& j);
json observation_to_json(const Tree& tree, const Observation& obs);

// Accepts a JSON array of edge ids, or an object with a "sensors" array.
std::vector<int> parse_edges(const Tree& tree, const json& j);
Hypothesis parse_hypothesis(const Tree& tree, const json& j);

json hypothesis_to_json(const Tree& tree, const Hypothesis& h);
json hypotheses_to_json(const Tree& tree, const std::vector<Hypothesis>& hs);
json detection_to_json(const Tree& tree, const Detection& d);
json placement_to_json(const Tree& tree, const Placement& p);
json area_errors_to_json(const Tree& tree, const std::vector<AreaError>& errors);

// Log-spaced histogram of error values plus summary statistics.
json histogram_json(const SweepPoint& point);

SweepConfig parse_sweep_config(const json& j);

}  // namespace outage::io
