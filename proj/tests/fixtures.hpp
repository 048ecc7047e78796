#pragma once

#include <string>

#include "outage/io.hpp"

inline std::string fixture_path(const std::string& name) { return std::string(OUTAGE_FIXTURE_DIR) + "/" + name; }
inline outage::Tree fixture(const std::string& name) { return outage::io::load_feeder(fixture_path(name)); }
