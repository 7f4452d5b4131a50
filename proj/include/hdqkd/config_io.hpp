#pragma once

#include <string>

#include "hdqkd/config.hpp"

namespace hdqkd {

// Flat `key = value` config text with decorative [section] headers. Keys are
// globally unique; unknown keys are rejected. Missing keys keep their
// defaults.
SystemConfig parse_config_text(const std::string& text);
SystemConfig load_config_file(const std::string& path);

// Serializes a config so that parse_config_text() round-trips it exactly.
std::string config_to_text(const SystemConfig& cfg);

}  // namespace hdqkd
