#pragma once

#include <string>
#include <vector>

#include "ibshell/model.hpp"

namespace ibshell {

// Flat "key = value" text, one entry per line; '#' starts a comment.
// Keys are the ModelConfig field names. Unknown keys and malformed values
// raise ConfigError with the line number.
ModelConfig parse_config(const std::string& text, ModelConfig base = {});
ModelConfig load_config(const std::string& path, ModelConfig base = {});

// Every key in a stable order, suitable for parse_config.
std::string format_config(const ModelConfig& cfg);

std::vector<std::string> config_keys();

}  // namespace ibshell
