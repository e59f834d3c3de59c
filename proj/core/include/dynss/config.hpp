// config.hpp — Flat key-value configuration files and flag resolution
//
// File format: UTF-8 text, one `key = value` per line, `#` starts a comment.
// Keys mirror the command-line flags without the leading dashes.

#pragma once

#include <istream>
#include <map>
#include <string>

#include "dynss/sweep.hpp"

namespace dynss {

using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in, const std::string& origin = "<config>");
KeyValues read_config_file(const std::string& path);

// Builds a SweepConfig from defaults, then file values, then flag values
// (flags win). Unknown keys and out-of-range values raise ConfigError naming
// the key and the accepted range.
SweepConfig resolve_config(const KeyValues& file, const KeyValues& flags);

// Keys accepted by resolve_config, with a one-line description each.
const std::map<std::string, std::string>& config_keys();

} // namespace dynss
