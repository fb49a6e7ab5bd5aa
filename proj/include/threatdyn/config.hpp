#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "threatdyn/simulation.hpp"

namespace threatdyn {

// Line-oriented `key = value` configuration with `#` comments and sections
// [sim], [design], [couplings] and [ranges.<parameter>]. Absent keys keep
// their defaults. Throws ConfigError carrying the offending line.
SimConfig parse_config(std::string_view text);

// Reads and parses a file; IoError when it cannot be read.
SimConfig load_config(const std::filesystem::path& path);

// The effective configuration in the same format, every key spelled out.
std::string format_config(const SimConfig& config);

}  // namespace threatdyn
