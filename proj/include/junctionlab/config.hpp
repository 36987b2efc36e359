#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "junctionlab/sweep.hpp"

namespace junctionlab {

/// line and column are 1-based; 0 when the error is not tied to a position.
struct ConfigError : std::runtime_error {
  ConfigError(const std::string& msg, std::string section, int line, int column);
  std::string section;
  int line;
  int column;
};

struct ParsedDevice {
  DeviceSpec spec;
  /// Regions whose phase follows the swept variable.
  std::vector<std::size_t> swept_regions;
  /// Set when the file uses the `family = ...` shorthand.
  std::optional<FamilyParams> family;
};

/// Grammar: docs/device_config.md.
ParsedDevice parse_device_config(const std::string& text);
ParsedDevice load_device_config(const std::string& path);

/// Sweep configuration for a parsed file: family files behave exactly like
/// make_sweep_config; explicit files sweep their `swept = true` regions.
SweepConfig sweep_config_for(const ParsedDevice& device, SweptPhase swept, int n_phi, bool track);

}  // namespace junctionlab
