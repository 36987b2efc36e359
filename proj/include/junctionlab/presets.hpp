#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "junctionlab/sweep.hpp"

namespace junctionlab {

const char* library_version();

/// One device configuration inside a preset. A variant either sweeps its
/// phase over the grid or, when fixed_phi is set, is diagonalized once.
struct PresetVariant {
  std::string name;
  SweepConfig sweep;
  std::optional<double> fixed_phi;
};

struct PresetOptions {
  /// Island phases of the Fig10 panel.
  double phi1 = 0.0;
  double phi2 = 0.0;
  int threads = 1;
};

struct FigurePreset {
  std::string id;
  /// Output directory name under the output root.
  std::string directory;
  std::string title;
  std::vector<PresetVariant> variants;
  /// Parameters the figure does not state; pinned to the documented default.
  std::vector<std::string> unspecified;
  std::vector<std::string> outputs;
};

std::vector<std::string> preset_ids();

/// Throws std::invalid_argument for an unknown id.
FigurePreset make_preset(const std::string& id, const PresetOptions& options = {});

struct PresetBundle {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> files;
  nlohmann::json manifest;
};

/// Runs every variant and writes the CSV files plus manifest.json into
/// out_root/<directory>. Output bytes do not depend on options.threads.
PresetBundle run_preset(const FigurePreset& preset, const std::filesystem::path& out_root, int threads = 1);

}  // namespace junctionlab
