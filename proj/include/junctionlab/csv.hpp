#pragma once

#include <filesystem>
#include <string>

namespace junctionlab {

/// Shortest round-trip decimal form, '.' separator, independent of locale.
std::string fmt_double(double v);

/// Writes text with '\n' line ends, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace junctionlab
