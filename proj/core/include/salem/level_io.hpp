#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "salem/construction.hpp"

namespace salem {

/// First line of a level file: `N0 t0 n0 seed j`.
struct LevelHeader {
  Int N0 = 0;
  Int t0 = 0;
  int n0 = 0;
  std::uint64_t seed = 0;
  int j = 0;

  bool operator==(const LevelHeader&) const = default;
};

/// Separator line between the atoms and the structured atoms.
inline constexpr const char* kLevelSeparator = "--";

std::string format_level(const LevelHeader& header, const LevelSet& level);
std::pair<LevelHeader, LevelSet> parse_level(const std::string& text, const std::string& name = "<level>");

/// Flat `key = value` text mirroring ConstructionParams. Lines starting
/// with '#' and blank lines are ignored.
ConstructionParams parse_config(const std::string& text, const std::string& name = "<config>");
std::string format_config(const ConstructionParams& params);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::filesystem::path level_path(const std::filesystem::path& dir, int j);
inline constexpr const char* kConfigFile = "construction.cfg";
inline constexpr const char* kManifestFile = "manifest.json";

/// Writes construction.cfg and level_0.txt .. level_{j_max}.txt.
void save_construction(const std::filesystem::path& dir, const Construction& c);

/// Reads construction.cfg and every level file. Only the file format and
/// header agreement are checked here; structural invariants are left to
/// check_levels.
Construction load_construction(const std::filesystem::path& dir);

}  // namespace salem
