#pragma once

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "salem/construction.hpp"
#include "salem/params.hpp"

namespace salem::testing {

/// N0 = 4, t0 = 2, n0 = 1 (N = 16, t = 4, alpha = 1/2), seed 7.
inline const Construction& desk(int j_max = 5) {
  static const Construction c5 = [] {
    ParamOverrides o;
    o.j_max = 5;
    o.seed = 7;
    return build_construction(derive_params(4, 2, 1, o));
  }();
  if (j_max == 5) return c5;
  static Construction other;
  ParamOverrides o;
  o.j_max = j_max;
  o.seed = 7;
  other = build_construction(derive_params(4, 2, 1, o));
  return other;
}

/// N = 81, t = 16 with small constants so the base block and rotation
/// checks run for real (exhaustively) instead of passing trivially.
inline const Construction& strict() {
  static const Construction c = [] {
    ParamOverrides o;
    o.j_max = 2;
    o.seed = 1;
    o.c_eta = 2.5;
    o.c_rot = 0.5;
    return build_construction(derive_params(3, 2, 2, o));
  }();
  return c;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("salem_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace salem::testing
