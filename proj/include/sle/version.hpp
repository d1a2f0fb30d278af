#pragma once

#include <map>
#include <string>

namespace sle {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Per-module schema versions, recorded in job manifests so emitted tables
// are traceable to the code that produced them.
inline const std::map<std::string, int>& module_versions() {
  static const std::map<std::string, int> v = {
      {"game_core", 1},   {"sampling", 1},      {"choice_rules", 1},
      {"equilibrium", 1}, {"dynamics", 1},      {"approximation", 1},
      {"potential2", 1},  {"cli", 1}};
  return v;
}

}  // namespace sle
