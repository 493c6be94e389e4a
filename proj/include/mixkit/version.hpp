#pragma once

namespace mixkit {

inline constexpr const char* kVersion = "0.1.0";

// Bumped whenever a module's numerical output changes.
struct ModuleVersion {
  const char* name;
  const char* version;
};
inline constexpr ModuleVersion kModuleVersions[] = {
    {"sft_core", "1.0"},  {"lpp_engine", "1.0"}, {"homoclinic_builder", "1.0"}, {"shadowing_solver", "1.0"},
    {"maps", "1.0"},      {"measure_lab", "1.0"}, {"cli", "1.0"},
};

}  // namespace mixkit
