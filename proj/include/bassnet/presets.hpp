#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bassnet {

struct PresetAssertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct PresetReport {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<PresetAssertion> assertions;
  std::vector<std::filesystem::path> files;
  nlohmann::json summary;  // also written to <out_dir>/summary.json

  [[nodiscard]] bool passed() const;
};

[[nodiscard]] const std::vector<std::string>& preset_names();

// Throws InvalidArgument for an unknown name.
PresetReport run_preset(std::string_view name, std::uint64_t seed, const std::filesystem::path& out_dir);

}  // namespace bassnet
