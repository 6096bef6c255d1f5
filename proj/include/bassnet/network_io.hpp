#pragma once

#include "bassnet/network.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string_view>

namespace bassnet {

// {"m":..,"p":[..],"edges":[[i,j,rate],..],"structure_tag":"Complete",
//  "torus":{"d":..,"side":..}, "allow_zero_hazard":false}
[[nodiscard]] nlohmann::json network_to_json(const Network& net);
[[nodiscard]] Network network_from_json(const nlohmann::json& doc);
[[nodiscard]] Network load_network(const std::filesystem::path& path);
void save_network(const Network& net, const std::filesystem::path& path);

[[nodiscard]] std::string_view to_string(StructureKind kind);
[[nodiscard]] StructureKind structure_kind_from_string(std::string_view name);

}  // namespace bassnet
