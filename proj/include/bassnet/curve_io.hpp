#pragma once

#include "bassnet/types.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace bassnet {

enum class CurveFormat { Csv, Json };

// 17 significant digits, enough to round-trip any double.
[[nodiscard]] std::string format_double(double x);

void write_curve_csv(const AdoptionCurve& curve, const std::filesystem::path& path);
[[nodiscard]] AdoptionCurve read_curve_csv(const std::filesystem::path& path);

[[nodiscard]] nlohmann::json curve_to_json(const AdoptionCurve& curve);
[[nodiscard]] AdoptionCurve curve_from_json(const nlohmann::json& doc);

void write_curve(const AdoptionCurve& curve, const std::filesystem::path& path, CurveFormat format);
void write_json(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace bassnet
