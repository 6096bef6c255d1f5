#pragma once

#include "bassnet/curve_io.hpp"
#include "bassnet/dominance.hpp"
#include "bassnet/network.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace bassnet {

enum class SolverKind { MonteCarlo, Master, ClosedForm };

struct SolverChoice {
  SolverKind kind = SolverKind::Master;
  std::uint64_t n_realizations = 0;  // MonteCarlo
  std::uint64_t seed = 0;            // MonteCarlo
};

struct ScenarioConfig {
  Network network;
  SolverChoice solver;
  double t_max = 1.0;
  Index n_points = 2;
  // Comparison target: counterpart of `network`, or an explicit network.
  bool compare_with_counterpart = false;
  std::optional<Network> target;
  double tolerance = 1e-10;
  std::filesystem::path output;
  CurveFormat format = CurveFormat::Csv;
  std::optional<double> horizon;  // MonteCarlo only
};

// Network description: a network document, a builder description
// ({"builder": "complete", ...}), or a path string relative to `base_dir`.
[[nodiscard]] Network network_from_spec(const nlohmann::json& spec, const std::filesystem::path& base_dir);

[[nodiscard]] ScenarioConfig parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir);
[[nodiscard]] ScenarioConfig load_scenario(const std::filesystem::path& path);

// Closed form for m = 2 and m = 3; CapabilityError otherwise or when singular.
[[nodiscard]] AdoptionCurve closed_form_curve(const Network& net, const TimeGrid& grid);
[[nodiscard]] AdoptionCurve solve_with(const Network& net, const TimeGrid& grid, const SolverChoice& solver,
                                       std::optional<double> horizon = std::nullopt);

struct ScenarioResult {
  AdoptionCurve curve;
  std::optional<AdoptionCurve> target_curve;
  std::optional<DominanceVerdict> verdict;
  std::vector<std::filesystem::path> files;
};

// Writes <output>, and with a comparison <stem>_target.<ext> and <stem>_verdict.json.
ScenarioResult run_scenario(const ScenarioConfig& config);

[[nodiscard]] nlohmann::json verdict_to_json(const DominanceVerdict& verdict);

}  // namespace bassnet
