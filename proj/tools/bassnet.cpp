#include "bassnet/network_io.hpp"
#include "bassnet/presets.hpp"
#include "bassnet/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

enum Exit { kOk = 0, kUsage = 1, kAssertion = 2, kCapability = 3 };

void print_report(const bassnet::PresetReport& report) {
  for (const auto& a : report.assertions)
    std::cout << (a.passed ? "PASS " : "FAIL ") << a.name << ": " << a.detail << '\n';
  std::cout << report.name << ": " << (report.passed() ? "all assertions passed" : "assertion failure") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Bass model on networks: simulation, master equations and comparisons"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Solve a scenario and write curves");
  run->add_option("--config", config_path, "Scenario JSON file")->required();

  std::string preset_name, out_dir;
  std::uint64_t seed = 0;
  auto* preset = app.add_subcommand("preset", "Reproduce a named figure or check");
  preset->add_option("name", preset_name, "Preset name")->required()->check(CLI::IsMember(bassnet::preset_names()));
  preset->add_option("--seed", seed, "Random seed")->required();
  preset->add_option("--out", out_dir, "Output directory")->required();

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse a scenario and validate its networks");
  validate->add_option("--config", validate_path, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) {
      const auto result = bassnet::run_scenario(bassnet::load_scenario(config_path));
      for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
      if (result.verdict) std::cout << "verdict: " << bassnet::to_string(result.verdict->kind) << '\n';
      return kOk;
    }
    if (*preset) {
      const auto report = bassnet::run_preset(preset_name, seed, out_dir);
      print_report(report);
      return report.passed() ? kOk : kAssertion;
    }
    if (*validate) {
      const auto cfg = bassnet::load_scenario(validate_path);
      std::cout << "valid: m = " << cfg.network.size() << ", structure "
                << bassnet::to_string(cfg.network.structure().kind) << ", " << cfg.network.edge_count()
                << " edges\n";
      return kOk;
    }
  } catch (const bassnet::CapabilityError& e) {
    std::cerr << "solver capability error: " << e.what() << '\n';
    return kCapability;
  } catch (const bassnet::DegenerateExponents& e) {
    std::cerr << "solver capability error: " << e.what() << '\n';
    return kCapability;
  } catch (const bassnet::InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
