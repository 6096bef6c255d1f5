#include "bassnet/scenario.hpp"

#include "bassnet/closedform.hpp"
#include "bassnet/gillespie.hpp"
#include "bassnet/master.hpp"
#include "bassnet/network_io.hpp"

#include <fstream>
#include <string>

namespace bassnet {
namespace {

using nlohmann::json;

// A rate vector given as a list, or as a scalar broadcast to m entries.
Vector rate_vector(const json& spec, const char* key, Index m) {
  const json& v = spec.at(key);
  if (v.is_number()) {
    if (m < 1) throw InvalidArgument(std::string("scalar '") + key + "' needs field m");
    return Vector::Constant(m, v.get<double>());
  }
  const auto list = v.get<std::vector<double>>();
  return Eigen::Map<const Vector>(list.data(), static_cast<Index>(list.size()));
}

ZeroHazardPolicy policy_of(const json& spec) {
  return spec.value("allow_zero_hazard", false) ? ZeroHazardPolicy::Allow : ZeroHazardPolicy::Reject;
}

Network from_builder(const json& spec) {
  const std::string builder = spec.at("builder").get<std::string>();
  const Index m = spec.value("m", Index{0});
  if (builder == "complete")
    return build_complete({rate_vector(spec, "p", m), rate_vector(spec, "q_node", m)});
  if (builder == "one_sided_circle")
    return build_one_sided_circle(rate_vector(spec, "p", m), rate_vector(spec, "q_in", m), policy_of(spec));
  if (builder == "two_sided_circle")
    return build_two_sided_circle(rate_vector(spec, "p", m), rate_vector(spec, "q_left", m),
                                  rate_vector(spec, "q_right", m), policy_of(spec));
  if (builder == "cartesian_torus")
    return build_cartesian_torus(spec.at("d").get<int>(), spec.at("side").get<int>(), spec.at("p").get<double>(),
                                 spec.at("q").get<double>());
  if (builder == "custom") {
    std::vector<Edge> edges;
    for (const auto& e : spec.at("edges")) edges.push_back({e.at(0).get<Index>(), e.at(1).get<Index>(), e.at(2).get<double>()});
    return build_custom(rate_vector(spec, "p", m), edges, policy_of(spec));
  }
  throw InvalidArgument("unknown network builder '" + builder + "'");
}

std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix, const std::string& ext) {
  return out.parent_path() / (out.stem().string() + suffix + ext);
}

}  // namespace

Network network_from_spec(const json& spec, const std::filesystem::path& base_dir) {
  try {
    if (spec.is_string()) {
      std::filesystem::path p = spec.get<std::string>();
      return load_network(p.is_absolute() ? p : base_dir / p);
    }
    if (spec.contains("builder")) return from_builder(spec);
    return network_from_json(spec);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed network specification: ") + e.what());
  }
}

ScenarioConfig parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  try {
    ScenarioConfig cfg{network_from_spec(doc.at("network"), base_dir), {}, 1.0, 2, false, std::nullopt, 1e-10, {}, CurveFormat::Csv, std::nullopt};
    const json& solver = doc.at("solver");
    const std::string kind = solver.is_string() ? solver.get<std::string>() : solver.at("kind").get<std::string>();
    if (kind == "MonteCarlo") {
      cfg.solver = {SolverKind::MonteCarlo, solver.at("n").get<std::uint64_t>(), solver.at("seed").get<std::uint64_t>()};
      if (cfg.solver.n_realizations < 1) throw InvalidArgument("MonteCarlo needs n >= 1");
      if (solver.contains("horizon")) cfg.horizon = solver.at("horizon").get<double>();
    } else if (kind == "Master") {
      cfg.solver = {SolverKind::Master};
    } else if (kind == "ClosedForm") {
      cfg.solver = {SolverKind::ClosedForm};
    } else {
      throw InvalidArgument("unknown solver '" + kind + "'");
    }
    const json& grid = doc.at("grid");
    cfg.t_max = grid.at("t_max").get<double>();
    cfg.n_points = grid.at("n_points").get<Index>();
    if (!(cfg.t_max > 0.0)) throw InvalidArgument("grid.t_max must be positive");
    if (cfg.n_points < 2) throw InvalidArgument("grid.n_points must be at least 2");
    if (doc.contains("comparison")) {
      const json& cmp = doc.at("comparison");
      const json& target = cmp.at("target");
      if (target.is_string() && target.get<std::string>() == "homogeneous_counterpart")
        cfg.compare_with_counterpart = true;
      else
        cfg.target = network_from_spec(target, base_dir);
      cfg.tolerance = cmp.value("tolerance", cfg.tolerance);
    }
    const json& output = doc.at("output");
    std::filesystem::path out = output.at("path").get<std::string>();
    cfg.output = out.is_absolute() ? out : base_dir / out;
    const std::string format = output.value("format", std::string("CSV"));
    if (format == "CSV") cfg.format = CurveFormat::Csv;
    else if (format == "JSON") cfg.format = CurveFormat::Json;
    else throw InvalidArgument("unknown output format '" + format + "'");
    return cfg;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed scenario: ") + e.what());
  }
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InvalidArgument("cannot parse " + path.string() + ": " + e.what());
  }
  return parse_scenario(doc, path.parent_path());
}

AdoptionCurve closed_form_curve(const Network& net, const TimeGrid& grid) {
  AdoptionCurve c;
  c.t = grid.values();
  c.f.resize(grid.size());
  const Matrix q = net.dense_q();
  try {
    if (net.size() == 2) {
      const double p1 = net.p(0), p2 = net.p(1), q12 = q(0, 1), q21 = q(1, 0);
      // Two-node networks with one silent node have a singular general form;
      // (2p, 0) with a single edge of rate 2q is the special pair's het member.
      const bool special = p2 == 0.0 && q21 == 0.0 && p1 > 0.0 && q12 > 0.0;
      const bool mirrored = p1 == 0.0 && q12 == 0.0 && p2 > 0.0 && q21 > 0.0;
      // The homogeneous pair keeps its p = q limit through the special form.
      const bool homogeneous = p1 == p2 && q12 == q21 && p1 > 0.0 && q12 > 0.0;
      for (Index i = 0; i < grid.size(); ++i) {
        if (special) c.f[i] = f_m2_pq_special(grid[i], p1 / 2.0, q12 / 2.0).het;
        else if (mirrored) c.f[i] = f_m2_pq_special(grid[i], p2 / 2.0, q21 / 2.0).het;
        else if (homogeneous) c.f[i] = f_m2_pq_special(grid[i], p1, q12).hom;
        else c.f[i] = f_complete_m2(grid[i], p1, p2, q12, q21);
      }
      return c;
    }
    if (net.size() == 3) {
      const Vector p = net.p();
      for (Index i = 0; i < grid.size(); ++i) c.f[i] = f_complete_m3(grid[i], p, q);
      return c;
    }
  } catch (const SingularCoefficient& e) {
    throw CapabilityError(std::string("closed form is singular for this network (") + e.what() +
                          "); use the Master solver");
  }
  throw CapabilityError("closed forms exist only for m = 2 and m = 3, got m = " + std::to_string(net.size()));
}

AdoptionCurve solve_with(const Network& net, const TimeGrid& grid, const SolverChoice& solver,
                         std::optional<double> horizon) {
  switch (solver.kind) {
    case SolverKind::MonteCarlo: {
      MonteCarloOptions opt;
      opt.horizon = horizon;
      return estimate_adoption_curve(net, grid, solver.n_realizations, solver.seed, opt);
    }
    case SolverKind::Master:
      return solve_master(net, grid);
    case SolverKind::ClosedForm:
      return closed_form_curve(net, grid);
  }
  throw InvalidArgument("unknown solver");
}

json verdict_to_json(const DominanceVerdict& verdict) {
  json doc;
  doc["verdict"] = to_string(verdict.kind);
  doc["tolerance"] = verdict.tolerance;
  doc["strict"] = verdict.strict;
  doc["statistical_margin"] = verdict.statistical;
  auto crossings = json::array();
  for (const auto& c : verdict.crossings) crossings.push_back({{"series", c.series}, {"lo", c.lo}, {"hi", c.hi}});
  doc["crossings"] = std::move(crossings);
  return doc;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  const TimeGrid grid = TimeGrid::uniform(cfg.t_max, cfg.n_points);
  ScenarioResult result{solve_with(cfg.network, grid, cfg.solver, cfg.horizon), std::nullopt, std::nullopt, {}};
  if (!cfg.output.parent_path().empty()) std::filesystem::create_directories(cfg.output.parent_path());
  write_curve(result.curve, cfg.output, cfg.format);
  result.files.push_back(cfg.output);

  std::optional<Network> target = cfg.target;
  if (cfg.compare_with_counterpart) target = homogeneous_counterpart(cfg.network);
  if (target) {
    result.target_curve = solve_with(*target, grid, cfg.solver, cfg.horizon);
    result.verdict = compare_adoption_curves(result.curve, *result.target_curve, cfg.tolerance);
    const std::string ext = cfg.format == CurveFormat::Csv ? ".csv" : ".json";
    const auto target_path = sibling(cfg.output, "_target", ext);
    write_curve(*result.target_curve, target_path, cfg.format);
    const auto verdict_path = sibling(cfg.output, "_verdict", ".json");
    write_json(verdict_to_json(*result.verdict), verdict_path);
    result.files.push_back(target_path);
    result.files.push_back(verdict_path);
  }
  return result;
}

}  // namespace bassnet
