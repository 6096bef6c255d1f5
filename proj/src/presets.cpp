#include "bassnet/presets.hpp"

#include "bassnet/closedform.hpp"
#include "bassnet/curve_io.hpp"
#include "bassnet/dominance.hpp"
#include "bassnet/experiments.hpp"
#include "bassnet/gillespie.hpp"
#include "bassnet/initial.hpp"
#include "bassnet/master.hpp"
#include "bassnet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace bassnet {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Monte-Carlo curves are compared with exact ones by the largest standardized
// deviation over the grid. 4.5 keeps the family-wise false-alarm rate small
// for a few hundred correlated grid points.
constexpr double kMaxZ = 4.5;
constexpr std::uint64_t kRealizations = 10000;

class Context {
 public:
  Context(std::string name, std::uint64_t seed, fs::path dir) : dir_(std::move(dir)) {
    report_.name = std::move(name);
    report_.seed = seed;
    fs::create_directories(dir_);
  }

  void curve(const std::string& name, const AdoptionCurve& c) {
    const fs::path path = dir_ / (name + ".csv");
    write_curve_csv(c, path);
    report_.files.push_back(path);
  }

  void check(std::string name, bool ok, std::string detail) {
    report_.assertions.push_back({std::move(name), ok, std::move(detail)});
  }

  json& data() { return data_; }

  PresetReport finish() {
    json asserts = json::array();
    for (const auto& a : report_.assertions)
      asserts.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
    report_.summary = {{"preset", report_.name},
                       {"seed", report_.seed},
                       {"passed", report_.passed()},
                       {"assertions", asserts},
                       {"data", data_}};
    json files = json::array();
    for (const auto& f : report_.files) files.push_back(f.filename().string());
    report_.summary["files"] = files;
    const fs::path summary = dir_ / "summary.json";
    write_json(report_.summary, summary);
    report_.files.push_back(summary);
    return report_;
  }

 private:
  fs::path dir_;
  PresetReport report_;
  json data_ = json::object();
};

std::string str(double x) { return format_double(x); }

AdoptionCurve tabulate(const TimeGrid& grid, const std::function<double(double)>& f) {
  AdoptionCurve c;
  c.t = grid.values();
  c.f.resize(grid.size());
  for (Index i = 0; i < grid.size(); ++i) c.f[i] = f(grid[i]);
  return c;
}

// Largest |mc - exact| / SE, with the SE floored at one count.
double max_z(const AdoptionCurve& mc, const AdoptionCurve& exact, Index m) {
  const Vector se = standard_error(mc);
  const double floor = 1.0 / (static_cast<double>(mc.n_realizations.value_or(1)) * static_cast<double>(m));
  double z = 0.0;
  for (Index i = 0; i < mc.size(); ++i) z = std::max(z, std::abs(mc.f[i] - exact.f[i]) / std::max(se[i], floor));
  return z;
}

void check_mc(Context& ctx, const std::string& what, const AdoptionCurve& mc, const AdoptionCurve& exact, Index m) {
  const double z = max_z(mc, exact, m);
  ctx.check(what + "_mc_matches_exact", z <= kMaxZ, "max |mc - exact| / SE = " + str(z) + " (limit 4.5)");
}

bool strictly_below(const AdoptionCurve& a, const AdoptionCurve& b) {
  for (Index i = 1; i < a.size(); ++i)
    if (!(a.f[i] < b.f[i])) return false;
  return true;
}

void check_saturation(Context& ctx, const std::vector<const AdoptionCurve*>& curves) {
  double slowest = 1.0;
  for (const auto* c : curves) slowest = std::min(slowest, c->f[c->size() - 1]);
  ctx.check("t_max_reaches_saturation", slowest > 0.95, "slowest curve at t_max: " + str(slowest));
}

// ---------------------------------------------------------------------------

PresetReport fig_m2pq(std::uint64_t seed, const fs::path& dir) {
  Context ctx("fig_m2pq", seed, dir);
  constexpr double q = 0.2;
  const std::vector<std::pair<std::string, double>> panels{{"A", q / 2.0}, {"B", q}, {"C", 2.0 * q}};
  for (const auto& entry : panels) {
    const std::string& panel = entry.first;
    const double p = entry.second;
    auto het = [p](double t) { return f_m2_pq_special(t, p, q).het; };
    auto hom = [p](double t) { return f_m2_pq_special(t, p, q).hom; };
    const double t_max = time_to_reach([&](double t) { return std::min(het(t), hom(t)); }, 0.95);
    const TimeGrid grid = TimeGrid::uniform(t_max, 200);
    const AdoptionCurve c_het = tabulate(grid, het), c_hom = tabulate(grid, hom);
    ctx.curve("panel" + panel + "_het_closed", c_het);
    ctx.curve("panel" + panel + "_hom_closed", c_hom);

    const Network net_hom = build_complete({Vector::Constant(2, p), Vector::Constant(2, q)});
    const std::vector<Edge> edge{{0, 1, 2.0 * q}};
    const Network net_het = build_custom((Vector(2) << 2.0 * p, 0.0).finished(), edge);
    const AdoptionCurve mc_hom = estimate_adoption_curve(net_hom, grid, kRealizations, seed);
    const AdoptionCurve mc_het = estimate_adoption_curve(net_het, grid, kRealizations, seed);
    ctx.curve("panel" + panel + "_hom_mc", mc_hom);
    ctx.curve("panel" + panel + "_het_mc", mc_het);

    const auto verdict = compare_adoption_curves(c_hom, c_het, 1e-12);
    const char* expected = p < q ? "FirstBelow" : (p == q ? "Equal" : "SecondBelow");
    ctx.check("panel" + panel + "_sign", to_string(verdict.kind) == std::string(expected),
              std::string("hom vs het verdict ") + to_string(verdict.kind) + ", expected " + expected);
    check_mc(ctx, "panel" + panel + "_hom", mc_hom, c_hom, 2);
    check_mc(ctx, "panel" + panel + "_het", mc_het, c_het, 2);
    json& row = ctx.data()["panel" + panel];
    row["p"] = p;
    row["q"] = q;
    row["t_max"] = t_max;
    row["verdict"] = to_string(verdict.kind);
  }
  return ctx.finish();
}

PresetReport fig_abc_counter(std::uint64_t seed, const fs::path& dir) {
  Context ctx("fig_abc_counter", seed, dir);
  const double p = 0.05, q = 0.15, dp = 0.15;
  const TimeGrid grid = TimeGrid::uniform(60.0, 601);
  const Network a = build_complete({Vector::Constant(2, p), Vector::Constant(2, q)});
  const std::vector<Edge> edge{{0, 1, 2.0 * q}};
  const Network b = build_custom((Vector(2) << 2.0 * p, 0.0).finished(), edge);
  const Network a2 = shift_p(a, dp), b2 = shift_p(b, dp);

  const AdoptionCurve fa = closed_form_curve(a, grid), fb = closed_form_curve(b, grid);
  const AdoptionCurve fa2 = closed_form_curve(a2, grid), fb2 = closed_form_curve(b2, grid);
  ctx.curve("A", fa);
  ctx.curve("B", fb);
  ctx.curve("A_shifted", fa2);
  ctx.curve("B_shifted", fb2);

  double master_gap = 0.0;
  for (const auto* pair : {&a, &b, &a2, &b2}) {
    const AdoptionCurve exact = solve_general_master(*pair, grid, {.backend = MasterBackend::Numeric}).curve;
    const AdoptionCurve closed = closed_form_curve(*pair, grid);
    master_gap = std::max(master_gap, (exact.f - closed.f).cwiseAbs().maxCoeff());
  }
  ctx.check("closed_forms_match_master", master_gap <= 1e-8, "sup gap " + str(master_gap));

  const auto base = compare_adoption_curves(fa, fb, 1e-12);
  ctx.check("A_below_B", base.kind == DominanceVerdict::Kind::FirstBelow && base.strict,
            std::string("verdict ") + to_string(base.kind));
  const auto shifted = compare_adoption_curves(fa2, fb2, 1e-12);
  const bool one_flip = shifted.kind == DominanceVerdict::Kind::Crossing && shifted.crossings.size() == 1;
  const bool negative_first = fa2.f[1] < fb2.f[1] && fa2.f[grid.size() - 1] > fb2.f[grid.size() - 1];
  std::ostringstream detail;
  detail << "verdict " << to_string(shifted.kind) << ", " << shifted.crossings.size() << " sign change(s)";
  if (!shifted.crossings.empty())
    detail << ", first in [" << shifted.crossings.front().lo << ", " << shifted.crossings.front().hi << "]";
  ctx.check("shifted_single_crossing", one_flip && negative_first, detail.str());
  check_saturation(ctx, {&fa, &fb, &fa2, &fb2});
  json crossings = json::array();
  for (const auto& c : shifted.crossings) crossings.push_back({c.lo, c.hi});
  ctx.data() = {{"p", p}, {"q", q}, {"delta_p", dp}, {"crossings", crossings}};
  return ctx.finish();
}

PresetReport fig_order(std::uint64_t seed, const fs::path& dir) {
  Context ctx("fig_order", seed, dir);
  const double p1 = 0.4, p2 = 0.1, q = 0.2;
  const Index m = 1000;
  const double t_max =
      time_to_reach([&](double t) { return 0.5 * (f_1d(t, p1, q) + f_1d(t, p2, q)); }, 0.95);
  const TimeGrid grid = TimeGrid::uniform(t_max, 61);
  const PlacementCurves limit = solve_block_and_alternating_circles(grid, p1, p2, q);
  ctx.curve("A_limit", limit.block);
  ctx.curve("B_limit", limit.alternating);
  const auto verdict = compare_adoption_curves(limit.block, limit.alternating, 0.0);
  ctx.check("limit_A_below_B", strictly_below(limit.block, limit.alternating),
            std::string("verdict ") + to_string(verdict.kind));

  const Network a = block_circle(m, p1, p2, q), b = alternating_circle(m, p1, p2, q);
  const AdoptionCurve mc_a = estimate_adoption_curve(a, grid, kRealizations, seed);
  const AdoptionCurve mc_b = estimate_adoption_curve(b, grid, kRealizations, seed);
  ctx.curve("A_mc", mc_a);
  ctx.curve("B_mc", mc_b);
  const AdoptionCurve exact_a = solve_onesided_circle(a, grid), exact_b = solve_onesided_circle(b, grid);
  ctx.curve("A_finite_exact", exact_a);
  ctx.curve("B_finite_exact", exact_b);
  check_mc(ctx, "A", mc_a, exact_a, m);
  check_mc(ctx, "B", mc_b, exact_b, m);
  check_saturation(ctx, {&limit.block, &limit.alternating});
  ctx.data() = {{"m", m},
                {"t_max", t_max},
                {"finite_vs_limit_A", (exact_a.f - limit.block.f).cwiseAbs().maxCoeff()},
                {"finite_vs_limit_B", (exact_b.f - limit.alternating.f).cwiseAbs().maxCoeff()},
                {"mc_vs_limit_z_A", max_z(mc_a, limit.block, m)},
                {"mc_vs_limit_z_B", max_z(mc_b, limit.alternating, m)}};
  return ctx.finish();
}

// Ordering of two Monte-Carlo curves: never significantly reversed, and
// significantly ordered on at least half of the interior grid points.
std::pair<bool, std::string> statistically_below(const AdoptionCurve& lo, const AdoptionCurve& hi) {
  const Vector se = (standard_error(lo).array().square() + standard_error(hi).array().square()).sqrt();
  Index reversed = 0, separated = 0;
  const Index interior = lo.size() - 1;
  for (Index i = 1; i < lo.size(); ++i) {
    const double d = hi.f[i] - lo.f[i];
    if (d < -3.0 * se[i]) ++reversed;
    if (d > 3.0 * se[i]) ++separated;
  }
  std::ostringstream s;
  s << separated << "/" << interior << " points separated by > 3 SE, " << reversed << " reversed";
  return {reversed == 0 && 2 * separated >= interior, s.str()};
}

PresetReport fig_order_m3(std::uint64_t seed, const fs::path& dir) {
  Context ctx("fig_order_m3", seed, dir);
  const std::array<double, 3> p{0.5, 0.2, 0.01};
  const double q = 0.2;
  const Index m = 900;
  // Block placement is the slowest; its infinite-circle limit sets the horizon.
  const double t_max = time_to_reach(
      [&](double t) { return (f_1d(t, p[0], q) + f_1d(t, p[1], q) + f_1d(t, p[2], q)) / 3.0; }, 0.95);
  const TimeGrid grid = TimeGrid::uniform(t_max, 61);
  const Network a = three_block_circle(m, p, q);
  const Network b = three_cyclic_circle(m, p, q);
  const Network c = three_cyclic_circle(m, {p[0], p[2], p[1]}, q);
  std::map<std::string, std::pair<AdoptionCurve, AdoptionCurve>> curves;
  for (const auto& [name, net] : {std::pair<std::string, const Network*>{"A", &a}, {"B", &b}, {"C", &c}}) {
    AdoptionCurve exact = solve_onesided_circle(*net, grid);
    AdoptionCurve mc = estimate_adoption_curve(*net, grid, kRealizations, seed);
    ctx.curve(name + "_finite_exact", exact);
    ctx.curve(name + "_mc", mc);
    check_mc(ctx, name, mc, exact, m);
    curves.emplace(name, std::make_pair(std::move(exact), std::move(mc)));
  }
  const auto& [ea, ma] = curves.at("A");
  const auto& [eb, mb] = curves.at("B");
  const auto& [ec, mc] = curves.at("C");
  ctx.check("exact_A_below_B", strictly_below(ea, eb), "finite-circle master solution");
  ctx.check("exact_B_below_C", strictly_below(eb, ec), "finite-circle master solution");
  const auto ab = statistically_below(ma, mb);
  const auto bc = statistically_below(mb, mc);
  ctx.check("mc_A_below_B", ab.first, ab.second);
  ctx.check("mc_B_below_C", bc.first, bc.second);
  check_saturation(ctx, {&ea, &eb, &ec});
  ctx.data() = {{"m", m}, {"t_max", t_max}, {"p", p}, {"q", q}};
  return ctx.finish();
}

PresetReport fig_variance(std::uint64_t seed, const fs::path& dir) {
  Context ctx("fig_variance", seed, dir);
  const VarianceStudyConfig cfg;
  const VarianceStudy study = run_variance_study(cfg, seed);
  json points = json::array();
  for (std::size_t i = 0; i < cfg.eps.size(); ++i) {
    std::ostringstream name;
    name << "eps_" << static_cast<int>(std::lround(cfg.eps[i] * 100));
    ctx.curve(name.str(), study.curves[i]);
    points.push_back({{"eps", cfg.eps[i]}, {"f", study.f_eval[i]}, {"se", study.se_eval[i]}});
  }
  std::vector<const AdoptionCurve*> all;
  for (const auto& c : study.curves) all.push_back(&c);
  const double bass_gap = [&] {
    double g = 0.0;
    for (Index i = 0; i < study.curves.front().size(); ++i)
      g = std::max(g, std::abs(study.curves.front().f[i] - bass_formula(study.curves.front().t[i], cfg.p, cfg.q)));
    return g;
  }();
  ctx.check("quadratic_coefficient_negative", study.c2 < 0.0, "c2 = " + str(study.c2));
  ctx.check("quadratic_coefficient_magnitude", study.c2 <= -0.03616 && study.c2 >= -3.616,
            "c2 = " + str(study.c2) + ", expected within a factor 10 of -0.3616");
  ctx.check("eps_squared_scaling", std::abs(study.loglog.slope - 2.0) <= 0.3,
            "log-log slope " + str(study.loglog.slope));
  check_saturation(ctx, all);
  ctx.data() = {{"t_eval", cfg.t_eval},
                {"points", points},
                {"c0", study.c0},
                {"c2", study.c2},
                {"loglog_slope", study.loglog.slope},
                {"h_clip", cfg.h_clip},
                {"homogeneous_vs_bass_sup", bass_gap}};
  return ctx.finish();
}

PresetReport dim_dominance(std::uint64_t seed, const fs::path& dir) {
  Context ctx("dim_dominance", seed, dir);
  const double p = 0.1, q = 0.4;
  const double limit = cartesian_d3_limit(p, q);
  json rows = json::array();
  bool increasing = true, below = true, gap_ok = true, lattice_ok = true;
  double prev = -std::numeric_limits<double>::infinity();
  std::ostringstream lattice_detail;
  for (int d = 1; d <= 5; ++d) {
    const double d3 = *derivatives_cartesian(d, p, q).d3;
    increasing = increasing && d3 > prev;
    below = below && d3 < limit;
    gap_ok = gap_ok && (limit - d3) <= q * q * p / d * (1.0 + 1e-12);
    prev = d3;
    // Exact derivative of a finite periodic lattice; side 5 avoids wrap-around up to third order.
    const int side = d <= 2 ? 7 : 5;
    const auto exact = master_initial_derivatives(build_cartesian_torus(d, side, p, q), 3);
    const double rel = std::abs(exact[2] - d3) / std::abs(d3);
    lattice_ok = lattice_ok && rel <= 1e-10;
    lattice_detail << "D=" << d << " rel " << rel << "; ";
    rows.push_back({{"D", d}, {"d3", d3}, {"torus_side", side}, {"torus_d3", exact[2]}});
  }
  ctx.check("d3_strictly_increasing", increasing, "D = 1..5");
  ctx.check("d3_below_complete_limit", below, "limit " + str(limit));
  ctx.check("gap_within_q2p_over_D", gap_ok, "limit - d3(D) <= q^2 p / D");
  ctx.check("torus_recursion_matches_formula", lattice_ok, lattice_detail.str());
  ctx.data() = {{"p", p}, {"q", q}, {"d3", rows}, {"limit", limit}};
  return ctx.finish();
}

PresetReport circle_equivalence(std::uint64_t seed, const fs::path& dir) {
  Context ctx("circle_equivalence", seed, dir);
  const double p = 0.1, q = 0.4, ql = 0.15, qr = 0.25;
  const TimeGrid grid = TimeGrid::uniform(40.0, 81);
  double worst = 0.0, worst_general = 0.0;
  json rows = json::array();
  for (Index m = 3; m <= 10; ++m) {
    const Network one = build_one_sided_circle(Vector::Constant(m, p), Vector::Constant(m, q));
    const Network two = build_two_sided_circle(Vector::Constant(m, p), Vector::Constant(m, ql), Vector::Constant(m, qr));
    const AdoptionCurve f1 = solve_onesided_circle(one, grid), f2 = solve_twosided_circle(two, grid);
    const AdoptionCurve fg = solve_general_master(two, grid, {.backend = MasterBackend::Numeric}).curve;
    const double gap = (f1.f - f2.f).cwiseAbs().maxCoeff();
    const double gap_general = (f2.f - fg.f).cwiseAbs().maxCoeff();
    worst = std::max(worst, gap);
    worst_general = std::max(worst_general, gap_general);
    ctx.curve("one_sided_m" + std::to_string(m), f1);
    ctx.curve("two_sided_m" + std::to_string(m), f2);
    rows.push_back({{"m", m}, {"one_vs_two", gap}, {"two_vs_general", gap_general}});
    if (m == 3) check_saturation(ctx, {&f1});
  }
  ctx.check("homogeneous_one_equals_two_sided", worst <= 1e-8, "sup gap " + str(worst));
  ctx.check("two_sided_matches_general_master", worst_general <= 1e-8, "sup gap " + str(worst_general));

  const Vector p3 = (Vector(3) << p, 0.0, 0.0).finished();
  // Node 1 influences node 3 and back; node 2 is isolated.
  const Network net1 = build_two_sided_circle(p3, (Vector(3) << q, 0.0, 0.0).finished(),
                                              (Vector(3) << 0.0, 0.0, q).finished(), ZeroHazardPolicy::Allow);
  // Nodes 2 and 3 influence each other; node 1 only adopts externally.
  const Network net2 = build_two_sided_circle(p3, (Vector(3) << 0.0, 0.0, q).finished(),
                                              (Vector(3) << 0.0, q, 0.0).finished(), ZeroHazardPolicy::Allow);
  const AdoptionCurve two1 = solve_twosided_circle(net1, grid);
  const AdoptionCurve one1 = solve_onesided_circle(convert_two_sided_to_one_sided(net1), grid);
  const AdoptionCurve two2 = solve_twosided_circle(net2, grid);
  const AdoptionCurve one2 = solve_onesided_circle(convert_two_sided_to_one_sided(net2), grid);
  ctx.curve("network1_two_sided", two1);
  ctx.curve("network1_one_sided", one1);
  ctx.curve("network2_two_sided", two2);
  ctx.curve("network2_one_sided", one2);
  ctx.check("network1_two_sided_above", strictly_below(one1, two1), "every interior grid point");
  ctx.check("network2_two_sided_below", strictly_below(two2, one2), "every interior grid point");
  ctx.data() = {{"p", p}, {"q", q}, {"q_left", ql}, {"q_right", qr}, {"homogeneous", rows}};
  return ctx.finish();
}

using PresetFn = PresetReport (*)(std::uint64_t, const fs::path&);

const std::vector<std::pair<std::string, PresetFn>>& registry() {
  static const std::vector<std::pair<std::string, PresetFn>> r{
      {"fig_m2pq", fig_m2pq},         {"fig_abc_counter", fig_abc_counter}, {"fig_order", fig_order},
      {"fig_order_m3", fig_order_m3}, {"fig_variance", fig_variance},       {"dim_dominance", dim_dominance},
      {"circle_equivalence", circle_equivalence}};
  return r;
}

}  // namespace

bool PresetReport::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const PresetAssertion& a) { return a.passed; });
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

PresetReport run_preset(std::string_view name, std::uint64_t seed, const fs::path& out_dir) {
  for (const auto& [n, fn] : registry())
    if (n == name) return fn(seed, out_dir);
  throw InvalidArgument("unknown preset '" + std::string(name) + "'");
}

}  // namespace bassnet
