#include "bassnet/closedform.hpp"
#include "bassnet/gillespie.hpp"
#include "bassnet/master.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace bassnet;
using testing_support::sup_diff;

TEST_CASE("first adoption time is exponential with rate sum p") {
  const double p = 0.1;
  const Network net = build_complete({Vector::Constant(3, p), Vector::Constant(3, 0.4)});
  constexpr int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < n; ++r) {
    const auto rec = simulate_realization(net, 11, std::nullopt, static_cast<std::uint64_t>(r));
    REQUIRE(rec.adoption_times.size() == 3);
    const double t1 = rec.adoption_times.front();
    sum += t1;
    sum_sq += t1 * t1;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / n);
  CHECK(std::abs(mean - 1.0 / (3.0 * p)) < 3.0 * se);
}

TEST_CASE("realization records") {
  SUBCASE("times are nondecreasing and every node adopts once") {
    std::mt19937_64 rng(5);
    const Network net = testing_support::random_network(rng, 7);
    const auto rec = simulate_realization(net, 3);
    CHECK(rec.adoption_times.size() == 7);
    CHECK(std::is_sorted(rec.adoption_times.begin(), rec.adoption_times.end()));
    auto ids = rec.adopter_ids;
    std::sort(ids.begin(), ids.end());
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
    CHECK_FALSE(rec.truncated);
  }
  SUBCASE("zero total rate truncates immediately") {
    const std::vector<Edge> edges{{0, 1, 0.3}, {1, 0, 0.3}};
    const Network net = build_custom(Vector::Zero(2), edges);
    const auto rec = simulate_realization(net, 1);
    CHECK(rec.adoption_times.empty());
    CHECK(rec.truncated);
  }
  SUBCASE("horizon cuts the trajectory") {
    const Network net = build_complete({Vector::Constant(5, 0.01), Vector::Constant(5, 0.1)});
    const auto rec = simulate_realization(net, 1, 1e-3);
    CHECK(rec.truncated);
    for (double t : rec.adoption_times) CHECK(t <= 1e-3);
  }
  SUBCASE("identical seeds give identical records") {
    const Network net = build_cartesian_torus(2, 4, 0.1, 0.4);
    const auto a = simulate_realization(net, 99, std::nullopt, 4);
    const auto b = simulate_realization(net, 99, std::nullopt, 4);
    CHECK(a.adoption_times == b.adoption_times);
    CHECK(a.adopter_ids == b.adopter_ids);
  }
}

TEST_CASE("estimator determinism") {
  const Network net = build_complete({Vector::LinSpaced(6, 0.05, 0.3), Vector::LinSpaced(6, 0.2, 0.5)});
  const TimeGrid grid = TimeGrid::uniform(10.0, 21);
  MonteCarloOptions one;
  one.threads = 1;
  MonteCarloOptions four;
  four.threads = 4;
  const AdoptionCurve a = estimate_adoption_curve(net, grid, 2000, 17, one);
  const AdoptionCurve b = estimate_adoption_curve(net, grid, 2000, 17, four);
  const AdoptionCurve c = estimate_adoption_curve(net, grid, 2000, 17, one);
  CHECK((a.f.array() == b.f.array()).all());
  CHECK((a.ci_half_width->array() == b.ci_half_width->array()).all());
  CHECK((a.f.array() == c.f.array()).all());
  CHECK(a.n_realizations == 2000u);
  validate_curve(a);
}

TEST_CASE("single realization is a step function") {
  const Network net = build_complete({Vector::Constant(5, 0.1), Vector::Constant(5, 0.4)});
  const AdoptionCurve c = estimate_adoption_curve(net, TimeGrid::uniform(20.0, 41), 1, 3);
  CHECK_FALSE(c.ci_half_width.has_value());
  for (Index i = 0; i < c.size(); ++i) {
    const double k = c.f[i] * 5.0;
    CHECK(std::abs(k - std::round(k)) < 1e-12);
    if (i > 0) CHECK(c.f[i] >= c.f[i - 1]);
  }
}

TEST_CASE("large homogeneous network tracks the compartmental curve") {
  const Network net = build_complete({Vector::Constant(1000, 0.01), Vector::Constant(1000, 0.4)});
  const TimeGrid grid = TimeGrid::uniform(25.0, 26);
  const AdoptionCurve c = estimate_adoption_curve(net, grid, 300, 2);
  for (Index i = 0; i < grid.size(); ++i) CHECK(std::abs(c.f[i] - bass_formula(grid[i], 0.01, 0.4)) < 0.02);
}

TEST_CASE("random custom network matches the master equations") {
  std::mt19937_64 rng(21);
  const Network net = testing_support::random_network(rng, 5);
  const TimeGrid grid = TimeGrid::uniform(15.0, 31);
  const AdoptionCurve mc = estimate_adoption_curve(net, grid, 100000, 8);
  const AdoptionCurve exact = solve_general_master(net, grid).curve;
  const double max_ci = mc.ci_half_width->maxCoeff();
  CHECK(sup_diff(mc.f, exact.f) <= 3.0 * max_ci);
}

TEST_CASE("empirical inter-adoption CDFs") {
  const double p = 0.1, q = 0.3;
  const Network net = build_complete({Vector::Constant(4, p), Vector::Constant(4, q)});
  const TimeGrid tau = TimeGrid::uniform(6.0, 13);
  const EmpiricalCdfSet set = estimate_interadoption_cdfs(net, tau, 100000, 4);
  REQUIRE(set.F.rows() == 4);
  CHECK(set.samples[2] == 100000u);
  const Index at2 = 4;  // tau = 2
  CHECK(std::abs(set.F(2, at2) - interadoption_cdf_hom_complete<double>(4, p, q, 3, 2.0)) <= 0.01);
  for (Index k = 0; k < 4; ++k)
    for (Index i = 0; i < tau.size(); ++i)
      CHECK(std::abs(set.F(k, i) - interadoption_cdf_hom_complete<double>(4, p, q, k + 1, tau[i])) < 0.01);
}
