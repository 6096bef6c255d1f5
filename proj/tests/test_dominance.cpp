#include "bassnet/closedform.hpp"
#include "bassnet/dominance.hpp"
#include "bassnet/gillespie.hpp"
#include "bassnet/master.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace bassnet;
using Kind = DominanceVerdict::Kind;

namespace {

Network special_b(double p, double q) {
  const std::vector<Edge> edge{{0, 1, 2.0 * q}};
  return build_custom((Vector(2) << 2.0 * p, 0.0).finished(), edge);
}

AdoptionCurve exact_curve(const TimeGrid& grid, const Network& net) { return solve_general_master(net, grid).curve; }

// F_a < F_b at every positive tau for every step k >= 2.
bool strictly_below_from_step_two(const std::vector<CdfCurve>& a, const std::vector<CdfCurve>& b) {
  for (std::size_t k = 1; k < a.size(); ++k)
    for (Index i = 0; i < a[k].tau.size(); ++i)
      if (a[k].tau[i] > 0.0 && !(a[k].F[i] < b[k].F[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("nodewise and edgewise ordering") {
  const Network a = build_complete({Vector::Constant(3, 0.1), Vector::Constant(3, 0.4)});
  CHECK(nodewise_edgewise_compare(a, a) == NetworkOrder::Equal);

  auto edges = a.edges();
  edges.front().rate += 0.1;
  const Network b(a.p(), edges, {StructureKind::Custom});
  CHECK(nodewise_edgewise_compare(a, b) == NetworkOrder::FirstBelow);
  CHECK(nodewise_edgewise_compare(b, a) == NetworkOrder::SecondBelow);

  Vector pa = a.p(), pb = a.p();
  pa[0] += 0.05;
  pb[1] += 0.05;
  const Network ca(pa, a.edges(), {StructureKind::Custom}), cb(pb, a.edges(), {StructureKind::Custom});
  CHECK(nodewise_edgewise_compare(ca, cb) == NetworkOrder::Incomparable);
  CHECK(std::string(to_string(NetworkOrder::Incomparable)) == "Incomparable");
}

TEST_CASE("brute-force inter-adoption CDFs") {
  const TimeGrid tau = TimeGrid::uniform(10.0, 41);
  SUBCASE("two-node single-edge network: second step at rate 2q") {
    const double p = 0.1, q = 0.2;
    const auto cdfs = bruteforce_interadoption_cdfs(special_b(p, q), tau);
    REQUIRE(cdfs.size() == 2);
    for (Index i = 0; i < tau.size(); ++i) {
      CHECK(cdfs[0].F[i] == doctest::Approx(-std::expm1(-2.0 * p * tau[i])));
      CHECK(cdfs[1].F[i] == doctest::Approx(-std::expm1(-2.0 * q * tau[i])));
    }
  }
  SUBCASE("homogeneous complete network matches the closed form") {
    const double p = 0.1, q = 0.3;
    const auto cdfs = bruteforce_interadoption_cdfs(build_complete({Vector::Constant(4, p), Vector::Constant(4, q)}), tau);
    for (Index k = 0; k < 4; ++k)
      for (Index i = 0; i < tau.size(); ++i)
        CHECK(std::abs(cdfs[static_cast<std::size_t>(k)].F[i] -
                       interadoption_cdf_hom_complete<double>(4, p, q, k + 1, tau[i])) < 1e-12);
  }
  SUBCASE("first step is shared with the homogeneous counterpart") {
    const Network het = build_complete({(Vector(4) << 0.05, 0.1, 0.2, 0.3).finished(),
                                        (Vector(4) << 0.2, 0.3, 0.4, 0.5).finished()});
    const auto a = bruteforce_interadoption_cdfs(het, tau);
    const auto b = bruteforce_interadoption_cdfs(homogeneous_counterpart(het), tau);
    CHECK((a[0].F - b[0].F).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("mixture weights are probabilities") {
    std::mt19937_64 rng(6);
    const auto mixtures = interadoption_mixtures(testing_support::random_network(rng, 6));
    for (const auto& mix : mixtures) {
      double total = 0.0;
      for (double w : mix.weight) total += w;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("agreement with simulation") {
    std::mt19937_64 rng(12);
    const Network net = testing_support::random_network(rng, 5);
    const auto brute = bruteforce_interadoption_cdfs(net, tau);
    const auto emp = empirical_cdf_curves(estimate_interadoption_cdfs(net, tau, 100000, 5));
    REQUIRE(emp.size() == brute.size());
    for (std::size_t k = 0; k < brute.size(); ++k) CHECK((brute[k].F - emp[k].F).cwiseAbs().maxCoeff() <= 0.01);
    CHECK(check_cdf_dominance(brute, emp, 1e-12).statistical);
  }
  SUBCASE("cap") { CHECK_THROWS_AS((void)interadoption_mixtures(build_cartesian_torus(1, 5, 0.1, 0.4), 4), CapabilityError); }
}

TEST_CASE("first adopter weights") {
  const Vector p = (Vector(3) << 0.1, 0.3, 0.6).finished();
  const Network net = build_complete({p, Vector::Constant(3, 0.2)});
  CHECK((first_adopter_weights(net) - p).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS((void)first_adopter_weights(build_complete({Vector::Zero(3), Vector::Constant(3, 0.2)})),
                  InvalidArgument);
}

TEST_CASE("heterogeneity slows the inter-adoption steps") {
  const TimeGrid tau = TimeGrid::uniform(30.0, 61);
  std::mt19937_64 rng(99);
  for (Index m = 3; m <= 6; ++m) {
    CAPTURE(m);
    const Network p_het = build_complete({testing_support::random_vector(rng, m, 0.01, 0.3), Vector::Constant(m, 0.4)});
    const Network q_het = build_complete({Vector::Constant(m, 0.1), testing_support::random_vector(rng, m, 0.1, 0.7)});
    Vector pp = testing_support::random_vector(rng, m, 0.01, 0.3), qq = testing_support::random_vector(rng, m, 0.1, 0.7);
    std::sort(pp.begin(), pp.end());
    std::sort(qq.begin(), qq.end());
    const Network pq_het = build_complete({pp, qq});
    for (const Network* net : {&p_het, &q_het, &pq_het}) {
      const auto a = bruteforce_interadoption_cdfs(*net, tau);
      const auto b = bruteforce_interadoption_cdfs(homogeneous_counterpart(*net), tau);
      const auto v = check_cdf_dominance(a, b, 1e-12);
      CHECK(v.kind == Kind::FirstBelow);
      CHECK(v.strict);
      CHECK(strictly_below_from_step_two(a, b));
    }
  }
}

TEST_CASE("adoption curve comparison") {
  const TimeGrid grid = TimeGrid::uniform(40.0, 81);
  SUBCASE("identical curves are Equal") {
    const auto c = exact_curve(grid, special_b(0.1, 0.2));
    CHECK(compare_adoption_curves(c, c, 1e-12).kind == Kind::Equal);
  }
  SUBCASE("heterogeneous curve is above when q exceeds p") {
    const Network b = special_b(0.1, 0.2);
    const auto v = compare_adoption_curves(exact_curve(grid, homogeneous_counterpart(b)), exact_curve(grid, b), 1e-12);
    CHECK(v.kind == Kind::FirstBelow);
    CHECK(v.strict);
    CHECK_FALSE(v.statistical);
  }
  SUBCASE("shifted pair crosses once") {
    const double p = 0.05, q = 0.15, dp = 0.15;
    const Network a = build_complete({Vector::Constant(2, p), Vector::Constant(2, q)});
    const Network b = special_b(p, q);
    const TimeGrid fine = TimeGrid::uniform(60.0, 601);
    const auto v = compare_adoption_curves(exact_curve(fine, shift_p(a, dp)), exact_curve(fine, shift_p(b, dp)), 1e-12);
    REQUIRE(v.kind == Kind::Crossing);
    REQUIRE(v.crossings.size() == 1);
    CHECK(v.crossings[0].lo > 0.0);
    // A' - B' is negative first.
    const auto fa = exact_curve(fine, shift_p(a, dp)), fb = exact_curve(fine, shift_p(b, dp));
    CHECK(fa.f[1] < fb.f[1]);
    CHECK(fa.f[fine.size() - 2] > fb.f[fine.size() - 2]);
  }
  SUBCASE("Monte Carlo noise widens the margin") {
    const Network net = build_complete({Vector::Constant(4, 0.1), Vector::Constant(4, 0.4)});
    const auto mc1 = estimate_adoption_curve(net, grid, 2000, 1);
    const auto mc2 = estimate_adoption_curve(net, grid, 2000, 2);
    const auto v = compare_adoption_curves(mc1, mc2, 1e-12);
    CHECK(v.statistical);
    CHECK(v.kind == Kind::Equal);
  }
  SUBCASE("grids must match") {
    const auto c1 = exact_curve(grid, special_b(0.1, 0.2));
    const auto c2 = exact_curve(TimeGrid::uniform(20.0, 81), special_b(0.1, 0.2));
    CHECK_THROWS_AS((void)compare_adoption_curves(c1, c2, 1e-12), InvalidArgument);
  }
}
