#include "bassnet/detail/sum_tree.hpp"
#include "bassnet/network.hpp"
#include "bassnet/network_io.hpp"
#include "bassnet/parallel.hpp"
#include "bassnet/rng.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>

using namespace bassnet;
using testing_support::sup_diff;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("complete builder spreads q_j over incoming edges") {
  SUBCASE("m = 2") {
    const Network net = build_complete({vec({0.1, 0.1}), vec({0.4, 0.4})});
    CHECK(net.rate(0, 1) == 0.4);
    CHECK(net.rate(1, 0) == 0.4);
    CHECK(net.rate(0, 0) == 0.0);
    CHECK(net.structure().kind == StructureKind::Complete);
  }
  SUBCASE("m = 3 homogeneous") {
    const Network net = build_complete({Vector::Constant(3, 0.1), Vector::Constant(3, 0.4)});
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j) CHECK(net.rate(i, j) == doctest::Approx(i == j ? 0.0 : 0.2));
    CHECK(is_homogeneous_complete(net));
  }
  SUBCASE("column sums reproduce q_node") {
    const Network net = build_complete({Vector::Constant(4, 0.1), vec({1, 2, 3, 4})});
    const Vector cols = net.dense_q().colwise().sum().transpose();
    CHECK(sup_diff(cols, vec({1, 2, 3, 4})) < 1e-14);
    CHECK(sup_diff(net.in_influences(), cols) < 1e-14);
    CHECK(net.uniform_column_weights().has_value());
  }
  SUBCASE("rejects nonpositive q_node") {
    CHECK_THROWS_AS((void)build_complete({Vector::Constant(3, 0.1), vec({0.4, 0.0, 0.4})}), InvalidArgument);
  }
}

TEST_CASE("custom builder") {
  SUBCASE("two-node single-edge network") {
    const std::vector<Edge> edges{{0, 1, 0.4}};
    const Network net = build_custom(vec({0.2, 0.0}), edges);
    CHECK(net.in_influence(1) == 0.4);
    CHECK(net.in_influence(0) == 0.0);
    CHECK(net.out_influence(0) == 0.4);
    CHECK(net.edge_count() == 1);
  }
  SUBCASE("node that can never adopt is rejected unless allowed") {
    const std::vector<Edge> edges{{0, 2, 0.4}, {2, 0, 0.4}};
    CHECK_THROWS_AS((void)build_custom(vec({0.1, 0.0, 0.0}), edges), InvalidArgument);
    const Network net = build_custom(vec({0.1, 0.0, 0.0}), edges, ZeroHazardPolicy::Allow);
    CHECK(net.size() == 3);
  }
  SUBCASE("zero column with zero p is an error") {
    const std::vector<Edge> edges{{0, 2, 0.3}, {2, 0, 0.3}};
    CHECK_THROWS_AS((void)build_custom(vec({0.0, 0.0, 0.1}), edges), InvalidArgument);
  }
  SUBCASE("invalid input") {
    const std::vector<Edge> self{{1, 1, 0.3}};
    CHECK_THROWS_AS((void)build_custom(vec({0.1, 0.1}), self), InvalidArgument);
    const std::vector<Edge> negative{{0, 1, -0.3}};
    CHECK_THROWS_AS((void)build_custom(vec({0.1, 0.1}), negative), InvalidArgument);
    const std::vector<Edge> dup{{0, 1, 0.3}, {0, 1, 0.1}};
    CHECK_THROWS_AS((void)build_custom(vec({0.1, 0.1}), dup), InvalidArgument);
    const std::vector<Edge> out_of_range{{0, 5, 0.3}};
    CHECK_THROWS_AS((void)build_custom(vec({0.1, 0.1}), out_of_range), InvalidArgument);
  }
  SUBCASE("zero-rate edges are dropped") {
    const std::vector<Edge> edges{{0, 1, 0.0}, {1, 0, 0.2}};
    const Network net = build_custom(vec({0.1, 0.1}), edges);
    CHECK(net.edge_count() == 1);
  }
}

TEST_CASE("CSR views agree with the dense matrix") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const Network net = testing_support::random_network(rng, 6);
    const Matrix q = net.dense_q();
    for (Index j = 0; j < net.size(); ++j) {
      double in = 0.0;
      for (const Neighbor& nb : net.in_edges(j)) in += nb.rate;
      CHECK(in == doctest::Approx(q.col(j).sum()));
      double out = 0.0;
      for (const Neighbor& nb : net.out_edges(j)) out += nb.rate;
      CHECK(out == doctest::Approx(q.row(j).sum()));
    }
  }
}

TEST_CASE("circles") {
  SUBCASE("homogeneous one-sided circle") {
    const Network net = build_one_sided_circle(Vector::Constant(3, 0.1), Vector::Constant(3, 0.4));
    CHECK(net.rate(0, 1) == 0.4);
    CHECK(net.rate(2, 0) == 0.4);
    CHECK(net.rate(1, 0) == 0.0);
    CHECK(net.structure().kind == StructureKind::OneSidedCircle);
  }
  SUBCASE("one-sided circle rejects zero q_in") {
    CHECK_THROWS_AS((void)build_one_sided_circle(Vector::Constant(3, 0.1), vec({0.4, 0.0, 0.4})),
                    InvalidArgument);
  }
  SUBCASE("two-sided circle with q_L + q_R = q") {
    const Network net = build_two_sided_circle(Vector::Constant(5, 0.1), Vector::Constant(5, 0.15),
                                               Vector::Constant(5, 0.25));
    CHECK(sup_diff(net.in_influences(), Vector::Constant(5, 0.4)) < 1e-15);
    CHECK(net.rate(0, 1) == 0.15);  // left neighbor of 1
    CHECK(net.rate(2, 1) == 0.25);  // right neighbor of 1
    CHECK(net.rate(0, 2) == 0.0);
  }
  SUBCASE("two-sided circle rejects a node with no influence") {
    CHECK_THROWS_AS((void)build_two_sided_circle(Vector::Constant(3, 0.1), vec({0.1, 0.0, 0.1}),
                                                 vec({0.1, 0.0, 0.1})),
                    InvalidArgument);
  }
  SUBCASE("three-node counterexample with one influencing pair") {
    const Network net = build_two_sided_circle(vec({0.1, 0.0, 0.0}), vec({0.0, 0.0, 0.4}),
                                               vec({0.0, 0.4, 0.0}), ZeroHazardPolicy::Allow);
    CHECK(net.rate(1, 2) == 0.4);
    CHECK(net.rate(2, 1) == 0.4);
    CHECK(net.edge_count() == 2);
  }
  SUBCASE("pattern violations are rejected") {
    const std::vector<Edge> edges{{0, 2, 0.3}};
    CHECK_THROWS_AS(Network(vec({0.1, 0.1, 0.1, 0.1}), edges, {StructureKind::OneSidedCircle}), InvalidArgument);
  }
}

TEST_CASE("Cartesian torus") {
  SUBCASE("d = 1 is the symmetric two-sided circle") {
    const Network torus = build_cartesian_torus(1, 7, 0.1, 0.4);
    const Network circle = build_two_sided_circle(Vector::Constant(7, 0.1), Vector::Constant(7, 0.2),
                                                  Vector::Constant(7, 0.2));
    CHECK(sup_diff(torus.dense_q().reshaped(), circle.dense_q().reshaped()) == 0.0);
  }
  SUBCASE("d = 2 has four incoming edges of weight q/4") {
    const Network net = build_cartesian_torus(2, 4, 0.1, 0.4);
    CHECK(net.size() == 16);
    for (Index j = 0; j < net.size(); ++j) {
      REQUIRE(net.in_edges(j).size() == 4);
      for (const Neighbor& nb : net.in_edges(j)) CHECK(nb.rate == doctest::Approx(0.1));
    }
  }
  SUBCASE("d = 3 column sums") {
    const Network net = build_cartesian_torus(3, 3, 0.1, 0.6);
    CHECK(net.size() == 27);
    CHECK(sup_diff(net.in_influences(), Vector::Constant(27, 0.6)) < 1e-14);
  }
  SUBCASE("side below 3 is rejected") { CHECK_THROWS_AS((void)build_cartesian_torus(2, 2, 0.1, 0.4), InvalidArgument); }
}

TEST_CASE("homogeneous counterpart") {
  SUBCASE("two-node special network") {
    const std::vector<Edge> edges{{0, 1, 0.4}};
    const Network hom = homogeneous_counterpart(build_custom(vec({0.2, 0.0}), edges));
    CHECK(sup_diff(hom.p(), Vector::Constant(2, 0.1)) < 1e-15);
    CHECK(sup_diff(hom.in_influences(), Vector::Constant(2, 0.2)) < 1e-15);
  }
  SUBCASE("idempotent on homogeneous input") {
    const Network net = build_complete({Vector::Constant(4, 0.1), Vector::Constant(4, 0.4)});
    const Network hom = homogeneous_counterpart(net);
    CHECK(sup_diff(hom.dense_q().reshaped(), net.dense_q().reshaped()) == 0.0);
    CHECK(sup_diff(hom.p(), net.p()) == 0.0);
  }
  SUBCASE("means") {
    const Network net = build_complete({vec({0.3, 0.0, 0.0}), vec({0.1, 0.2, 0.3})});
    const Network hom = homogeneous_counterpart(net);
    CHECK(hom.p(1) == doctest::Approx(0.1));
    CHECK(hom.in_influence(2) == doctest::Approx(0.2));
  }
  SUBCASE("circles are not eligible") {
    const Network circle = build_one_sided_circle(Vector::Constant(4, 0.1), Vector::Constant(4, 0.4));
    CHECK_THROWS_AS((void)homogeneous_counterpart(circle), InvalidArgument);
  }
}

TEST_CASE("shift_p and add_node") {
  const Network net = build_complete({vec({0.1, 0.2, 0.3}), vec({0.2, 0.3, 0.4})});
  SUBCASE("zero shift is the identity") {
    const Network same = shift_p(net, 0.0);
    CHECK(sup_diff(same.p(), net.p()) == 0.0);
    CHECK(sup_diff(same.dense_q().reshaped(), net.dense_q().reshaped()) == 0.0);
  }
  SUBCASE("shift adds to every node") { CHECK(sup_diff(shift_p(net, 0.15).p(), net.p().array() + 0.15) < 1e-15); }
  SUBCASE("negative shift beyond min p is rejected") { CHECK_THROWS_AS((void)shift_p(net, -0.11), InvalidArgument); }
  SUBCASE("added node influences and is influenced uniformly") {
    const Network big = add_node(net, 0.5, 0.2, 0.0);
    CHECK(big.size() == 4);
    CHECK(big.in_influence(3) == doctest::Approx(0.6));
    CHECK(big.out_influence(3) == 0.0);
    for (Index j = 0; j < 3; ++j) CHECK(big.in_influence(j) == doctest::Approx(net.in_influence(j)));
  }
}

TEST_CASE("JSON round trip") {
  const Network net = build_cartesian_torus(2, 3, 0.1, 0.4);
  const Network back = network_from_json(network_to_json(net));
  CHECK(back.structure() == net.structure());
  CHECK(sup_diff(back.dense_q().reshaped(), net.dense_q().reshaped()) == 0.0);
  CHECK(structure_kind_from_string(to_string(StructureKind::TwoSidedCircle)) == StructureKind::TwoSidedCircle);

  const auto path = std::filesystem::temp_directory_path() / "bassnet_test_network.json";
  save_network(net, path);
  CHECK(load_network(path).edge_count() == net.edge_count());
  std::filesystem::remove(path);
}

TEST_CASE("sum tree") {
  detail::SumTree tree;
  tree.reset(5);
  tree.assign(std::vector<double>{0.0, 1.0, 0.0, 2.0, 0.0});
  CHECK(tree.total() == 3.0);
  CHECK(tree.find(0.0) == 1);
  CHECK(tree.find(0.999) == 1);
  CHECK(tree.find(1.5) == 3);
  CHECK(tree.find(3.0) == 3);  // never lands on a zero leaf
  tree.set(3, 0.0);
  CHECK(tree.find(0.99999) == 1);
}

TEST_CASE("counter RNG is a pure function of seed and stream") {
  CounterRng a(42, 7), b(42, 7), c(42, 8);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
  }
  CounterRng u(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform_open_closed();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_thread_count(3) == 3);
  ::setenv("BASSNET_THREADS", "2", 1);
  CHECK(resolve_thread_count() == 2);
  ::unsetenv("BASSNET_THREADS");
  CHECK(resolve_thread_count() >= 1);
}
