#pragma once

#include "bassnet/network.hpp"
#include "bassnet/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace testing_support {

using bassnet::Edge;
using bassnet::Index;
using bassnet::Network;
using bassnet::Vector;

inline double sup_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Random heterogeneous network with every p_j > 0 and a random edge subset.
inline Network random_network(std::mt19937_64& rng, Index m, double density = 0.6) {
  std::uniform_real_distribution<double> p_dist(0.02, 0.3);
  std::uniform_real_distribution<double> q_dist(0.05, 0.5);
  std::bernoulli_distribution keep(density);
  Vector p(m);
  for (Index j = 0; j < m; ++j) p[j] = p_dist(rng);
  std::vector<Edge> edges;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      if (i != j && keep(rng)) edges.push_back({i, j, q_dist(rng)});
  return bassnet::build_custom(std::move(p), edges);
}

inline Vector random_vector(std::mt19937_64& rng, Index m, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector v(m);
  for (Index j = 0; j < m; ++j) v[j] = dist(rng);
  return v;
}

inline double relative_error(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace testing_support
