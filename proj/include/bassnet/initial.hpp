#pragma once

#include "bassnet/network.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace bassnet {

struct InitialDerivatives {
  double d1 = 0.0;
  double d2 = 0.0;
  std::optional<double> d3;
};

// d1 = mean p, d2 = (sum p_i q^i - sum p_i^2) / m with out-influences q^i.
[[nodiscard]] InitialDerivatives derivatives_general(const Network& net);

// Complete network with mild heterogeneity; d3 only for uniform p.
[[nodiscard]] InitialDerivatives derivatives_mild_het(const MildHetSpec& spec);

// Infinite D-dimensional Cartesian lattice.
[[nodiscard]] InitialDerivatives derivatives_cartesian(int d, double p, double q);

// Limit D -> infinity of the lattice third derivative.
[[nodiscard]] double cartesian_d3_limit(double p, double q);

// Exact f^(n)(0), n = 1..order, from the master equations: the n-th
// derivative of a subset survival at 0 needs only subsets up to n nodes
// larger, so the cost is independent of the global state space.
[[nodiscard]] std::vector<double> master_initial_derivatives(const Network& net, int order);

// Divides by m.
[[nodiscard]] double population_variance(const Vector& x);

struct FiniteDifferenceEstimate {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

// One-sided forward differences of f at 0 with steps h, h/2, ..., h/2^(levels-1),
// Richardson-extrapolated to order `levels`. Third derivatives want a larger
// h with more levels to keep roundoff down.
[[nodiscard]] FiniteDifferenceEstimate richardson_initial_derivatives(const std::function<double(double)>& f,
                                                                      double h = 1e-3, int levels = 2);

}  // namespace bassnet
