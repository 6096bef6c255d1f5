#pragma once

#include "bassnet/gillespie.hpp"
#include "bassnet/network.hpp"
#include "bassnet/types.hpp"

#include <cstdint>
#include <vector>

namespace bassnet {

// Node-wise and edge-wise order: A <= B when p^A <= p^B and q^A <= q^B
// entrywise. The weak orders coincide with Equal or strict below.
enum class NetworkOrder { Equal, FirstBelow, SecondBelow, Incomparable };

[[nodiscard]] NetworkOrder nodewise_edgewise_compare(const Network& a, const Network& b);

enum class CdfProvenance { Analytic, BruteForce, Empirical };

struct CdfCurve {
  Vector tau;
  Vector F;
  CdfProvenance provenance = CdfProvenance::Analytic;
  std::uint64_t n_samples = 0;  // Empirical only
};

// Mixture of exponentials: F(tau) = sum_i weight_i (1 - exp(-rate_i tau)).
struct ExponentialMixture {
  std::vector<double> weight;
  std::vector<double> rate;
  [[nodiscard]] double cdf(double tau) const;
};

// Exact law of each inter-adoption time t_k, k = 1..m, by dynamic
// programming over adopter sets. Mass on a zero rate never completes.
[[nodiscard]] std::vector<ExponentialMixture> interadoption_mixtures(const Network& net, Index cap = 16);
[[nodiscard]] std::vector<CdfCurve> bruteforce_interadoption_cdfs(const Network& net, const TimeGrid& tau,
                                                                  Index cap = 16);
[[nodiscard]] std::vector<CdfCurve> empirical_cdf_curves(const EmpiricalCdfSet& set);

// Probability that node k adopts first: p_k / sum p.
[[nodiscard]] Vector first_adopter_weights(const Network& net);

struct Crossing {
  Index series = 0;  // k-1 for CDF lists, 0 for curves
  double lo = 0.0;
  double hi = 0.0;
};

struct DominanceVerdict {
  enum class Kind { FirstBelow, Equal, SecondBelow, Crossing };
  Kind kind = Kind::Equal;
  std::vector<Crossing> crossings;
  double tolerance = 0.0;
  // FirstBelow/SecondBelow: some series is strictly separated at every
  // positive grid point.
  bool strict = false;
  // Inputs were empirical; margins include three combined standard errors.
  bool statistical = false;
};

[[nodiscard]] DominanceVerdict check_cdf_dominance(const std::vector<CdfCurve>& a, const std::vector<CdfCurve>& b,
                                                   double tol);
[[nodiscard]] DominanceVerdict compare_adoption_curves(const AdoptionCurve& fa, const AdoptionCurve& fb,
                                                       double tol);

[[nodiscard]] const char* to_string(DominanceVerdict::Kind kind);
[[nodiscard]] const char* to_string(NetworkOrder order);

}  // namespace bassnet
