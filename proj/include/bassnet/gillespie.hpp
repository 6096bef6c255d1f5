#pragma once

#include "bassnet/network.hpp"
#include "bassnet/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace bassnet {

struct RealizationRecord {
  std::vector<double> adoption_times;
  std::vector<Index> adopter_ids;
  bool truncated = false;
};

struct MonteCarloOptions {
  unsigned threads = 0;  // 0: BASSNET_THREADS or hardware concurrency
  std::optional<double> horizon;
};

// One exact trajectory. Realization r of an estimator uses stream r; this
// overload exposes the stream for reproducing individual estimator samples.
[[nodiscard]] RealizationRecord simulate_realization(const Network& net, std::uint64_t seed,
                                                     std::optional<double> horizon = std::nullopt,
                                                     std::uint64_t stream = 0);

// Mean adoption fraction over `n` realizations with a 95% normal band.
// Trajectories are cut at the last grid time.
[[nodiscard]] AdoptionCurve estimate_adoption_curve(const Network& net, const TimeGrid& grid,
                                                    std::uint64_t n, std::uint64_t seed,
                                                    const MonteCarloOptions& options = {});

struct EmpiricalCdfSet {
  Vector tau;
  Matrix F;                             // row k-1 holds F_k on tau
  std::vector<std::uint64_t> samples;   // realizations reaching step k
  std::vector<std::uint64_t> excluded;  // realizations truncated before step k
};

[[nodiscard]] EmpiricalCdfSet estimate_interadoption_cdfs(const Network& net, const TimeGrid& tau,
                                                          std::uint64_t n, std::uint64_t seed,
                                                          const MonteCarloOptions& options = {});

}  // namespace bassnet
