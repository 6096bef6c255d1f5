#pragma once

#include "bassnet/expsum.hpp"
#include "bassnet/network.hpp"
#include "bassnet/ode.hpp"
#include "bassnet/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace bassnet {

enum class MasterBackend {
  Analytic,  // exponential sums; throws DegenerateExponents when ill-posed
  Numeric,   // adaptive ODE integration
  Auto,      // Analytic, falling back to Numeric on DegenerateExponents
};

struct MasterOptions {
  MasterBackend backend = MasterBackend::Auto;
  Index numeric_cap = 16;
  Index analytic_cap = 12;
  bool keep_subsets = false;
  OdeTolerance tolerance{};
  double degeneracy_tol = 1e-9;
  double cancellation_limit = 1e6;
};

// Survival probability of each nonadopter subset (bitmask, bit j = node j) on a grid.
class SubsetProbabilities {
 public:
  SubsetProbabilities(Index m, Matrix values) : m_(m), values_(std::move(values)) {}
  [[nodiscard]] Index nodes() const noexcept { return m_; }
  [[nodiscard]] double at(std::uint32_t mask, Index grid_index) const { return values_(mask - 1, grid_index); }
  [[nodiscard]] Vector trajectory(std::uint32_t mask) const { return values_.row(mask - 1).transpose(); }
  [[nodiscard]] const Matrix& values() const noexcept { return values_; }

 private:
  Index m_;
  Matrix values_;  // row mask-1, column grid index
};

struct MasterSolution {
  AdoptionCurve curve;
  MasterBackend backend_used = MasterBackend::Numeric;
  std::optional<SubsetProbabilities> subsets;
};

// Exponential-sum expansion of every subset survival probability.
class GeneralMasterExpansion {
 public:
  // Throws CapabilityError above the cap and DegenerateExponents when two
  // exponents on a dependency chain coincide or coefficients exceed the limit.
  explicit GeneralMasterExpansion(const Network& net, const MasterOptions& options = {});

  [[nodiscard]] Index nodes() const noexcept { return m_; }
  [[nodiscard]] ExpSum<double> subset(std::uint32_t mask) const;
  // 1 - f(t): the mean singleton survival.
  [[nodiscard]] const ExpSum<double>& mean_survival() const noexcept { return mean_survival_; }
  // f(t), evaluated in increment form so f(0) = 0 exactly.
  [[nodiscard]] double adoption(double t) const { return -mean_survival_.increment(t); }

 private:
  Index m_;
  std::vector<double> rate_;                   // a(S), indexed by mask
  std::vector<std::vector<double>> coeff_;     // coeff_[S][compress(T \ S)]
  ExpSum<double> mean_survival_;
};

[[nodiscard]] MasterSolution solve_general_master(const Network& net, const TimeGrid& grid,
                                                  const MasterOptions& options = {});

struct CircleOptions {
  Index two_sided_cap = 100;
  OdeTolerance tolerance{};
  double degeneracy_tol = 1e-9;
  double cancellation_limit = 1e6;
  // One-sided chains are cut once the neglected tail is bounded by this.
  double truncation_tol = 1e-15;
  unsigned threads = 0;  // 0: BASSNET_THREADS or hardware concurrency
};

struct CircleDiagnostics {
  Index numeric_fallbacks = 0;  // one-sided: nodes solved numerically
};

[[nodiscard]] AdoptionCurve solve_onesided_circle(const Network& net, const TimeGrid& grid,
                                                  const CircleOptions& options = {},
                                                  CircleDiagnostics* diagnostics = nullptr);
[[nodiscard]] AdoptionCurve solve_twosided_circle(const Network& net, const TimeGrid& grid,
                                                  const CircleOptions& options = {});
[[nodiscard]] Network convert_two_sided_to_one_sided(const Network& net);

struct PlacementCurves {
  AdoptionCurve block;        // p1 on one half, p2 on the other
  AdoptionCurve alternating;  // p1, p2 alternating
};

// Infinite-circle limits of the block and alternating placements.
[[nodiscard]] PlacementCurves solve_block_and_alternating_circles(const TimeGrid& grid, double p1, double p2,
                                                                  double q);

// Dispatches by structure tag: circle solvers for circles, general master otherwise.
[[nodiscard]] AdoptionCurve solve_master(const Network& net, const TimeGrid& grid);

}  // namespace bassnet
