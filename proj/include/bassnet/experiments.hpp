#pragma once

#include "bassnet/gillespie.hpp"
#include "bassnet/network.hpp"
#include "bassnet/types.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace bassnet {

// One-sided circles with uniform q. Node i (0-based) is the paper's node i+1.
[[nodiscard]] Network block_circle(Index m, double p1, double p2, double q);        // p1 on the first half
[[nodiscard]] Network alternating_circle(Index m, double p1, double p2, double q);  // p1 on even indices
// Three regions: p[0] for 1 <= i < m/3, p[1] for m/3 <= i < 2m/3, p[2] after (1-based i).
[[nodiscard]] Network three_block_circle(Index m, const std::array<double, 3>& p, double q);
// Cyclic pattern: p[0] where i mod 3 = 1, p[1] where i mod 3 = 2, p[2] where i mod 3 = 0 (1-based i).
[[nodiscard]] Network three_cyclic_circle(Index m, const std::array<double, 3>& p, double q);

// Standard normal sample (Box-Muller on the counter RNG), clipped to
// [-clip, clip] and shifted to zero mean.
[[nodiscard]] Vector centered_normal_sample(std::uint64_t seed, Index m, double clip);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};
[[nodiscard]] LinearFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y);

struct VarianceStudyConfig {
  Index m = 1000;
  double p = 0.01;
  double q = 0.4;
  double t_eval = 15.0;
  double t_max = 30.0;
  Index n_points = 61;
  std::vector<double> eps{0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
  std::uint64_t n_realizations = 10000;
  double h_clip = 1.9;
};

struct VarianceStudy {
  Vector h;                          // q_j = q (1 + eps h_j)
  std::vector<AdoptionCurve> curves;  // one per eps, common random numbers
  std::vector<double> f_eval;         // f(t_eval) per eps
  std::vector<double> se_eval;
  double c0 = 0.0, c2 = 0.0;          // f(t_eval; eps) ~ c0 + c2 eps^2
  LinearFit loglog;                   // log|f_hom - f_het| against log eps, eps > 0
};

[[nodiscard]] VarianceStudy run_variance_study(const VarianceStudyConfig& cfg, std::uint64_t seed);

// First grid time at which `f` reaches `level`, searching t = step, 2 step, ...
[[nodiscard]] double time_to_reach(const std::function<double(double)>& f, double level, double step = 0.5,
                                   double t_limit = 1e4);

}  // namespace bassnet
