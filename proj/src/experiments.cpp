#include "bassnet/experiments.hpp"

#include "bassnet/rng.hpp"

#include <cmath>
#include <numbers>

namespace bassnet {

Network block_circle(Index m, double p1, double p2, double q) {
  Vector p(m);
  for (Index i = 0; i < m; ++i) p[i] = (i + 1) <= m / 2 ? p1 : p2;
  return build_one_sided_circle(std::move(p), Vector::Constant(m, q));
}

Network alternating_circle(Index m, double p1, double p2, double q) {
  Vector p(m);
  for (Index i = 0; i < m; ++i) p[i] = (i + 1) % 2 == 1 ? p1 : p2;
  return build_one_sided_circle(std::move(p), Vector::Constant(m, q));
}

Network three_block_circle(Index m, const std::array<double, 3>& rates, double q) {
  Vector p(m);
  for (Index i = 0; i < m; ++i) {
    const Index k = i + 1;
    p[i] = 3 * k < m ? rates[0] : (3 * k < 2 * m ? rates[1] : rates[2]);
  }
  return build_one_sided_circle(std::move(p), Vector::Constant(m, q));
}

Network three_cyclic_circle(Index m, const std::array<double, 3>& rates, double q) {
  Vector p(m);
  for (Index i = 0; i < m; ++i) {
    const Index r = (i + 1) % 3;
    p[i] = r == 1 ? rates[0] : (r == 2 ? rates[1] : rates[2]);
  }
  return build_one_sided_circle(std::move(p), Vector::Constant(m, q));
}

Vector centered_normal_sample(std::uint64_t seed, Index m, double clip) {
  CounterRng rng(seed, 0x68u);
  Vector h(m);
  for (Index i = 0; i < m; i += 2) {
    const double r = std::sqrt(-2.0 * std::log(rng.uniform_open_closed()));
    const double a = 2.0 * std::numbers::pi * rng.uniform();
    h[i] = r * std::cos(a);
    if (i + 1 < m) h[i + 1] = r * std::sin(a);
  }
  h = h.cwiseMax(-clip).cwiseMin(clip);
  h.array() -= h.mean();
  return h;
}

LinearFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("line fit needs two or more paired points");
  const auto n = static_cast<Index>(x.size());
  Matrix a(n, 2);
  Vector b(n);
  for (Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = x[static_cast<std::size_t>(i)];
    b[i] = y[static_cast<std::size_t>(i)];
  }
  const Vector c = a.colPivHouseholderQr().solve(b);
  return {c[1], c[0]};
}

VarianceStudy run_variance_study(const VarianceStudyConfig& cfg, std::uint64_t seed) {
  const TimeGrid grid = TimeGrid::uniform(cfg.t_max, cfg.n_points);
  Index eval = -1;
  for (Index i = 0; i < grid.size(); ++i)
    if (std::abs(grid[i] - cfg.t_eval) < 1e-12) eval = i;
  if (eval < 0) throw InvalidArgument("t_eval must be a grid point");
  if (cfg.eps.empty() || cfg.eps.front() != 0.0) throw InvalidArgument("eps list must start at 0");

  VarianceStudy out;
  out.h = centered_normal_sample(seed, cfg.m, cfg.h_clip);
  for (double e : cfg.eps) {
    const Vector q_node = cfg.q * (1.0 + e * out.h.array());
    const Network net = build_complete({Vector::Constant(cfg.m, cfg.p), q_node});
    // Same seed for every eps: common random numbers.
    out.curves.push_back(estimate_adoption_curve(net, grid, cfg.n_realizations, seed));
    out.f_eval.push_back(out.curves.back().f[eval]);
    out.se_eval.push_back((*out.curves.back().ci_half_width)[eval] / 1.96);
  }

  std::vector<double> e2, lx, ly;
  for (std::size_t i = 0; i < cfg.eps.size(); ++i) {
    e2.push_back(cfg.eps[i] * cfg.eps[i]);
    if (cfg.eps[i] > 0.0) {
      lx.push_back(std::log(cfg.eps[i]));
      ly.push_back(std::log(std::abs(out.f_eval.front() - out.f_eval[i])));
    }
  }
  const LinearFit quad = least_squares_line(e2, out.f_eval);
  out.c0 = quad.intercept;
  out.c2 = quad.slope;
  out.loglog = least_squares_line(lx, ly);
  return out;
}

double time_to_reach(const std::function<double(double)>& f, double level, double step, double t_limit) {
  for (double t = step; t <= t_limit; t += step)
    if (f(t) >= level) return t;
  throw InvalidArgument("level not reached within the search limit");
}

}  // namespace bassnet
