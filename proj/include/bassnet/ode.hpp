#pragma once

#include "bassnet/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bassnet {

struct OdeTolerance {
  double abs = 1e-10;
  double rel = 1e-9;
  long max_steps = 10'000'000;
};

// Dormand-Prince 5(4) with local extrapolation. Steps are shortened to land
// exactly on every requested output time, so no interpolation is involved.
// rhs(t, y, dy) writes dy/dt; observe(i, y) is called at times[i].
template <typename Scalar, typename Rhs, typename Observe>
void integrate_on_grid(Rhs&& rhs, Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y,
                       const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& times, Observe&& observe,
                       const OdeTolerance& tol = {}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  static constexpr Scalar c2 = Scalar(1) / 5, c3 = Scalar(3) / 10, c4 = Scalar(4) / 5, c5 = Scalar(8) / 9;
  static constexpr Scalar a21 = Scalar(1) / 5;
  static constexpr Scalar a31 = Scalar(3) / 40, a32 = Scalar(9) / 40;
  static constexpr Scalar a41 = Scalar(44) / 45, a42 = Scalar(-56) / 15, a43 = Scalar(32) / 9;
  static constexpr Scalar a51 = Scalar(19372) / 6561, a52 = Scalar(-25360) / 2187, a53 = Scalar(64448) / 6561,
                          a54 = Scalar(-212) / 729;
  static constexpr Scalar a61 = Scalar(9017) / 3168, a62 = Scalar(-355) / 33, a63 = Scalar(46732) / 5247,
                          a64 = Scalar(49) / 176, a65 = Scalar(-5103) / 18656;
  static constexpr Scalar b1 = Scalar(35) / 384, b3 = Scalar(500) / 1113, b4 = Scalar(125) / 192,
                          b5 = Scalar(-2187) / 6784, b6 = Scalar(11) / 84;
  static constexpr Scalar e1 = Scalar(71) / 57600, e3 = Scalar(-71) / 16695, e4 = Scalar(71) / 1920,
                          e5 = Scalar(-17253) / 339200, e6 = Scalar(22) / 525, e7 = Scalar(-1) / 40;

  const Index n = y.size();
  const Index g = times.size();
  if (g == 0) return;
  Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n), err(n);

  Scalar t = times[0];
  observe(Index{0}, static_cast<const Vec&>(y));
  if (g == 1) return;

  auto error_norm = [&](const Vec& e, const Vec& y0, const Vec& y1) {
    Scalar acc = 0;
    for (Index i = 0; i < n; ++i) {
      const Scalar sc = Scalar(tol.abs) + Scalar(tol.rel) * std::max(std::abs(y0[i]), std::abs(y1[i]));
      const Scalar r = e[i] / sc;
      acc += r * r;
    }
    return n > 0 ? std::sqrt(acc / Scalar(n)) : Scalar(0);
  };

  rhs(t, static_cast<const Vec&>(y), k1);
  // Initial step from the scaled first derivative.
  Scalar h;
  {
    Scalar d0 = 0, d1 = 0;
    for (Index i = 0; i < n; ++i) {
      const Scalar sc = Scalar(tol.abs) + Scalar(tol.rel) * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / Scalar(std::max<Index>(n, 1)));
    d1 = std::sqrt(d1 / Scalar(std::max<Index>(n, 1)));
    h = (d0 < Scalar(1e-5) || d1 < Scalar(1e-5)) ? Scalar(1e-6) : Scalar(0.01) * d0 / d1;
    h = std::min(h, times[g - 1] - times[0]);
  }

  long steps = 0;
  Index next = 1;
  while (next < g) {
    const Scalar target = times[next];
    bool lands = false;
    const Scalar h_proposed = h;
    if (t + h >= target || t + Scalar(1.0000001) * h >= target) {
      h = target - t;
      lands = true;
    }
    if (++steps > tol.max_steps) throw Error("ODE integrator exceeded its step budget");

    tmp = y + h * (a21 * k1);
    rhs(t + c2 * h, static_cast<const Vec&>(tmp), k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, static_cast<const Vec&>(tmp), k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, static_cast<const Vec&>(tmp), k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, static_cast<const Vec&>(tmp), k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, static_cast<const Vec&>(tmp), k6);
    y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, static_cast<const Vec&>(y_new), k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const Scalar en = error_norm(err, y, y_new);
    if (!std::isfinite(static_cast<double>(en))) {
      h *= Scalar(0.25);
      continue;
    }
    const Scalar factor =
        en == Scalar(0) ? Scalar(5) : std::clamp(Scalar(0.9) * std::pow(en, Scalar(-0.2)), Scalar(0.2), Scalar(5));
    if (en <= Scalar(1)) {
      t = lands ? target : t + h;
      y.swap(y_new);
      k1.swap(k7);
      if (lands) {
        observe(next, static_cast<const Vec&>(y));
        ++next;
      }
      // A landing step may be artificially short; resume from the controller's proposal.
      h = lands ? std::max(h * factor, h_proposed) : h * factor;
    } else {
      h *= std::max(factor, Scalar(0.2));
    }
    if (!(h > Scalar(0))) throw Error("ODE integrator step size underflow");
  }
}

}  // namespace bassnet
