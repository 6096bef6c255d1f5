#include "bassnet/types.hpp"

#include <cmath>
#include <string>

namespace bassnet {

TimeGrid::TimeGrid(Vector t) : t_(std::move(t)) {
  if (t_.size() < 1) throw InvalidArgument("time grid is empty");
  if (t_[0] != 0.0) throw InvalidArgument("time grid must start at 0");
  for (Index i = 1; i < t_.size(); ++i) {
    if (!std::isfinite(t_[i]) || !(t_[i] > t_[i - 1]))
      throw InvalidArgument("time grid must be finite and strictly increasing");
  }
}

TimeGrid TimeGrid::uniform(double t_max, Index n_points) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidArgument("t_max must be positive");
  if (n_points < 2) throw InvalidArgument("a grid needs at least 2 points");
  Vector t(n_points);
  for (Index i = 0; i < n_points; ++i)
    t[i] = t_max * static_cast<double>(i) / static_cast<double>(n_points - 1);
  t[n_points - 1] = t_max;
  return TimeGrid(std::move(t));
}

void validate_curve(const AdoptionCurve& curve, double tol) {
  const Index n = curve.t.size();
  if (n == 0 || curve.f.size() != n) throw InvalidArgument("curve size mismatch");
  if (curve.ci_half_width && curve.ci_half_width->size() != n)
    throw InvalidArgument("confidence band size mismatch");
  (void)TimeGrid(curve.t);
  if (std::abs(curve.f[0]) > tol) throw InvalidArgument("curve must start at f = 0");
  for (Index i = 0; i < n; ++i) {
    if (!(curve.f[i] >= -tol && curve.f[i] <= 1.0 + tol))
      throw InvalidArgument("curve value outside [0, 1] at index " + std::to_string(i));
    if (i > 0 && curve.f[i] < curve.f[i - 1] - tol)
      throw InvalidArgument("curve decreases at index " + std::to_string(i));
  }
}

Vector standard_error(const AdoptionCurve& curve) {
  if (!curve.ci_half_width) return Vector::Zero(curve.size());
  return *curve.ci_half_width / 1.96;
}

}  // namespace bassnet
