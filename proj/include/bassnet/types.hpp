#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace bassnet {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad sizes, negative rates, violated preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A solver cannot handle the request (size cap, wrong structure).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// Two exponents of an exponential-sum chain coincide, or coefficients blow up.
class DegenerateExponents : public Error {
 public:
  using Error::Error;
};

// A closed-form coefficient has a vanishing denominator.
class SingularCoefficient : public Error {
 public:
  using Error::Error;
};

// Strictly increasing sample times starting at 0.
class TimeGrid {
 public:
  explicit TimeGrid(Vector t);
  static TimeGrid uniform(double t_max, Index n_points);

  [[nodiscard]] Index size() const noexcept { return t_.size(); }
  [[nodiscard]] double operator[](Index i) const { return t_[i]; }
  [[nodiscard]] double back() const { return t_[t_.size() - 1]; }
  [[nodiscard]] const Vector& values() const noexcept { return t_; }

 private:
  Vector t_;
};

struct AdoptionCurve {
  Vector t;
  Vector f;
  std::optional<Vector> ci_half_width;
  // Empty for exact (deterministic) curves.
  std::optional<std::uint64_t> n_realizations;

  [[nodiscard]] bool exact() const noexcept { return !n_realizations.has_value(); }
  [[nodiscard]] Index size() const noexcept { return t.size(); }
};

// Throws InvalidArgument unless f[0] = 0, 0 <= f <= 1 and f is nondecreasing,
// each up to `tol`.
void validate_curve(const AdoptionCurve& curve, double tol = 1e-12);

// Returns the standard error per grid point (ci_half_width / 1.96), or zeros for exact curves.
[[nodiscard]] Vector standard_error(const AdoptionCurve& curve);

}  // namespace bassnet
