#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace bassnet {

// sum_i c_i exp(lambda_i t)
template <typename Scalar>
class ExpSum {
 public:
  struct Term {
    Scalar coefficient;
    Scalar exponent;
  };

  ExpSum() = default;
  explicit ExpSum(std::vector<Term> terms) : terms_(std::move(terms)) {}

  void add(Scalar coefficient, Scalar exponent) { terms_.push_back({coefficient, exponent}); }
  [[nodiscard]] const std::vector<Term>& terms() const noexcept { return terms_; }
  [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

  [[nodiscard]] Scalar operator()(Scalar t) const {
    Scalar s = 0;
    for (const Term& term : terms_) s += term.coefficient * std::exp(term.exponent * t);
    return s;
  }

  // Value at t minus value at 0, summed as c * expm1(lambda t) to avoid
  // cancellation at small t.
  [[nodiscard]] Scalar increment(Scalar t) const {
    Scalar s = 0;
    for (const Term& term : terms_) s += term.coefficient * std::expm1(term.exponent * t);
    return s;
  }

  [[nodiscard]] Scalar initial() const {
    Scalar s = 0;
    for (const Term& term : terms_) s += term.coefficient;
    return s;
  }

  // n-th time derivative at t.
  [[nodiscard]] Scalar derivative(Scalar t, int order) const {
    Scalar s = 0;
    for (const Term& term : terms_) s += term.coefficient * std::pow(term.exponent, order) * std::exp(term.exponent * t);
    return s;
  }

  [[nodiscard]] Scalar max_abs_coefficient() const {
    Scalar mx = 0;
    for (const Term& term : terms_) mx = std::max(mx, std::abs(term.coefficient));
    return mx;
  }

  ExpSum& operator*=(Scalar s) {
    for (Term& term : terms_) term.coefficient *= s;
    return *this;
  }
  ExpSum& operator+=(const ExpSum& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
  }

 private:
  std::vector<Term> terms_;
};

}  // namespace bassnet
