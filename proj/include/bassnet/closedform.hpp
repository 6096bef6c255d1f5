#pragma once

#include "bassnet/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <string>
#include <utility>

namespace bassnet {

namespace detail {

template <typename Scalar>
void require_positive_p(Scalar p) {
  if (!(p > Scalar(0))) throw InvalidArgument("p must be positive");
}

// Throws SingularCoefficient when the signed sum of `terms` is within
// tol times its largest term (or all terms vanish).
template <typename Scalar>
Scalar checked_denominator(std::initializer_list<Scalar> terms, const char* what, Scalar tol = Scalar(1e-9)) {
  Scalar sum = 0, scale = 0;
  for (Scalar x : terms) {
    sum += x;
    scale = std::max(scale, std::abs(x));
  }
  if (std::abs(sum) <= tol * scale || scale == Scalar(0))
    throw SingularCoefficient(std::string("singular coefficient denominator: ") + what);
  return sum;
}

}  // namespace detail

// Compartmental Bass model solution.
template <typename Scalar>
Scalar bass_formula(Scalar t, Scalar p, Scalar q) {
  detail::require_positive_p(p);
  const Scalar e = std::exp(-(p + q) * t);
  return -std::expm1(-(p + q) * t) / (Scalar(1) + (q / p) * e);
}

// Infinite one-dimensional homogeneous circle.
template <typename Scalar>
Scalar f_1d(Scalar t, Scalar p, Scalar q) {
  detail::require_positive_p(p);
  return -std::expm1(-(p + q) * t - q * std::expm1(-p * t) / p);
}

// General two-node network; q12 is the rate from node 1 to node 2.
template <typename Scalar>
Scalar f_complete_m2(Scalar t, Scalar p1, Scalar p2, Scalar q12, Scalar q21) {
  const std::array<Scalar, 2> p{p1, p2};
  // q_in[j] = q_{j-1, j}
  const std::array<Scalar, 2> q_in{q21, q12};
  Scalar survive = 0;
  for (int j = 0; j < 2; ++j) {
    const Scalar pp = p[1 - j], qq = q_in[j];
    const Scalar d = detail::checked_denominator<Scalar>({pp, -qq}, "p_{j-1} - q_{j-1,j}");
    const Scalar a = pp / d, b = qq / d;
    survive += a * std::exp(-(p[j] + qq) * t) - b * std::exp(-(p1 + p2) * t);
  }
  return Scalar(1) - survive / Scalar(2);
}

// General three-node network. q(i, j) is the rate from node i to node j.
template <typename Scalar, typename PVec, typename QMat>
Scalar f_complete_m3(Scalar t, const PVec& p, const QMat& q) {
  auto P = [&](int i) { return Scalar(p[((i - 1) % 3 + 3) % 3]); };
  auto Q = [&](int i, int j) { return Scalar(q(((i - 1) % 3 + 3) % 3, ((j - 1) % 3 + 3) % 3)); };
  using detail::checked_denominator;
  const Scalar p_total = P(1) + P(2) + P(3);
  Scalar survive = 0;
  for (int j = 1; j <= 3; ++j) {
    const Scalar A1 = (Q(j - 1, j) + Q(j + 2, j + 1)) /
                      checked_denominator<Scalar>({P(j - 1), -Q(j - 1, j), -Q(j + 2, j + 1)}, "A1");
    const Scalar A2 = (Q(j - 2, j - 1) + Q(j + 1, j)) /
                      checked_denominator<Scalar>({P(j + 1), -Q(j - 2, j - 1), -Q(j + 1, j)}, "A2");
    const Scalar d_c =
        checked_denominator<Scalar>({P(j + 1), P(j - 1), -Q(j - 1, j), -Q(j + 1, j)}, "c_j");
    const Scalar d_r = checked_denominator<Scalar>({P(j + 1), Q(j + 2, j + 1), -Q(j + 1, j)}, "right pair");
    const Scalar d_l = checked_denominator<Scalar>({P(j - 1), Q(j - 2, j - 1), -Q(j - 1, j)}, "left pair");
    const Scalar d_j = checked_denominator<Scalar>({P(j), Q(j - 1, j), -Q(j, j + 1)}, "b_j");
    const Scalar c = (Q(j + 1, j) * A1 + Q(j - 1, j) * A2) / d_c;
    const Scalar a = Scalar(1) + (Scalar(1) + A1) * Q(j + 1, j) / d_r + (Scalar(1) + A2) * Q(j - 1, j) / d_l - c;
    const Scalar b = (Scalar(1) + A1) * (Q(j + 1, j) / d_r + Q(j, j + 1) / d_j);
    survive += a * std::exp(-(P(j) + Q(j - 1, j) + Q(j + 1, j)) * t) -
               b * std::exp(-(P(j) + P(j + 1) + Q(j - 1, j) + Q(j + 2, j + 1)) * t) +
               c * std::exp(-p_total * t);
  }
  return Scalar(1) - survive / Scalar(3);
}

template <typename Scalar>
struct M2Pair {
  Scalar het;
  Scalar hom;
};

// Two-node networks with mean rates (p, q): homogeneous, and the heterogeneous
// one with p = (2p, 0) and a single edge 1 -> 2 of rate 2q.
template <typename Scalar>
M2Pair<Scalar> f_m2_pq_special(Scalar t, Scalar p, Scalar q) {
  if (!(p > Scalar(0)) || !(q > Scalar(0))) throw InvalidArgument("p and q must be positive");
  if (std::abs(p - q) <= Scalar(1e-9) * std::max(p, q)) {
    // Limit q -> p of the homogeneous formula, shared by both networks.
    const Scalar f = Scalar(1) - (Scalar(1) + p * t) * std::exp(-Scalar(2) * p * t);
    return {f, f};
  }
  const Scalar het = Scalar(1) - (Scalar(2) * q - p) / (Scalar(2) * (q - p)) * std::exp(-Scalar(2) * p * t) +
                     p / (Scalar(2) * (q - p)) * std::exp(-Scalar(2) * q * t);
  const Scalar hom =
      Scalar(1) - p / (p - q) * std::exp(-(p + q) * t) + q / (p - q) * std::exp(-Scalar(2) * p * t);
  return {het, hom};
}

// CDF of the k-th inter-adoption time (1-based k) on a homogeneous complete network.
template <typename Scalar>
Scalar interadoption_cdf_hom_complete(Index m, Scalar p, Scalar q, Index k, Scalar tau) {
  if (m < 2) throw InvalidArgument("need m >= 2");
  if (k < 1 || k > m) throw InvalidArgument("step k out of range");
  if (p < Scalar(0) || q < Scalar(0)) throw InvalidArgument("rates must be nonnegative");
  const Scalar rate = Scalar(m - k + 1) * (p + Scalar(k - 1) * q / Scalar(m - 1));
  return -std::expm1(-rate * tau);
}

}  // namespace bassnet
