#include "bassnet/dominance.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace bassnet {

NetworkOrder nodewise_edgewise_compare(const Network& a, const Network& b) {
  if (a.size() != b.size()) throw InvalidArgument("networks differ in size");
  bool a_lower = false, b_lower = false;
  auto visit = [&](double x, double y) {
    a_lower = a_lower || x < y;
    b_lower = b_lower || y < x;
  };
  for (Index j = 0; j < a.size(); ++j) visit(a.p(j), b.p(j));
  const Matrix qa = a.dense_q(), qb = b.dense_q();
  for (Index i = 0; i < qa.rows(); ++i)
    for (Index j = 0; j < qa.cols(); ++j) visit(qa(i, j), qb(i, j));
  if (a_lower && b_lower) return NetworkOrder::Incomparable;
  if (a_lower) return NetworkOrder::FirstBelow;
  if (b_lower) return NetworkOrder::SecondBelow;
  return NetworkOrder::Equal;
}

double ExponentialMixture::cdf(double tau) const {
  double s = 0.0;
  for (std::size_t i = 0; i < weight.size(); ++i) s -= weight[i] * std::expm1(-rate[i] * tau);
  return s;
}

std::vector<ExponentialMixture> interadoption_mixtures(const Network& net, Index cap) {
  const Index m = net.size();
  if (m > cap || m > 24) throw CapabilityError("brute-force CDFs support at most " + std::to_string(cap) + " nodes");
  using Mask = std::uint32_t;
  const Mask full = (Mask{1} << m) - 1;
  const Matrix q = net.dense_q();
  std::vector<double> prob(std::size_t{full} + 1, 0.0);
  prob[0] = 1.0;
  std::vector<ExponentialMixture> out(static_cast<std::size_t>(m));
  Vector lambda(m);
  // Masks in increasing order visit every subset before its supersets.
  for (Mask s = 0; s < full; ++s) {
    const double ps = prob[s];
    if (ps == 0.0) continue;
    double total = 0.0;
    for (Index j = 0; j < m; ++j) {
      if (s >> j & 1u) {
        lambda[j] = 0.0;
        continue;
      }
      double l = net.p(j);
      for (Mask c = s; c; c &= c - 1) l += q(std::countr_zero(c), j);
      lambda[j] = l;
      total += l;
    }
    auto& mix = out[static_cast<std::size_t>(std::popcount(s))];
    mix.weight.push_back(ps);
    mix.rate.push_back(total);
    if (total == 0.0) continue;
    for (Index j = 0; j < m; ++j)
      if (lambda[j] > 0.0) prob[s | (Mask{1} << j)] += ps * lambda[j] / total;
  }
  return out;
}

std::vector<CdfCurve> bruteforce_interadoption_cdfs(const Network& net, const TimeGrid& tau, Index cap) {
  const auto mixtures = interadoption_mixtures(net, cap);
  std::vector<CdfCurve> curves;
  curves.reserve(mixtures.size());
  for (const auto& mix : mixtures) {
    CdfCurve c{tau.values(), Vector(tau.size()), CdfProvenance::BruteForce, 0};
    for (Index i = 0; i < tau.size(); ++i) c.F[i] = mix.cdf(tau[i]);
    curves.push_back(std::move(c));
  }
  return curves;
}

std::vector<CdfCurve> empirical_cdf_curves(const EmpiricalCdfSet& set) {
  std::vector<CdfCurve> curves;
  for (Index k = 0; k < set.F.rows(); ++k)
    curves.push_back({set.tau, set.F.row(k).transpose(), CdfProvenance::Empirical,
                      set.samples[static_cast<std::size_t>(k)]});
  return curves;
}

Vector first_adopter_weights(const Network& net) {
  const double total = net.p().sum();
  if (!(total > 0.0)) throw InvalidArgument("first-adopter weights need a positive total external rate");
  return net.p() / total;
}

namespace {

struct Series {
  const Vector* grid;
  Vector diff;    // a - b
  Vector margin;  // per-point tolerance
};

DominanceVerdict classify(const std::vector<Series>& series, double tol, bool statistical) {
  DominanceVerdict v;
  v.tolerance = tol;
  v.statistical = statistical;
  bool any_below = false, any_above = false;
  for (const auto& s : series) {
    any_below = any_below || (s.diff.array() < -s.margin.array()).any();
    any_above = any_above || (s.diff.array() > s.margin.array()).any();
  }
  auto strict_for = [&](double sign) {
    for (const auto& s : series) {
      bool all = true;
      for (Index i = 0; i < s.diff.size() && all; ++i)
        if ((*s.grid)[i] > 0.0) all = sign * s.diff[i] > s.margin[i];
      if (all) return true;
    }
    return false;
  };
  if (!any_below && !any_above) {
    v.kind = DominanceVerdict::Kind::Equal;
  } else if (any_below && !any_above) {
    v.kind = DominanceVerdict::Kind::FirstBelow;
    v.strict = strict_for(-1.0);
  } else if (any_above && !any_below) {
    v.kind = DominanceVerdict::Kind::SecondBelow;
    v.strict = strict_for(1.0);
  } else {
    v.kind = DominanceVerdict::Kind::Crossing;
    for (std::size_t k = 0; k < series.size(); ++k) {
      const auto& s = series[k];
      int last_sign = 0;
      Index last_i = 0;
      for (Index i = 0; i < s.diff.size(); ++i) {
        const int sign = s.diff[i] > s.margin[i] ? 1 : (s.diff[i] < -s.margin[i] ? -1 : 0);
        if (sign == 0) continue;
        if (last_sign != 0 && sign != last_sign)
          v.crossings.push_back({static_cast<Index>(k), (*s.grid)[last_i], (*s.grid)[i]});
        last_sign = sign;
        last_i = i;
      }
    }
    if (v.crossings.empty()) {
      // Opposite signs live in different series; report the grid extent.
      const Vector& g = *series.front().grid;
      v.crossings.push_back({-1, g[0], g[g.size() - 1]});
    }
  }
  return v;
}

void require_same_grid(const Vector& a, const Vector& b) {
  if (a.size() != b.size() || (a - b).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + a.cwiseAbs().maxCoeff()))
    throw InvalidArgument("comparison requires identical grids");
}

Vector binomial_se(const CdfCurve& c) {
  if (c.provenance != CdfProvenance::Empirical) return Vector::Zero(c.F.size());
  if (c.n_samples == 0) return Vector::Ones(c.F.size());
  return (c.F.array() * (1.0 - c.F.array()) / static_cast<double>(c.n_samples)).sqrt();
}

}  // namespace

DominanceVerdict check_cdf_dominance(const std::vector<CdfCurve>& a, const std::vector<CdfCurve>& b, double tol) {
  if (a.size() != b.size() || a.empty()) throw InvalidArgument("CDF lists must be nonempty and of equal length");
  std::vector<Series> series;
  bool statistical = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    require_same_grid(a[k].tau, b[k].tau);
    const Vector se_a = binomial_se(a[k]), se_b = binomial_se(b[k]);
    statistical = statistical || a[k].provenance == CdfProvenance::Empirical ||
                  b[k].provenance == CdfProvenance::Empirical;
    Vector margin = (3.0 * (se_a.array().square() + se_b.array().square()).sqrt()).max(tol);
    series.push_back({&a[k].tau, a[k].F - b[k].F, std::move(margin)});
  }
  return classify(series, tol, statistical);
}

DominanceVerdict compare_adoption_curves(const AdoptionCurve& fa, const AdoptionCurve& fb, double tol) {
  require_same_grid(fa.t, fb.t);
  const Vector se_a = standard_error(fa), se_b = standard_error(fb);
  Vector margin = (3.0 * (se_a.array().square() + se_b.array().square()).sqrt()).max(tol);
  return classify({{&fa.t, fa.f - fb.f, std::move(margin)}}, tol, !fa.exact() || !fb.exact());
}

const char* to_string(DominanceVerdict::Kind kind) {
  switch (kind) {
    case DominanceVerdict::Kind::FirstBelow: return "FirstBelow";
    case DominanceVerdict::Kind::Equal: return "Equal";
    case DominanceVerdict::Kind::SecondBelow: return "SecondBelow";
    case DominanceVerdict::Kind::Crossing: return "Crossing";
  }
  return "Unknown";
}

const char* to_string(NetworkOrder order) {
  switch (order) {
    case NetworkOrder::Equal: return "Equal";
    case NetworkOrder::FirstBelow: return "FirstBelow";
    case NetworkOrder::SecondBelow: return "SecondBelow";
    case NetworkOrder::Incomparable: return "Incomparable";
  }
  return "Unknown";
}

}  // namespace bassnet
