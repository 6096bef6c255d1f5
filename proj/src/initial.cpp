#include "bassnet/initial.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace bassnet {

InitialDerivatives derivatives_general(const Network& net) {
  const Vector& p = net.p();
  const double m = static_cast<double>(net.size());
  InitialDerivatives d;
  d.d1 = p.mean();
  d.d2 = (p.dot(net.out_influences()) - p.squaredNorm()) / m;
  return d;
}

InitialDerivatives derivatives_mild_het(const MildHetSpec& spec) {
  const Vector& p = spec.p;
  const Vector& q = spec.q_node;
  const Index n = p.size();
  if (n < 2 || q.size() != n) throw InvalidArgument("mild spec needs m >= 2 and matching lengths");
  const double m = static_cast<double>(n);
  InitialDerivatives d;
  d.d1 = p.mean();
  d.d2 = (q.sum() * p.sum() - q.dot(p)) / (m * (m - 1.0)) - p.squaredNorm() / m;
  if ((p.array() == p[0]).all()) {
    const double pp = p[0];
    const double sq = q.sum(), sq2 = q.squaredNorm();
    const double mm1 = (m - 1.0) * (m - 1.0);
    d.d3 = pp * pp * pp + (pp / m) * ((m - 2.0) / mm1 * sq * sq - (2.0 * m - 3.0) / mm1 * sq2 - 4.0 * pp * sq);
  }
  return d;
}

InitialDerivatives derivatives_cartesian(int d, double p, double q) {
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  if (!(p > 0.0) || q < 0.0) throw InvalidArgument("need p > 0 and q >= 0");
  const double dd = static_cast<double>(d);
  return {p, p * (q - p), p * (p * p - 4.0 * p * q + (dd - 1.0) / dd * q * q)};
}

double cartesian_d3_limit(double p, double q) { return p * (p * p - 4.0 * p * q + q * q); }

namespace {

class DerivativeRecursion {
 public:
  explicit DerivativeRecursion(const Network& net) : net_(net) {}

  // d^n/dt^n [S](0) for n = 0..order; S sorted.
  std::vector<double> of(const std::vector<Index>& s, int order) {
    auto it = memo_.find(s);
    if (it != memo_.end() && static_cast<int>(it->second.size()) > order) return it->second;
    std::vector<double> d(static_cast<std::size_t>(order) + 1, 0.0);
    d[0] = 1.0;
    if (order > 0) {
      // Pressure of each outside adopter l on S.
      std::map<Index, double> pressure;
      double a = 0.0;
      for (Index i : s) {
        a += net_.p(i);
        for (const Neighbor& nb : net_.in_edges(i)) {
          if (std::binary_search(s.begin(), s.end(), nb.node)) continue;
          pressure[nb.node] += nb.rate;
          a += nb.rate;
        }
      }
      if (order == 1) {
        // Leaves are not memoized; the pressure terms cancel at first order.
        double sum_p = 0.0;
        for (Index i : s) sum_p += net_.p(i);
        return {1.0, -sum_p};
      }
      std::vector<std::pair<std::vector<double>, double>> children;
      for (const auto& [l, w] : pressure) {
        std::vector<Index> t = s;
        t.insert(std::upper_bound(t.begin(), t.end(), l), l);
        children.emplace_back(of(t, order - 1), w);
      }
      for (int n = 1; n <= order; ++n) {
        double v = -a * d[static_cast<std::size_t>(n - 1)];
        for (const auto& [child, w] : children) v += w * child[static_cast<std::size_t>(n - 1)];
        d[static_cast<std::size_t>(n)] = v;
      }
    }
    return memo_[s] = std::move(d);
  }

 private:
  const Network& net_;
  std::map<std::vector<Index>, std::vector<double>> memo_;
};

}  // namespace

std::vector<double> master_initial_derivatives(const Network& net, int order) {
  if (order < 1) throw InvalidArgument("order must be >= 1");
  DerivativeRecursion rec(net);
  std::vector<double> out(static_cast<std::size_t>(order), 0.0);
  for (Index k = 0; k < net.size(); ++k) {
    const auto d = rec.of({k}, order);
    for (int n = 1; n <= order; ++n) out[static_cast<std::size_t>(n - 1)] -= d[static_cast<std::size_t>(n)];
  }
  for (double& v : out) v /= static_cast<double>(net.size());
  return out;
}

double population_variance(const Vector& x) {
  if (x.size() == 0) throw InvalidArgument("variance of an empty vector");
  return (x.array() - x.mean()).square().mean();
}

FiniteDifferenceEstimate richardson_initial_derivatives(const std::function<double(double)>& f, double h,
                                                        int levels) {
  if (!(h > 0.0)) throw InvalidArgument("step must be positive");
  if (levels < 1) throw InvalidArgument("need at least one Richardson level");
  const double f0 = f(0.0);
  auto stencil = [&](double s) {
    const double f1 = f(s), f2 = f(2.0 * s), f3 = f(3.0 * s);
    return Eigen::Vector3d{(f1 - f0) / s, (f2 - 2.0 * f1 + f0) / (s * s),
                           (f3 - 3.0 * f2 + 3.0 * f1 - f0) / (s * s * s)};
  };
  // Forward differences have errors in every power of the step, so column k
  // of the table removes the h^k term.
  std::vector<Eigen::Vector3d> table;
  double s = h;
  for (int i = 0; i < levels; ++i, s /= 2.0) table.push_back(stencil(s));
  for (int k = 1; k < levels; ++k) {
    const double w = std::ldexp(1.0, k);
    for (int i = levels - 1; i >= k; --i) table[i] = (w * table[i] - table[i - 1]) / (w - 1.0);
  }
  const Eigen::Vector3d& best = table.back();
  return {best[0], best[1], best[2]};
}

}  // namespace bassnet
