#include "bassnet/master.hpp"

#include "bassnet/closedform.hpp"
#include "bassnet/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <thread>

namespace bassnet {
namespace {

using Mask = std::uint32_t;

void require_general_cap(Index m, Index cap, const char* backend) {
  if (m > cap || m > 24)
    throw CapabilityError(std::string(backend) + " general master solver supports at most " +
                          std::to_string(std::min<Index>(cap, 24)) + " nodes, got " + std::to_string(m));
}

// w[S * m + l] = sum_{i in S} q[l][i]: pressure of adopter l on subset S.
std::vector<double> subset_pressure(const Matrix& q, Index m) {
  const std::size_t n = std::size_t{1} << m;
  std::vector<double> w(n * static_cast<std::size_t>(m), 0.0);
  for (std::size_t s = 1; s < n; ++s) {
    const int low = std::countr_zero(static_cast<Mask>(s));
    const std::size_t rest = s & (s - 1);
    for (Index l = 0; l < m; ++l) w[s * m + l] = w[rest * m + l] + q(l, low);
  }
  return w;
}

// a(S) = sum_{i in S} p_i + sum_{l not in S} w(S, l).
std::vector<double> subset_rates(const Network& net, const std::vector<double>& w) {
  const Index m = net.size();
  const Mask full = (Mask{1} << m) - 1;
  std::vector<double> a(std::size_t{full} + 1, 0.0);
  for (Mask s = 1; s <= full; ++s) {
    double r = 0.0;
    for (Index i = 0; i < m; ++i) {
      if (s >> i & 1u) r += net.p(i);
      else r += w[std::size_t{s} * m + i];
    }
    a[s] = r;
  }
  return a;
}

bool nearly_equal(double x, double y, double rel) {
  return std::abs(x - y) <= rel * std::max(std::abs(x), std::abs(y));
}

AdoptionCurve exact_curve(const TimeGrid& grid, Vector f) {
  AdoptionCurve c;
  c.t = grid.values();
  c.f = std::move(f);
  c.f[0] = 0.0;
  return c;
}

MasterSolution solve_numeric(const Network& net, const TimeGrid& grid, const MasterOptions& opt) {
  const Index m = net.size();
  require_general_cap(m, opt.numeric_cap, "numeric");
  const Mask full = (Mask{1} << m) - 1;
  const auto w = subset_pressure(net.dense_q(), m);
  const auto a = subset_rates(net, w);

  const Index g = grid.size();
  Vector f(g);
  std::optional<Matrix> store;
  if (opt.keep_subsets) store.emplace(static_cast<Index>(full), g);

  auto rhs = [&](double, const Vector& y, Vector& dy) {
    for (Mask s = 1; s <= full; ++s) {
      double v = -a[s] * y[s - 1];
      Mask c = full & ~s;
      while (c) {
        const int l = std::countr_zero(c);
        c &= c - 1;
        v += w[std::size_t{s} * m + l] * y[(s | (Mask{1} << l)) - 1];
      }
      dy[s - 1] = v;
    }
  };
  auto observe = [&](Index i, const Vector& y) {
    double survive = 0.0;
    for (Index k = 0; k < m; ++k) survive += y[(Mask{1} << k) - 1];
    f[i] = 1.0 - survive / static_cast<double>(m);
    if (store) store->col(i) = y;
  };
  integrate_on_grid<double>(rhs, Vector::Ones(full), grid.values(), observe, opt.tolerance);

  MasterSolution sol{exact_curve(grid, std::move(f)), MasterBackend::Numeric, std::nullopt};
  if (store) sol.subsets.emplace(m, std::move(*store));
  return sol;
}

MasterSolution solve_analytic(const Network& net, const TimeGrid& grid, const MasterOptions& opt) {
  const GeneralMasterExpansion expansion(net, opt);
  const Index g = grid.size();
  Vector f(g);
  for (Index i = 0; i < g; ++i) f[i] = expansion.adoption(grid[i]);
  MasterSolution sol{exact_curve(grid, std::move(f)), MasterBackend::Analytic, std::nullopt};
  if (opt.keep_subsets) {
    const Mask full = (Mask{1} << net.size()) - 1;
    Matrix values(static_cast<Index>(full), g);
    for (Mask s = 1; s <= full; ++s) {
      const auto e = expansion.subset(s);
      for (Index i = 0; i < g; ++i) values(s - 1, i) = e(grid[i]);
    }
    sol.subsets.emplace(net.size(), std::move(values));
  }
  return sol;
}

}  // namespace

GeneralMasterExpansion::GeneralMasterExpansion(const Network& net, const MasterOptions& opt) : m_(net.size()) {
  require_general_cap(m_, opt.analytic_cap, "analytic");
  const Mask full = (Mask{1} << m_) - 1;
  const auto w = subset_pressure(net.dense_q(), m_);
  rate_ = subset_rates(net, w);
  coeff_.assign(std::size_t{full} + 1, {});

  // Supersets have larger masks, so descending order visits them first.
  std::vector<Mask> bits;
  for (Mask s = full; s >= 1; --s) {
    const Mask comp = full & ~s;
    bits.clear();
    for (Mask c = comp; c; c &= c - 1) bits.push_back(static_cast<Mask>(std::countr_zero(c)));
    const auto r = static_cast<Mask>(bits.size());
    auto& cs = coeff_[s];
    cs.assign(std::size_t{1} << r, 0.0);
    double others = 0.0;
    for (Mask u = 1; u < (Mask{1} << r); ++u) {
      Mask t = s;
      for (Mask b = 0; b < r; ++b)
        if (u >> b & 1u) t |= Mask{1} << bits[b];
      double num = 0.0;
      for (Mask b = 0; b < r; ++b) {
        if (!(u >> b & 1u)) continue;
        const Mask l = bits[b];
        const double wl = w[std::size_t{s} * m_ + l];
        if (wl == 0.0) continue;
        // Index of T \ (S + l) among the complement of S + l.
        const Mask low = u & ((Mask{1} << b) - 1);
        const Mask sub = low | ((u >> (b + 1)) << b);
        num += wl * coeff_[s | (Mask{1} << l)][sub];
      }
      if (num == 0.0) continue;
      const double denom = rate_[s] - rate_[t];
      if (nearly_equal(rate_[s], rate_[t], opt.degeneracy_tol))
        throw DegenerateExponents("coincident exponents for subsets " + std::to_string(s) + " and " +
                                  std::to_string(t));
      const double c = num / denom;
      if (std::abs(c) > opt.cancellation_limit)
        throw DegenerateExponents("exponential-sum coefficient exceeds cancellation limit");
      cs[u] = c;
      others += c;
    }
    cs[0] = 1.0 - others;
    if (std::abs(cs[0]) > opt.cancellation_limit)
      throw DegenerateExponents("exponential-sum coefficient exceeds cancellation limit");
  }

  std::vector<double> merged(std::size_t{full} + 1, 0.0);
  for (Index k = 0; k < m_; ++k) {
    const Mask s = Mask{1} << k;
    const Mask comp = full & ~s;
    const auto& cs = coeff_[s];
    for (Mask u = 0; u < cs.size(); ++u) {
      // Expand u over the complement bits of s.
      Mask t = s, c = comp;
      for (Mask b = 0; c; ++b, c &= c - 1)
        if (u >> b & 1u) t |= Mask{1} << std::countr_zero(c);
      merged[t] += cs[u] / static_cast<double>(m_);
    }
  }
  for (Mask t = 1; t <= full; ++t)
    if (merged[t] != 0.0) mean_survival_.add(merged[t], -rate_[t]);
}

ExpSum<double> GeneralMasterExpansion::subset(std::uint32_t mask) const {
  const Mask full = (Mask{1} << m_) - 1;
  if (mask == 0 || mask > full) throw InvalidArgument("subset mask out of range");
  ExpSum<double> e;
  const auto& cs = coeff_[mask];
  const Mask comp = full & ~mask;
  for (Mask u = 0; u < cs.size(); ++u) {
    if (cs[u] == 0.0) continue;
    Mask t = mask, c = comp;
    for (Mask b = 0; c; ++b, c &= c - 1)
      if (u >> b & 1u) t |= Mask{1} << std::countr_zero(c);
    e.add(cs[u], -rate_[t]);
  }
  return e;
}

MasterSolution solve_general_master(const Network& net, const TimeGrid& grid, const MasterOptions& options) {
  switch (options.backend) {
    case MasterBackend::Analytic:
      return solve_analytic(net, grid, options);
    case MasterBackend::Numeric:
      return solve_numeric(net, grid, options);
    case MasterBackend::Auto:
      if (net.size() <= options.analytic_cap) {
        try {
          return solve_analytic(net, grid, options);
        } catch (const DegenerateExponents&) {
          // Resonant or ill-conditioned expansion; integrate instead.
        }
      }
      return solve_numeric(net, grid, options);
  }
  throw InvalidArgument("unknown master backend");
}

// ---------------------------------------------------------------------------
// Circles

namespace {

Index wrap(Index a, Index m) { return ((a % m) + m) % m; }

template <typename Fn>
void parallel_for(Index n, unsigned threads, Fn fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<Index>(std::max(1u, resolve_thread_count(threads)), std::max<Index>(n, 1)));
  if (workers == 1) {
    for (Index j = 0; j < n; ++j) fn(j);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (Index j = n * w / workers; j < n * (w + 1) / workers; ++j) fn(j);
    });
}

bool rotation_invariant(const Network& net, const Vector& q_in) {
  return (net.p().array() == net.p(0)).all() && (q_in.array() == q_in[0]).all();
}

}  // namespace

AdoptionCurve solve_onesided_circle(const Network& net, const TimeGrid& grid, const CircleOptions& options,
                                    CircleDiagnostics* diagnostics) {
  if (net.structure().kind != StructureKind::OneSidedCircle)
    throw InvalidArgument("solve_onesided_circle needs a one-sided circle");
  const Index m = net.size();
  if (m < 2) throw CapabilityError("one-sided circle needs m >= 2");
  Vector q_in(m);
  for (Index j = 0; j < m; ++j) q_in[j] = net.rate(wrap(j - 1, m), j);
  const double p_total = net.p().sum();
  const Index g = grid.size();

  // Survival increments y_1^j(t) - 1 per node j, column j.
  const bool symmetric = rotation_invariant(net, q_in);
  const Index solves = symmetric ? 1 : m;
  Matrix increments(g, solves);
  std::vector<char> numeric(static_cast<std::size_t>(solves), 0);

  parallel_for(solves, options.threads, [&](Index j) {
    // Chain k = 1..m (index k-1): arc j-k+1..j; exponent -A_k, coupling e_k.
    // State k feeds state k-1 through an operator of sup-norm at most
    // e_k / A_k, so dropping every state beyond n changes y_1 by at most
    // prod_{k<n} e_k / A_k; the chain is cut once that bound is negligible.
    Vector A(m), e(m);
    double arc = 0.0, bound = 1.0;
    Index n = m;
    for (Index k = 1; k <= m; ++k) {
      const Index s = wrap(j - k + 1, m);
      arc += net.p(s);
      if (k < m) {
        A[k - 1] = arc + q_in[s];
        e[k - 1] = q_in[s];
        bound *= e[k - 1] == 0.0 ? 0.0 : e[k - 1] / A[k - 1];
        if (bound <= options.truncation_tol) {
          e[k - 1] = 0.0;
          n = k;
          break;
        }
      } else {
        A[k - 1] = p_total;
        e[k - 1] = 0.0;
      }
    }
    A.conservativeResize(n);
    e.conservativeResize(n);
    Vector c = Vector::Zero(n);
    c[n - 1] = 1.0;
    bool ok = true;
    for (Index k = n - 2; k >= 0 && ok; --k) {
      double others = 0.0;
      for (Index l = k + 1; l < n; ++l) {
        const double num = e[k] * c[l];
        if (num == 0.0) {
          c[l] = 0.0;
          continue;
        }
        if (nearly_equal(A[k], A[l], options.degeneracy_tol)) {
          ok = false;
          break;
        }
        c[l] = num / (A[k] - A[l]);
        if (std::abs(c[l]) > options.cancellation_limit) {
          ok = false;
          break;
        }
        others += c[l];
      }
      c[k] = 1.0 - others;
      if (std::abs(c[k]) > options.cancellation_limit) ok = false;
    }
    if (ok) {
      for (Index i = 0; i < g; ++i) {
        double s = 0.0;
        for (Index l = 0; l < n; ++l)
          if (c[l] != 0.0) s += c[l] * std::expm1(-A[l] * grid[i]);
        increments(i, j) = s;
      }
      return;
    }
    numeric[static_cast<std::size_t>(j)] = 1;
    auto rhs = [&](double, const Vector& y, Vector& dy) {
      for (Index k = 0; k + 1 < n; ++k) dy[k] = -A[k] * y[k] + e[k] * y[k + 1];
      dy[n - 1] = -A[n - 1] * y[n - 1];
    };
    integrate_on_grid<double>(rhs, Vector::Ones(n), grid.values(),
                              [&](Index i, const Vector& y) { increments(i, j) = y[0] - 1.0; },
                              options.tolerance);
  });

  if (diagnostics) {
    diagnostics->numeric_fallbacks = 0;
    for (char n : numeric) diagnostics->numeric_fallbacks += n;
    if (symmetric) diagnostics->numeric_fallbacks *= m;
  }
  Vector f(g);
  for (Index i = 0; i < g; ++i) f[i] = -increments.row(i).sum() / static_cast<double>(solves);
  return exact_curve(grid, std::move(f));
}

AdoptionCurve solve_twosided_circle(const Network& net, const TimeGrid& grid, const CircleOptions& options) {
  if (net.structure().kind != StructureKind::TwoSidedCircle)
    throw InvalidArgument("solve_twosided_circle needs a two-sided circle");
  const Index m = net.size();
  if (m < 3) throw CapabilityError("two-sided circle needs m >= 3");
  if (m > options.two_sided_cap)
    throw CapabilityError("two-sided circle solver supports at most " + std::to_string(options.two_sided_cap) +
                          " nodes, got " + std::to_string(m));
  Vector q_left(m), q_right(m);
  for (Index j = 0; j < m; ++j) {
    q_left[j] = net.rate(wrap(j - 1, m), j);
    q_right[j] = net.rate(wrap(j + 1, m), j);
  }

  // Arc (s, L) covers s..s+L-1, state index (L-1)*m + s; the full set is last.
  const Index arcs = m * (m - 1);
  const Index n = arcs + 1;
  Vector A(n), w_left(n), w_right(n);
  std::vector<Index> to_left(static_cast<std::size_t>(n)), to_right(static_cast<std::size_t>(n));
  for (Index L = 1; L < m; ++L) {
    for (Index s = 0; s < m; ++s) {
      const Index idx = (L - 1) * m + s;
      double arc = 0.0;
      for (Index i = 0; i < L; ++i) arc += net.p(wrap(s + i, m));
      const Index end = wrap(s + L - 1, m);
      A[idx] = arc + q_left[s] + q_right[end];
      w_left[idx] = q_left[s];    // node s-1 joins the arc
      w_right[idx] = q_right[end];  // node s+L joins the arc
      if (L == m - 1) {
        to_left[static_cast<std::size_t>(idx)] = arcs;
        to_right[static_cast<std::size_t>(idx)] = arcs;
      } else {
        to_left[static_cast<std::size_t>(idx)] = L * m + wrap(s - 1, m);
        to_right[static_cast<std::size_t>(idx)] = L * m + s;
      }
    }
  }
  A[arcs] = net.p().sum();
  w_left[arcs] = w_right[arcs] = 0.0;
  to_left[static_cast<std::size_t>(arcs)] = to_right[static_cast<std::size_t>(arcs)] = arcs;

  const Index g = grid.size();
  Vector f(g);
  auto rhs = [&](double, const Vector& y, Vector& dy) {
    for (Index i = 0; i < n; ++i)
      dy[i] = -A[i] * y[i] + w_left[i] * y[to_left[static_cast<std::size_t>(i)]] +
              w_right[i] * y[to_right[static_cast<std::size_t>(i)]];
  };
  integrate_on_grid<double>(
      rhs, Vector::Ones(n), grid.values(),
      [&](Index i, const Vector& y) { f[i] = -(y.head(m).array() - 1.0).sum() / static_cast<double>(m); },
      options.tolerance);
  return exact_curve(grid, std::move(f));
}

Network convert_two_sided_to_one_sided(const Network& net) {
  if (net.structure().kind != StructureKind::TwoSidedCircle)
    throw InvalidArgument("conversion needs a two-sided circle");
  const Index m = net.size();
  Vector q_in(m);
  for (Index j = 0; j < m; ++j) q_in[j] = net.rate(wrap(j - 1, m), j) + net.rate(wrap(j + 1, m), j);
  return build_one_sided_circle(net.p(), q_in, net.policy());
}

PlacementCurves solve_block_and_alternating_circles(const TimeGrid& grid, double p1, double p2, double q) {
  if (!(p1 > 0.0) || !(p2 > 0.0) || !(q > 0.0)) throw InvalidArgument("rates must be positive");
  const Index g = grid.size();
  Vector fa(g), fb(g);
  for (Index i = 0; i < g; ++i) fa[i] = 0.5 * (f_1d(grid[i], p1, q) + f_1d(grid[i], p2, q));

  // U' = q e^{-p1 t} V, V' = q e^{-p2 t} U, U(0) = V(0) = 1.
  auto rhs = [&](double t, const Vector& y, Vector& dy) {
    dy[0] = q * std::exp(-p1 * t) * y[1];
    dy[1] = q * std::exp(-p2 * t) * y[0];
  };
  const OdeTolerance tol{1e-10, 1e-10};
  integrate_on_grid<double>(
      rhs, Vector::Ones(2), grid.values(),
      [&](Index i, const Vector& y) {
        const double t = grid[i];
        fb[i] = 1.0 - std::exp(-q * t) * 0.5 * (std::exp(-p2 * t) * y[0] + std::exp(-p1 * t) * y[1]);
      },
      tol);
  return {exact_curve(grid, std::move(fa)), exact_curve(grid, std::move(fb))};
}

AdoptionCurve solve_master(const Network& net, const TimeGrid& grid) {
  switch (net.structure().kind) {
    case StructureKind::OneSidedCircle:
      return solve_onesided_circle(net, grid);
    case StructureKind::TwoSidedCircle:
      return solve_twosided_circle(net, grid);
    default:
      return solve_general_master(net, grid).curve;
  }
}

}  // namespace bassnet
