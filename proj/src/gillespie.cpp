#include "bassnet/gillespie.hpp"

#include "bassnet/detail/sum_tree.hpp"
#include "bassnet/parallel.hpp"
#include "bassnet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace bassnet {
namespace {

// Reusable per-worker sampler. Complete networks with uniform incoming
// weights per column (lambda_j = p_j + w_j * adopted_count) use two trees and
// skip per-edge updates; everything else updates out-neighbors per event.
class Simulator {
 public:
  explicit Simulator(const Network& net) : net_(net), m_(static_cast<std::size_t>(net.size())) {
    adopted_.resize(m_);
    if (net.uniform_column_weights()) {
      uniform_ = true;
      ext_.reset(m_);
      int_.reset(m_);
    } else {
      lambda_.resize(m_);
      tree_.reset(m_);
    }
    record_.adoption_times.reserve(m_);
    record_.adopter_ids.reserve(m_);
  }

  const RealizationRecord& run(CounterRng& rng, double horizon) {
    record_.adoption_times.clear();
    record_.adopter_ids.clear();
    record_.truncated = false;
    std::fill(adopted_.begin(), adopted_.end(), 0);
    if (uniform_) {
      ext_.assign(net_.p());
      int_.assign(*net_.uniform_column_weights());
    } else {
      for (std::size_t j = 0; j < m_; ++j) lambda_[j] = net_.p(static_cast<Index>(j));
      tree_.assign(lambda_);
    }

    double t = 0.0;
    for (std::size_t n = 0; n < m_; ++n) {
      const double ext_total = uniform_ ? ext_.total() : 0.0;
      const double total = uniform_ ? ext_total + static_cast<double>(n) * int_.total() : tree_.total();
      if (!(total > 0.0)) {
        record_.truncated = true;
        break;
      }
      const double dt = -std::log(rng.uniform_open_closed()) / total;
      if (t + dt > horizon) {
        record_.truncated = true;
        break;
      }
      t += dt;
      const double v = rng.uniform() * total;
      std::size_t j;
      if (uniform_) {
        j = (v < ext_total || n == 0) ? ext_.find(v) : int_.find((v - ext_total) / static_cast<double>(n));
        ext_.set(j, 0.0);
        int_.set(j, 0.0);
      } else {
        j = tree_.find(v);
        tree_.set(j, 0.0);
        lambda_[j] = 0.0;
        for (const Neighbor& nb : net_.out_edges(static_cast<Index>(j))) {
          const auto k = static_cast<std::size_t>(nb.node);
          if (adopted_[k]) continue;
          lambda_[k] += nb.rate;
          tree_.set(k, lambda_[k]);
        }
      }
      adopted_[j] = 1;
      record_.adoption_times.push_back(t);
      record_.adopter_ids.push_back(static_cast<Index>(j));
    }
    return record_;
  }

 private:
  const Network& net_;
  std::size_t m_;
  bool uniform_ = false;
  std::vector<char> adopted_;
  std::vector<double> lambda_;
  detail::SumTree tree_, ext_, int_;
  RealizationRecord record_;
};

// Runs realizations [0, n) split into contiguous chunks, one per worker.
// `make_acc` creates a per-worker accumulator; `body(acc, record)` consumes a
// realization; accumulators are returned in worker order for merging.
template <typename Acc, typename MakeAcc, typename Body>
std::vector<Acc> run_parallel(const Network& net, std::uint64_t n, std::uint64_t seed, double horizon,
                              unsigned threads, MakeAcc make_acc, Body body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, resolve_thread_count(threads)), std::max<std::uint64_t>(n, 1)));
  std::vector<Acc> accs;
  accs.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) accs.push_back(make_acc());

  auto work = [&](unsigned w) {
    Simulator sim(net);
    const std::uint64_t begin = n * w / workers, end = n * (w + 1) / workers;
    for (std::uint64_t r = begin; r < end; ++r) {
      CounterRng rng(seed, r);
      body(accs[w], sim.run(rng, horizon));
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  return accs;
}

__extension__ typedef __int128 wide;

struct CountAcc {
  std::vector<std::uint64_t> sum, sumsq;
};

}  // namespace

RealizationRecord simulate_realization(const Network& net, std::uint64_t seed, std::optional<double> horizon,
                                       std::uint64_t stream) {
  Simulator sim(net);
  CounterRng rng(seed, stream);
  return sim.run(rng, horizon.value_or(std::numeric_limits<double>::infinity()));
}

AdoptionCurve estimate_adoption_curve(const Network& net, const TimeGrid& grid, std::uint64_t n,
                                      std::uint64_t seed, const MonteCarloOptions& options) {
  if (n < 1) throw InvalidArgument("need at least one realization");
  const Index g = grid.size();
  const double horizon = std::min(grid.back(), options.horizon.value_or(grid.back()));
  const auto& t = grid.values();

  auto accs = run_parallel<CountAcc>(
      net, n, seed, horizon, options.threads,
      [g] { return CountAcc{std::vector<std::uint64_t>(g, 0), std::vector<std::uint64_t>(g, 0)}; },
      [&](CountAcc& acc, const RealizationRecord& rec) {
        std::size_t idx = 0;
        const auto& times = rec.adoption_times;
        for (Index i = 0; i < g; ++i) {
          while (idx < times.size() && times[idx] <= t[i]) ++idx;
          acc.sum[i] += idx;
          acc.sumsq[i] += static_cast<std::uint64_t>(idx) * idx;
        }
      });

  AdoptionCurve curve;
  curve.t = t;
  curve.f.resize(g);
  curve.n_realizations = n;
  if (n >= 2) curve.ci_half_width = Vector(g);
  const double m = static_cast<double>(net.size());
  for (Index i = 0; i < g; ++i) {
    std::uint64_t s = 0, s2 = 0;
    for (const auto& a : accs) {
      s += a.sum[i];
      s2 += a.sumsq[i];
    }
    curve.f[i] = static_cast<double>(s) / (static_cast<double>(n) * m);
    if (n >= 2) {
      const wide centered = static_cast<wide>(n) * s2 - static_cast<wide>(s) * s;
      const double var = static_cast<double>(centered) / (static_cast<double>(n) * static_cast<double>(n - 1));
      (*curve.ci_half_width)[i] = 1.96 * std::sqrt(std::max(0.0, var) / static_cast<double>(n)) / m;
    }
  }
  return curve;
}

EmpiricalCdfSet estimate_interadoption_cdfs(const Network& net, const TimeGrid& tau, std::uint64_t n,
                                            std::uint64_t seed, const MonteCarloOptions& options) {
  if (n < 1) throw InvalidArgument("need at least one realization");
  const auto m = static_cast<std::size_t>(net.size());
  const auto g = static_cast<std::size_t>(tau.size());
  const auto& grid = tau.values();
  const double horizon = options.horizon.value_or(std::numeric_limits<double>::infinity());

  // hist[k * (g + 1) + b]: step-k samples whose first grid point at or above t_k is b.
  auto accs = run_parallel<std::vector<std::uint64_t>>(
      net, n, seed, horizon, options.threads, [&] { return std::vector<std::uint64_t>(m * (g + 1), 0); },
      [&](std::vector<std::uint64_t>& hist, const RealizationRecord& rec) {
        double prev = 0.0;
        for (std::size_t k = 0; k < rec.adoption_times.size(); ++k) {
          const double dt = rec.adoption_times[k] - prev;
          prev = rec.adoption_times[k];
          const auto b = static_cast<std::size_t>(
              std::lower_bound(grid.data(), grid.data() + g, dt) - grid.data());
          ++hist[k * (g + 1) + b];
        }
      });

  EmpiricalCdfSet out;
  out.tau = grid;
  out.F = Matrix::Zero(static_cast<Index>(m), static_cast<Index>(g));
  out.samples.assign(m, 0);
  out.excluded.assign(m, 0);
  for (std::size_t k = 0; k < m; ++k) {
    std::uint64_t cum = 0;
    std::vector<std::uint64_t> row(g + 1, 0);
    for (const auto& hist : accs)
      for (std::size_t b = 0; b <= g; ++b) row[b] += hist[k * (g + 1) + b];
    std::uint64_t total = 0;
    for (auto c : row) total += c;
    out.samples[k] = total;
    out.excluded[k] = n - total;
    for (std::size_t b = 0; b < g; ++b) {
      cum += row[b];
      out.F(static_cast<Index>(k), static_cast<Index>(b)) =
          total ? static_cast<double>(cum) / static_cast<double>(total) : 0.0;
    }
  }
  return out;
}

}  // namespace bassnet
