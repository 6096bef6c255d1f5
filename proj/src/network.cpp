#include "bassnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace bassnet {
namespace {

void check_rate(double r, const char* what) {
  if (!std::isfinite(r) || r < 0.0) throw InvalidArgument(std::string(what) + " must be finite and >= 0");
}

Index mod(Index a, Index m) { return ((a % m) + m) % m; }

bool torus_neighbors(Index a, Index b, int d, int side) {
  // Exactly one coordinate differs, by +-1 modulo side.
  int differing = 0;
  for (int k = 0; k < d; ++k) {
    const Index ca = a % side, cb = b % side;
    a /= side;
    b /= side;
    if (ca == cb) continue;
    ++differing;
    const Index diff = mod(ca - cb, side);
    if (diff != 1 && diff != side - 1) return false;
  }
  return differing == 1;
}

void check_pattern(const StructureTag& tag, Index m, const Edge& e) {
  const Index fwd = mod(e.to - e.from, m);
  switch (tag.kind) {
    case StructureKind::OneSidedCircle:
      if (fwd != 1) throw InvalidArgument("one-sided circle edges must go from j-1 to j");
      break;
    case StructureKind::TwoSidedCircle:
      if (fwd != 1 && fwd != m - 1) throw InvalidArgument("two-sided circle edges must join ring neighbors");
      break;
    case StructureKind::CartesianTorus:
      if (!torus_neighbors(e.from, e.to, tag.torus_dim, tag.torus_side))
        throw InvalidArgument("torus edges must join lattice neighbors");
      break;
    default:
      break;
  }
}

}  // namespace

Network::Network(Vector p, std::vector<Edge> edges, StructureTag tag, ZeroHazardPolicy policy)
    : p_(std::move(p)), tag_(tag), policy_(policy) {
  const Index m = p_.size();
  if (m < 1) throw InvalidArgument("network needs at least one node");
  for (Index j = 0; j < m; ++j) check_rate(p_[j], "p");

  if (tag_.kind == StructureKind::CartesianTorus) {
    if (tag_.torus_dim < 1 || tag_.torus_side < 3) throw InvalidArgument("invalid torus shape");
    Index expect = 1;
    for (int k = 0; k < tag_.torus_dim; ++k) expect *= tag_.torus_side;
    if (expect != m) throw InvalidArgument("torus node count must equal side^d");
  }

  for (const Edge& e : edges) {
    if (e.from < 0 || e.from >= m || e.to < 0 || e.to >= m) throw InvalidArgument("edge index out of range");
    if (e.from == e.to) throw InvalidArgument("self influence is not allowed");
    check_rate(e.rate, "edge rate");
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.to != b.to ? a.to < b.to : a.from < b.from;
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].to == edges[i - 1].to && edges[i].from == edges[i - 1].from)
      throw InvalidArgument("duplicate edge " + std::to_string(edges[i].from) + "->" +
                            std::to_string(edges[i].to));
  }
  std::erase_if(edges, [](const Edge& e) { return e.rate == 0.0; });
  for (const Edge& e : edges) check_pattern(tag_, m, e);

  in_offsets_.assign(m + 1, 0);
  out_offsets_.assign(m + 1, 0);
  for (const Edge& e : edges) {
    ++in_offsets_[e.to + 1];
    ++out_offsets_[e.from + 1];
  }
  std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());
  std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
  in_nbrs_.resize(edges.size());
  out_nbrs_.resize(edges.size());
  std::vector<Index> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    in_nbrs_[i] = {edges[i].from, edges[i].rate};
  }
  // Fill outgoing lists in destination order.
  std::vector<Edge> by_source = edges;
  std::stable_sort(by_source.begin(), by_source.end(),
                   [](const Edge& a, const Edge& b) { return a.from < b.from; });
  for (const Edge& e : by_source) out_nbrs_[out_fill[e.from]++] = {e.to, e.rate};

  q_in_ = Vector::Zero(m);
  q_out_ = Vector::Zero(m);
  for (const Edge& e : edges) {
    q_in_[e.to] += e.rate;
    q_out_[e.from] += e.rate;
  }
  if (policy_ == ZeroHazardPolicy::Reject) {
    for (Index j = 0; j < m; ++j) {
      if (p_[j] == 0.0 && q_in_[j] == 0.0)
        throw InvalidArgument("node " + std::to_string(j) + " can never adopt (p_j = 0 and q_j = 0)");
    }
  }

  if (m >= 2) {
    bool uniform = true;
    Vector w(m);
    for (Index j = 0; j < m && uniform; ++j) {
      const auto in = in_edges(j);
      if (static_cast<Index>(in.size()) != m - 1) {
        uniform = false;
        break;
      }
      w[j] = in.front().rate;
      for (const Neighbor& nb : in) uniform = uniform && nb.rate == w[j];
    }
    if (uniform) column_weights_ = std::move(w);
  }
}

std::span<const Neighbor> Network::in_edges(Index j) const {
  return {in_nbrs_.data() + in_offsets_[j], static_cast<std::size_t>(in_offsets_[j + 1] - in_offsets_[j])};
}

std::span<const Neighbor> Network::out_edges(Index k) const {
  return {out_nbrs_.data() + out_offsets_[k], static_cast<std::size_t>(out_offsets_[k + 1] - out_offsets_[k])};
}

double Network::rate(Index i, Index j) const {
  const auto in = in_edges(j);
  const auto it = std::lower_bound(in.begin(), in.end(), i,
                                   [](const Neighbor& nb, Index v) { return nb.node < v; });
  return (it != in.end() && it->node == i) ? it->rate : 0.0;
}

Matrix Network::dense_q() const {
  const Index m = size();
  Matrix q = Matrix::Zero(m, m);
  for (Index j = 0; j < m; ++j)
    for (const Neighbor& nb : in_edges(j)) q(nb.node, j) = nb.rate;
  return q;
}

std::vector<Edge> Network::edges() const {
  std::vector<Edge> out;
  out.reserve(in_nbrs_.size());
  for (Index j = 0; j < size(); ++j)
    for (const Neighbor& nb : in_edges(j)) out.push_back({nb.node, j, nb.rate});
  return out;
}

Network build_complete(const MildHetSpec& spec) {
  const Index m = spec.p.size();
  if (m < 2) throw InvalidArgument("complete network needs m >= 2");
  if (spec.q_node.size() != m) throw InvalidArgument("p and q_node lengths differ");
  for (Index j = 0; j < m; ++j) {
    if (!(spec.q_node[j] > 0.0) || !std::isfinite(spec.q_node[j]))
      throw InvalidArgument("q_node entries must be positive");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m * (m - 1)));
  const double deg = static_cast<double>(m - 1);
  for (Index j = 0; j < m; ++j) {
    const double w = spec.q_node[j] / deg;
    for (Index i = 0; i < m; ++i)
      if (i != j) edges.push_back({i, j, w});
  }
  return Network(spec.p, std::move(edges), {StructureKind::Complete});
}

Network build_custom(Vector p, std::span<const Edge> edges, ZeroHazardPolicy policy) {
  return Network(std::move(p), {edges.begin(), edges.end()}, {StructureKind::Custom}, policy);
}

Network build_one_sided_circle(Vector p, const Vector& q_in, ZeroHazardPolicy policy) {
  const Index m = p.size();
  if (m < 2) throw InvalidArgument("one-sided circle needs m >= 2");
  if (q_in.size() != m) throw InvalidArgument("p and q_in lengths differ");
  std::vector<Edge> edges;
  for (Index j = 0; j < m; ++j) {
    if (policy == ZeroHazardPolicy::Reject && !(q_in[j] > 0.0))
      throw InvalidArgument("q_in entries must be positive");
    edges.push_back({mod(j - 1, m), j, q_in[j]});
  }
  return Network(std::move(p), std::move(edges), {StructureKind::OneSidedCircle}, policy);
}

Network build_two_sided_circle(Vector p, const Vector& q_left, const Vector& q_right, ZeroHazardPolicy policy) {
  const Index m = p.size();
  if (m < 3) throw InvalidArgument("two-sided circle needs m >= 3");
  if (q_left.size() != m || q_right.size() != m) throw InvalidArgument("rate vector lengths differ");
  std::vector<Edge> edges;
  for (Index j = 0; j < m; ++j) {
    if (policy == ZeroHazardPolicy::Reject && !(q_left[j] + q_right[j] > 0.0))
      throw InvalidArgument("node " + std::to_string(j) + " has zero in-influence");
    edges.push_back({mod(j - 1, m), j, q_left[j]});
    edges.push_back({mod(j + 1, m), j, q_right[j]});
  }
  return Network(std::move(p), std::move(edges), {StructureKind::TwoSidedCircle}, policy);
}

Network build_cartesian_torus(int d, int side, double p, double q) {
  if (d < 1) throw InvalidArgument("torus dimension must be >= 1");
  if (side < 3) throw InvalidArgument("torus side must be >= 3");
  check_rate(p, "p");
  if (!(q > 0.0) || !std::isfinite(q)) throw InvalidArgument("q must be positive");
  Index m = 1;
  for (int k = 0; k < d; ++k) m *= side;
  const double w = q / (2.0 * d);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m * 2 * d));
  for (Index j = 0; j < m; ++j) {
    Index stride = 1;
    for (int k = 0; k < d; ++k) {
      const Index c = (j / stride) % side;
      const Index up = j + (mod(c + 1, side) - c) * stride;
      const Index down = j + (mod(c - 1, side) - c) * stride;
      edges.push_back({up, j, w});
      edges.push_back({down, j, w});
      stride *= side;
    }
  }
  return Network(Vector::Constant(m, p), std::move(edges), {StructureKind::CartesianTorus, d, side});
}

Network homogeneous_counterpart(const Network& net) {
  const auto kind = net.structure().kind;
  if (kind != StructureKind::Complete && kind != StructureKind::Custom)
    throw InvalidArgument("homogeneous counterpart is defined for complete networks");
  const Index m = net.size();
  if (m < 2) throw InvalidArgument("homogeneous counterpart needs m >= 2");
  const double p_mean = net.p().sum() / static_cast<double>(m);
  const double q_mean = net.in_influences().sum() / static_cast<double>(m);
  if (!(q_mean > 0.0)) throw InvalidArgument("mean in-influence must be positive");
  return build_complete({Vector::Constant(m, p_mean), Vector::Constant(m, q_mean)});
}

Network shift_p(const Network& net, double delta_p) {
  if (!std::isfinite(delta_p)) throw InvalidArgument("delta_p must be finite");
  Vector p = net.p().array() + delta_p;
  if (p.minCoeff() < 0.0) throw InvalidArgument("shift makes a rate negative");
  return Network(std::move(p), net.edges(), net.structure(), net.policy());
}

Network add_node(const Network& net, double p_new, double q_in_new, double q_out_new) {
  check_rate(p_new, "p_new");
  check_rate(q_in_new, "q_in_new");
  check_rate(q_out_new, "q_out_new");
  const Index m = net.size();
  Vector p(m + 1);
  p.head(m) = net.p();
  p[m] = p_new;
  std::vector<Edge> edges = net.edges();
  for (Index i = 0; i < m; ++i) {
    edges.push_back({i, m, q_in_new});
    edges.push_back({m, i, q_out_new});
  }
  return Network(std::move(p), std::move(edges), {StructureKind::Custom}, net.policy());
}

bool is_homogeneous_complete(const Network& net, double rel_tol) {
  const auto& w = net.uniform_column_weights();
  if (!w) return false;
  const double p0 = net.p(0), w0 = (*w)[0];
  for (Index j = 0; j < net.size(); ++j) {
    if (std::abs(net.p(j) - p0) > rel_tol * std::abs(p0)) return false;
    if (std::abs((*w)[j] - w0) > rel_tol * std::abs(w0)) return false;
  }
  return true;
}

}  // namespace bassnet
